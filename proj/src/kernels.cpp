#include "delp/kernels.hpp"

#include <algorithm>

#include "delp/bisimulation.hpp"
#include "delp/semantics.hpp"

namespace delp {

std::vector<Successor> expand_level(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                    bool contract, Backend backend) {
  std::vector<std::vector<Successor>> per_node(frontier.size());
  parallel_for_indexed(frontier.size(), backend, [&](std::size_t n) {
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      if (!applicable(frontier[n], task.actions[a])) continue;
      EpistemicState next = product_update(frontier[n], task.actions[a]);
      EpistemicState reduced = bisim_contract(next);
      std::string key = contracted_key(reduced);
      const bool goal = eval_state(reduced, task.goal);
      per_node[n].push_back({n, a, contract ? std::move(reduced) : std::move(next), std::move(key), goal});
    }
  });
  std::vector<Successor> out;
  for (auto& v : per_node) {
    std::move(v.begin(), v.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<Successor> expand_serial(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                     bool contract) {
  return expand_level(task, frontier, contract, Backend::serial);
}

std::vector<Successor> expand_openmp(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                     bool contract) {
  return expand_level(task, frontier, contract, Backend::openmp);
}

View view_of(const EpistemicState& global, AgentId owner, const Formula& goal) {
  EpistemicState local = bisim_contract(local_state(global, owner));
  std::string key = contracted_key(local);
  const auto goal_truth = truth_set(local.model(), goal);
  std::vector<WorldId> reps;
  bool all_goal = true;
  for (WorldId w : local.designated()) {
    EpistemicState g(local.model_ptr(), {w});
    if (canonical_key(local_state(g, owner)) != key) continue;
    reps.push_back(w);
    all_goal = all_goal && goal_truth[w] != 0;
  }
  return {std::move(local), std::move(key), std::move(reps), all_goal};
}

std::vector<ViewExpansion> expand_views(const EpistemicTask& task, const std::vector<View>& views,
                                        Backend backend) {
  const AgentId owner = task.owner.value();
  std::vector<ViewExpansion> out(views.size());
  parallel_for_indexed(views.size(), backend, [&](std::size_t n) {
    const View& v = views[n];
    auto& branches = out[n].branches;
    branches.resize(task.actions.size());
    const EpistemicState reps(v.state.model_ptr(), v.representatives);
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      if (!applicable(v.state, task.actions[a])) continue;
      branches[a].applicable = true;
      const EpistemicState next = product_update(reps, task.actions[a]);
      for (const auto& g : globals(next)) {
        View child = view_of(g, owner, task.goal);
        auto& kids = branches[a].children;
        bool seen = std::any_of(kids.begin(), kids.end(), [&](const View& k) { return k.key == child.key; });
        if (!seen) kids.push_back(std::move(child));
      }
    }
  });
  return out;
}

}  // namespace delp
