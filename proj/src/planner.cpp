#include "delp/planner.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "delp/bisimulation.hpp"
#include "delp/kernels.hpp"
#include "delp/semantics.hpp"

namespace delp {

std::optional<SequentialPlan> solve_sequential(const EpistemicTask& task, const SearchOptions& options,
                                               SearchStats* stats) {
  check_task(task);
  SearchStats local_stats;
  SearchStats& st = stats ? *stats : local_stats;
  st = {};

  struct Node {
    std::size_t parent;
    std::size_t action;
  };
  std::vector<Node> nodes{{SIZE_MAX, SIZE_MAX}};
  std::unordered_set<std::string> visited{canonical_key(task.initial)};
  st.distinct = 1;
  if (eval_state(task.initial, task.goal)) return SequentialPlan{};

  auto plan_to = [&](std::size_t n) {
    SequentialPlan plan;
    for (; nodes[n].parent != SIZE_MAX; n = nodes[n].parent) plan.push_back(task.actions[nodes[n].action].name());
    std::reverse(plan.begin(), plan.end());
    return plan;
  };

  std::vector<EpistemicState> frontier{options.contract ? bisim_contract(task.initial) : task.initial};
  std::vector<std::size_t> frontier_ids{0};
  for (std::size_t depth = 0; depth < options.depth_cap && !frontier.empty(); ++depth) {
    st.expanded += frontier.size();
    auto successors = expand_level(task, frontier, options.contract, options.backend);
    st.generated += successors.size();
    std::vector<EpistemicState> next;
    std::vector<std::size_t> next_ids;
    for (auto& s : successors) {
      if (!visited.insert(s.key).second) continue;
      ++st.distinct;
      nodes.push_back({frontier_ids[s.parent], s.action});
      if (s.goal) return plan_to(nodes.size() - 1);
      next.push_back(std::move(s.state));
      next_ids.push_back(nodes.size() - 1);
    }
    frontier = std::move(next);
    frontier_ids = std::move(next_ids);
  }
  return std::nullopt;
}

void Policy::assign(const EpistemicState& global, const std::string& action) {
  if (!global.is_global()) throw std::invalid_argument("policies are defined on global states only");
  EpistemicState contracted = bisim_contract(global);
  std::string key = contracted_key(contracted);
  std::string local_key = canonical_key(local_state(contracted, owner_));
  entries_.insert_or_assign(std::move(key), PolicyEntry{std::move(contracted), action, std::move(local_key)});
}

const PolicyEntry* Policy::lookup(const EpistemicState& global) const {
  auto it = entries_.find(canonical_key(global));
  return it == entries_.end() ? nullptr : &it->second;
}

std::optional<Policy> solve_policy(const EpistemicTask& task, const SearchOptions& options, SearchStats* stats) {
  check_task(task);
  if (!task.owner) throw std::invalid_argument("policy search needs a task owner");
  const AgentId owner = *task.owner;
  SearchStats local_stats;
  SearchStats& st = stats ? *stats : local_stats;
  st = {};

  struct Node {
    View view;
    std::size_t depth;
    bool expanded = false;
    std::vector<std::optional<std::vector<std::size_t>>> branches;  // per action
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  auto intern = [&](View v, std::size_t depth) {
    auto [it, fresh] = index.emplace(v.key, nodes.size());
    if (fresh) nodes.push_back({std::move(v), depth, false, {}});
    return it->second;
  };

  std::vector<std::size_t> roots;
  for (const auto& g : globals(task.initial)) {
    std::size_t id = intern(view_of(g, owner, task.goal), 0);
    if (std::find(roots.begin(), roots.end(), id) == roots.end()) roots.push_back(id);
  }

  // Level-synchronous expansion of the AND-OR graph.
  std::vector<std::size_t> level;
  for (std::size_t r : roots) {
    if (!nodes[r].view.goal) level.push_back(r);
  }
  for (std::size_t depth = 0; depth < options.depth_cap && !level.empty(); ++depth) {
    std::vector<View> views;
    views.reserve(level.size());
    for (std::size_t id : level) views.push_back(nodes[id].view);
    auto expansions = expand_views(task, views, options.backend);
    st.expanded += level.size();
    std::vector<std::size_t> next;
    for (std::size_t k = 0; k < level.size(); ++k) {
      const std::size_t id = level[k];
      std::vector<std::optional<std::vector<std::size_t>>> branches(task.actions.size());
      for (std::size_t a = 0; a < task.actions.size(); ++a) {
        auto& b = expansions[k].branches[a];
        if (!b.applicable) continue;
        std::vector<std::size_t> kids;
        for (auto& child : b.children) {
          ++st.generated;
          const std::size_t before = nodes.size();
          std::size_t cid = intern(std::move(child), depth + 1);
          if (nodes.size() > before && !nodes[cid].view.goal) next.push_back(cid);
          kids.push_back(cid);
        }
        branches[a] = std::move(kids);
      }
      nodes[id].branches = std::move(branches);
      nodes[id].expanded = true;
    }
    level = std::move(next);
  }
  st.distinct = nodes.size();

  // Worst-case heights, computed bottom-up by rounds.
  constexpr std::size_t kUnsolved = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> height(nodes.size(), kUnsolved);
  std::vector<std::size_t> choice(nodes.size(), kUnsolved);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].view.goal) height[n] = 0;
  }
  auto roots_solved = [&] {
    return std::all_of(roots.begin(), roots.end(), [&](std::size_t r) { return height[r] != kUnsolved; });
  };
  for (std::size_t k = 1; k <= options.depth_cap && !roots_solved(); ++k) {
    bool changed = false;
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (height[n] != kUnsolved || !nodes[n].expanded) continue;
      for (std::size_t a = 0; a < nodes[n].branches.size(); ++a) {
        const auto& kids = nodes[n].branches[a];
        if (!kids || kids->empty()) continue;
        bool ok = std::all_of(kids->begin(), kids->end(), [&](std::size_t c) { return height[c] < k; });
        if (ok) {
          height[n] = k;
          choice[n] = a;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }
  if (!roots_solved()) return std::nullopt;

  Policy policy(owner);
  std::vector<char> seen(nodes.size(), 0);
  std::deque<std::size_t> queue(roots.begin(), roots.end());
  for (std::size_t r : roots) seen[r] = 1;
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    if (height[n] == 0) continue;
    const View& v = nodes[n].view;
    const std::string& action = task.actions[choice[n]].name();
    for (WorldId w : v.representatives) policy.assign(EpistemicState(v.state.model_ptr(), {w}), action);
    for (std::size_t c : *nodes[n].branches[choice[n]]) {
      if (!seen[c]) {
        seen[c] = 1;
        queue.push_back(c);
      }
    }
  }
  return policy;
}

Policy build_policy(const EpistemicTask& task,
                    const std::function<std::optional<std::string>(const EpistemicState& view)>& rule,
                    std::size_t max_steps) {
  if (!task.owner) throw std::invalid_argument("policies need a task owner");
  const AgentId owner = *task.owner;
  Policy policy(owner);
  std::set<std::string> visited;
  std::deque<std::pair<EpistemicState, std::size_t>> queue;
  for (const auto& g : globals(task.initial)) {
    EpistemicState c = bisim_contract(g);
    if (visited.insert(contracted_key(c)).second) queue.emplace_back(std::move(c), 0);
  }
  while (!queue.empty()) {
    auto [g, depth] = queue.front();
    queue.pop_front();
    const EpistemicState view = bisim_contract(local_state(g, owner));
    auto name = rule(view);
    if (!name) continue;
    policy.assign(g, *name);
    const EpistemicAction* a = find_action(task, *name);
    if (!a || depth >= max_steps || !applicable(view, *a)) continue;
    for (const auto& next : globals(product_update(g, *a))) {
      EpistemicState c = bisim_contract(next);
      if (visited.insert(contracted_key(c)).second) queue.emplace_back(std::move(c), depth + 1);
    }
  }
  return policy;
}

const char* outcome_name(Execution::Outcome o) {
  switch (o) {
    case Execution::Outcome::success:
      return "success";
    case Execution::Outcome::failure:
      return "failure";
    case Execution::Outcome::cutoff:
      return "cutoff";
  }
  return "?";
}

Chooser seeded_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](std::size_t n) { return static_cast<std::size_t>((*rng)() % n); };
}

Execution execute(const EpistemicTask& task, const Policy& policy, const EpistemicState& start,
                  const Chooser& chooser, std::size_t max_steps) {
  if (!start.is_global()) throw std::invalid_argument("executions start from a global state");
  Execution ex;
  ex.states.push_back(start);
  for (;;) {
    const EpistemicState& s = ex.states.back();
    const PolicyEntry* entry = policy.lookup(s);
    if (!entry) {
      if (eval_state(s, task.goal)) {
        ex.outcome = Execution::Outcome::success;
      } else {
        ex.outcome = Execution::Outcome::failure;
        ex.reason = "policy undefined at a non-goal state";
      }
      return ex;
    }
    if (ex.actions.size() >= max_steps) {
      ex.outcome = Execution::Outcome::cutoff;
      ex.reason = "step bound reached";
      return ex;
    }
    const EpistemicAction* a = find_action(task, entry->action);
    if (!a) {
      ex.outcome = Execution::Outcome::failure;
      ex.reason = "unknown action " + entry->action;
      return ex;
    }
    if (!applicable(local_state(s, policy.owner()), *a)) {
      ex.outcome = Execution::Outcome::failure;
      ex.reason = entry->action + " is not applicable in the owner's view";
      return ex;
    }
    auto outcomes = globals(product_update(s, *a));
    const std::size_t pick = chooser(outcomes.size());
    ex.actions.push_back(entry->action);
    ex.states.push_back(bisim_contract(outcomes.at(pick)));
  }
}

namespace {

struct Enumerator {
  const EpistemicTask& task;
  const Policy& policy;
  PolicyReport& report;
  std::unordered_map<std::string, bool> verdict;  // memo for unrecorded sweeps
  std::size_t runs_budget = 100000;

  // Returns true iff every execution from `s` succeeds.
  bool explore(const EpistemicState& s, std::vector<std::string>& path_keys, std::vector<std::string>& trace,
               std::optional<std::size_t> record_start) {
    const std::string key = canonical_key(s);
    if (!record_start) {
      if (auto it = verdict.find(key); it != verdict.end()) return it->second;
    }
    auto finish = [&](Execution::Outcome outcome, const std::string& why) {
      if (record_start && report.executions.size() < runs_budget) {
        report.executions.push_back({*record_start, trace, outcome});
      }
      if (outcome != Execution::Outcome::success) {
        report.violations.push_back({"execution", why, trace});
        return false;
      }
      return true;
    };
    if (std::find(path_keys.begin(), path_keys.end(), key) != path_keys.end()) {
      return finish(Execution::Outcome::failure, "execution revisits a state (cycle)");
    }
    const PolicyEntry* entry = policy.lookup(s);
    bool ok;
    if (!entry) {
      ok = eval_state(s, task.goal) ? finish(Execution::Outcome::success, "")
                                    : finish(Execution::Outcome::failure, "execution ends in a non-goal state");
    } else if (const EpistemicAction* a = find_action(task, entry->action);
               !a || !applicable(local_state(s, policy.owner()), *a)) {
      ok = finish(Execution::Outcome::failure, "policy action " + entry->action + " cannot be executed");
    } else {
      ok = true;
      path_keys.push_back(key);
      for (const auto& next : globals(product_update(s, *a))) {
        trace.push_back(entry->action);
        ok = explore(bisim_contract(next), path_keys, trace, record_start) && ok;
        trace.pop_back();
      }
      path_keys.pop_back();
    }
    verdict[key] = ok;
    return ok;
  }
};

}  // namespace

PolicyReport validate_policy(const EpistemicTask& task, const Policy& policy) {
  PolicyReport report;
  const AgentId owner = policy.owner();

  std::map<std::string, std::set<std::string>> by_view;
  for (const auto& [key, entry] : policy.entries()) {
    by_view[entry.local_key].insert(entry.action);
    const EpistemicAction* a = find_action(task, entry.action);
    if (!a) {
      report.violations.push_back({"unknown-action", "policy uses undefined action " + entry.action, {}});
      continue;
    }
    if (!applicable(local_state(entry.state, owner), *a)) {
      report.violations.push_back({"applicability",
                                   entry.action + " is not applicable in the owner's view of " +
                                       summarize(entry.state),
                                   {}});
    }
  }
  for (const auto& [view, actions] : by_view) {
    if (actions.size() > 1) {
      std::string list;
      for (const auto& a : actions) list += (list.empty() ? "" : ", ") + a;
      report.violations.push_back(
          {"uniformity", "indistinguishable states (view " + digest_hex(view) + ") map to " + list, {}});
    }
  }

  const auto starts = globals(task.initial);
  for (std::size_t k = 0; k < starts.size(); ++k) {
    if (!policy.lookup(starts[k]) && !eval_state(starts[k], task.goal)) {
      report.violations.push_back({"coverage", "initial global state " + summarize(starts[k]) + " is not covered", {}});
    }
  }

  Enumerator en{task, policy, report, {}};
  for (std::size_t k = 0; k < starts.size(); ++k) {
    std::vector<std::string> path;
    std::vector<std::string> trace;
    en.explore(bisim_contract(starts[k]), path, trace, k);
  }
  // Every domain state must be safe too, even if no execution from s_0 reaches it.
  for (const auto& [key, entry] : policy.entries()) {
    std::vector<std::string> path;
    std::vector<std::string> trace;
    en.explore(entry.state, path, trace, std::nullopt);
  }
  return report;
}

PlanReport validate_plan(const EpistemicTask& task, const SequentialPlan& plan) {
  std::vector<const EpistemicAction*> actions;
  for (const auto& name : plan) {
    const EpistemicAction* a = find_action(task, name);
    if (!a) throw std::invalid_argument("unknown action '" + name + "'");
    actions.push_back(a);
  }
  PlanReport report;
  EpistemicState s = task.initial;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    if (auto w = inapplicable_witness(s, *actions[k])) {
      report.failed_step = k;
      report.message = "step " + std::to_string(k + 1) + " (" + plan[k] +
                       ") is not applicable: no designated event fits world " + s.model().world_name(*w);
      return report;
    }
    s = bisim_contract(product_update(s, *actions[k]));
  }
  report.goal_reached = eval_state(s, task.goal);
  report.valid = report.goal_reached;
  report.message = report.goal_reached ? "plan reaches the goal" : "final state does not satisfy the goal";
  report.final_state = std::move(s);
  return report;
}

}  // namespace delp
