#pragma once
// Random generators and brute-force oracles shared by the test suites. The
// oracles deliberately avoid the library's own algorithms: evaluation is a
// direct recursion over the formula, bisimilarity is the greatest fixpoint
// over world pairs, and plan search enumerates every action sequence.

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "delp/action.hpp"
#include "delp/bisimulation.hpp"
#include "delp/classical.hpp"
#include "delp/dsl.hpp"
#include "delp/model.hpp"
#include "delp/planner.hpp"
#include "delp/semantics.hpp"
#include "delp/task.hpp"

namespace test {

using namespace delp;

constexpr std::uint64_t kSeed = 0x5eed2026;

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

inline std::string task_path(const std::string& name) { return std::string(DELP_TASK_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline TaskDocument load_task(const std::string& name) {
  auto r = parse_task(slurp(task_path(name)));
  if (!r.ok()) {
    std::string msg = name + ":";
    for (const auto& d : r.diagnostics) msg += " " + format_diagnostic(d);
    throw std::runtime_error(msg);
  }
  return std::move(*r.document);
}

inline VocabularyPtr small_vocab(std::size_t agents, std::size_t atoms) {
  std::vector<std::string> ag;
  std::vector<std::string> at;
  for (std::size_t i = 0; i < agents; ++i) ag.push_back(std::string(1, static_cast<char>('a' + i)));
  for (std::size_t p = 0; p < atoms; ++p) at.push_back("p" + std::to_string(p));
  return make_vocabulary(ag, at);
}

inline Valuation random_valuation(Rng& rng, const Vocabulary& vocab) {
  Valuation v(vocab.atom_count());
  for (AtomId p = 0; p < vocab.atom_count(); ++p) {
    if (coin(rng)) v.insert(p);
  }
  return v;
}

inline EpistemicState random_state(Rng& rng, const VocabularyPtr& vocab, std::size_t max_worlds,
                                   double edge_p = 0.35) {
  const std::size_t n = 1 + pick(rng, max_worlds);
  std::vector<EpistemicModel::World> worlds;
  for (std::size_t w = 0; w < n; ++w) worlds.push_back({"w" + std::to_string(w), random_valuation(rng, *vocab)});
  std::vector<EpistemicModel::Edge> edges;
  for (AgentId i = 0; i < vocab->agent_count(); ++i) {
    for (WorldId w = 0; w < n; ++w) {
      for (WorldId v = 0; v < n; ++v) {
        if (w != v && coin(rng, edge_p)) edges.push_back({i, w, v});
      }
    }
  }
  std::vector<WorldId> designated;
  for (WorldId w = 0; w < n; ++w) {
    if (coin(rng, 0.4)) designated.push_back(w);
  }
  if (designated.empty()) designated.push_back(static_cast<WorldId>(pick(rng, n)));
  auto model = std::make_shared<const EpistemicModel>(vocab, std::move(worlds), edges);
  return EpistemicState(std::move(model), std::move(designated));
}

inline Formula random_formula(Rng& rng, const Vocabulary& vocab, int depth) {
  if (depth <= 0 || coin(rng, 0.25)) {
    const auto r = pick(rng, 10);
    if (r == 0) return Formula::top();
    if (r == 1) return Formula::bottom();
    return Formula::atom(static_cast<AtomId>(pick(rng, vocab.atom_count())));
  }
  switch (pick(rng, 6)) {
    case 0:
      return !random_formula(rng, vocab, depth - 1);
    case 1:
      return random_formula(rng, vocab, depth - 1) && random_formula(rng, vocab, depth - 1);
    case 2:
      return random_formula(rng, vocab, depth - 1) || random_formula(rng, vocab, depth - 1);
    case 3:
    case 4:
      return Formula::knows(static_cast<AgentId>(pick(rng, vocab.agent_count())), random_formula(rng, vocab, depth - 1));
    default:
      return Formula::common(random_formula(rng, vocab, depth - 1));
  }
}

inline LiteralConjunction random_literals(Rng& rng, const Vocabulary& vocab, double p = 0.3) {
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
  for (AtomId a = 0; a < vocab.atom_count(); ++a) {
    if (!coin(rng, p)) continue;
    (coin(rng) ? pos : neg).push_back(a);
  }
  return LiteralConjunction(pos, neg);
}

inline EpistemicAction random_action(Rng& rng, const VocabularyPtr& vocab, const std::string& name,
                                     std::size_t max_events, bool epistemic_pre, bool guards) {
  const std::size_t n = 1 + pick(rng, max_events);
  std::vector<Event> events;
  for (std::size_t e = 0; e < n; ++e) {
    Formula pre = epistemic_pre && coin(rng, 0.3) ? random_formula(rng, *vocab, 2)
                                                  : random_literals(rng, *vocab, 0.3).to_formula();
    events.push_back({"e" + std::to_string(e), pre, random_literals(rng, *vocab, 0.4)});
  }
  std::vector<EdgeGuard> edges;
  for (AgentId i = 0; i < vocab->agent_count(); ++i) {
    for (EventId e = 0; e < n; ++e) {
      for (EventId f = 0; f < n; ++f) {
        if (e == f || !coin(rng, 0.4)) continue;
        Formula cond = guards && coin(rng, 0.3) ? random_literals(rng, *vocab, 0.5).to_formula() : Formula::top();
        edges.push_back({i, e, f, cond});
      }
    }
  }
  std::vector<EventId> designated;
  for (EventId e = 0; e < n; ++e) {
    if (coin(rng, 0.6)) designated.push_back(e);
  }
  if (designated.empty()) designated.push_back(0);
  return EpistemicAction(name, vocab, std::move(events), std::move(edges), std::move(designated));
}

/// Small random task: at most `agents` agents, `atoms` atoms and
/// `actions` actions. The goal is a literal conjunction or, sometimes, an
/// epistemic formula.
inline EpistemicTask random_task(Rng& rng, std::size_t agents, std::size_t atoms, std::size_t actions,
                                 std::size_t max_events = 2) {
  auto vocab = small_vocab(1 + pick(rng, agents), 1 + pick(rng, atoms));
  std::vector<EpistemicAction> acts;
  const std::size_t n = 1 + pick(rng, actions);
  for (std::size_t a = 0; a < n; ++a) {
    acts.push_back(random_action(rng, vocab, "a" + std::to_string(a), max_events, coin(rng, 0.3), coin(rng, 0.3)));
  }
  auto initial = random_state(rng, vocab, 3);
  auto goal = coin(rng, 0.7) ? random_literals(rng, *vocab, 0.6).to_formula() : random_formula(rng, *vocab, 2);
  return EpistemicTask{"random", vocab, std::move(acts), std::move(initial), std::move(goal), std::nullopt};
}

// --- oracles ---------------------------------------------------------------

inline std::vector<WorldId> successors_with_self(const EpistemicModel& m, AgentId i, WorldId w) {
  std::vector<WorldId> out{w};
  for (WorldId v = 0; v < m.world_count(); ++v) {
    if (v != w && m.related(i, w, v)) out.push_back(v);
  }
  return out;
}

/// Direct recursive evaluation. Common knowledge is checked by exploring
/// every world reachable in one or more steps.
inline bool naive_eval(const EpistemicModel& m, WorldId w, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
      return true;
    case K::bottom:
      return false;
    case K::atom:
      return m.label(w).contains(f.atom_id());
    case K::negation:
      return !naive_eval(m, w, f.operand());
    case K::conjunction:
      return naive_eval(m, w, f.left()) && naive_eval(m, w, f.right());
    case K::disjunction:
      return naive_eval(m, w, f.left()) || naive_eval(m, w, f.right());
    case K::knows:
      for (WorldId v : successors_with_self(m, f.agent(), w)) {
        if (!naive_eval(m, v, f.operand())) return false;
      }
      return true;
    case K::common: {
      std::vector<char> seen(m.world_count(), 0);
      std::deque<WorldId> queue;
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        for (WorldId v : successors_with_self(m, i, w)) {
          if (!seen[v]) {
            seen[v] = 1;
            queue.push_back(v);
          }
        }
      }
      while (!queue.empty()) {
        WorldId v = queue.front();
        queue.pop_front();
        if (!naive_eval(m, v, f.operand())) return false;
        for (AgentId i = 0; i < m.agent_count(); ++i) {
          for (WorldId u : successors_with_self(m, i, v)) {
            if (!seen[u]) {
              seen[u] = 1;
              queue.push_back(u);
            }
          }
        }
      }
      return true;
    }
  }
  return false;
}

inline bool naive_eval_state(const EpistemicState& s, const Formula& f) {
  for (WorldId w : s.designated()) {
    if (!naive_eval(s.model(), w, f)) return false;
  }
  return true;
}

/// Greatest bisimulation between the worlds of two models, as a matrix
/// rel[w][v]. Starts from equal labels and removes pairs violating forth or
/// back until nothing changes.
inline std::vector<std::vector<char>> naive_bisimulation(const EpistemicModel& a, const EpistemicModel& b) {
  std::vector<std::vector<char>> rel(a.world_count(), std::vector<char>(b.world_count(), 0));
  for (WorldId w = 0; w < a.world_count(); ++w) {
    for (WorldId v = 0; v < b.world_count(); ++v) rel[w][v] = a.label(w) == b.label(v);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (WorldId w = 0; w < a.world_count(); ++w) {
      for (WorldId v = 0; v < b.world_count(); ++v) {
        if (!rel[w][v]) continue;
        bool ok = true;
        for (AgentId i = 0; ok && i < a.agent_count(); ++i) {
          const auto sw = successors_with_self(a, i, w);
          const auto sv = successors_with_self(b, i, v);
          for (WorldId x : sw) {
            ok = ok && std::any_of(sv.begin(), sv.end(), [&](WorldId y) { return rel[x][y] != 0; });
          }
          for (WorldId y : sv) {
            ok = ok && std::any_of(sw.begin(), sw.end(), [&](WorldId x) { return rel[x][y] != 0; });
          }
        }
        if (!ok) {
          rel[w][v] = 0;
          changed = true;
        }
      }
    }
  }
  return rel;
}

inline bool naive_bisimilar(const EpistemicState& s, const EpistemicState& t) {
  const auto rel = naive_bisimulation(s.model(), t.model());
  for (WorldId w : s.designated()) {
    if (std::none_of(t.designated().begin(), t.designated().end(), [&](WorldId v) { return rel[w][v] != 0; })) {
      return false;
    }
  }
  for (WorldId v : t.designated()) {
    if (std::none_of(s.designated().begin(), s.designated().end(), [&](WorldId w) { return rel[w][v] != 0; })) {
      return false;
    }
  }
  return true;
}

/// Number of bisimulation classes among the worlds reachable from the
/// designated set, computed from the naive relation.
inline std::size_t naive_class_count(const EpistemicState& s) {
  const auto& m = s.model();
  const auto rel = naive_bisimulation(m, m);
  const auto reach = reachable_worlds(s);
  std::vector<WorldId> reps;
  for (WorldId w : reach) {
    if (std::none_of(reps.begin(), reps.end(), [&](WorldId r) { return rel[w][r] != 0; })) reps.push_back(w);
  }
  return reps.size();
}

/// Shortest plan length by enumerating every action sequence up to
/// `max_depth` with plain product updates: no contraction, no duplicate
/// detection.
inline std::optional<std::size_t> exhaustive_plan_length(const EpistemicTask& task, std::size_t max_depth) {
  std::vector<EpistemicState> level{task.initial};
  if (eval_state(task.initial, task.goal)) return 0;
  for (std::size_t d = 1; d <= max_depth; ++d) {
    std::vector<EpistemicState> next;
    for (const auto& s : level) {
      for (const auto& a : task.actions) {
        if (!applicable(s, a)) continue;
        auto t = product_update(s, a);
        if (naive_eval_state(t, task.goal)) return d;
        next.push_back(std::move(t));
      }
    }
    level = std::move(next);
  }
  return std::nullopt;
}

/// Iterative-deepening DFS over valuations without a visited set.
inline std::optional<std::size_t> classical_oracle(const PropositionalTask& task, std::size_t max_depth) {
  auto goal = [&](const Valuation& v) {
    EpistemicModel m(task.vocab, {{"w", v}}, {});
    return naive_eval(m, 0, task.goal);
  };
  std::function<bool(const Valuation&, std::size_t)> dfs = [&](const Valuation& v, std::size_t left) {
    if (goal(v)) return true;
    if (left == 0) return false;
    for (const auto& a : task.actions) {
      if (auto next = apply_ground(v, a); next && dfs(*next, left - 1)) return true;
    }
    return false;
  };
  for (std::size_t d = 0; d <= max_depth; ++d) {
    if (dfs(task.initial, d)) return d;
  }
  return std::nullopt;
}

}  // namespace test
