#include "delp/classical.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "delp/semantics.hpp"

namespace delp {

namespace {

std::string call_name(const std::string& head, const std::vector<std::string>& args) {
  if (args.empty()) return head;
  std::string out = head + "(";
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (k > 0) out += ",";
    out += args[k];
  }
  return out + ")";
}

AtomId resolve_literal(const LiteralTemplate& lit, const std::map<std::string, std::string>& subst,
                       const Vocabulary& vocab, const std::string& where) {
  std::vector<std::string> args;
  for (const auto& a : lit.args) {
    auto it = subst.find(a);
    args.push_back(it == subst.end() ? a : it->second);
  }
  std::string name = call_name(lit.predicate, args);
  auto id = vocab.find_atom(name);
  if (!id) throw GroundingError(where + ": undeclared atom '" + name + "'");
  return *id;
}

}  // namespace

std::vector<GroundAction> ground_schema(const ActionSchema& schema, const ObjectSorts& sorts,
                                        const Vocabulary& vocab, std::size_t max_actions) {
  std::vector<const std::vector<std::string>*> domains;
  for (const auto& p : schema.parameters) {
    auto it = sorts.find(p.sort);
    if (it == sorts.end()) throw GroundingError("schema " + schema.name + ": unknown sort '" + p.sort + "'");
    if (it->second.empty()) throw GroundingError("schema " + schema.name + ": sort '" + p.sort + "' is empty");
    domains.push_back(&it->second);
  }

  std::vector<std::vector<std::string>> tuples;
  // Odometer over the parameter domains.
  std::vector<std::size_t> idx(domains.size(), 0);
  for (;;) {
    if (tuples.size() >= max_actions) {
      throw GroundingError("grounding schema " + schema.name + " exceeds the limit of " +
                           std::to_string(max_actions) + " actions");
    }
    std::vector<std::string> args;
    for (std::size_t k = 0; k < domains.size(); ++k) args.push_back((*domains[k])[idx[k]]);
    tuples.push_back(std::move(args));
    bool carry = true;
    for (std::size_t k = domains.size(); carry && k > 0;) {
      --k;
      if (++idx[k] < domains[k]->size()) {
        carry = false;
      } else {
        idx[k] = 0;
      }
    }
    if (carry) break;
  }
  std::sort(tuples.begin(), tuples.end());

  std::vector<GroundAction> out;
  for (const auto& args : tuples) {
    std::map<std::string, std::string> subst;
    for (std::size_t k = 0; k < args.size(); ++k) subst[schema.parameters[k].name] = args[k];
    const std::string name = call_name(schema.name, args);
    std::vector<AtomId> pre_pos, pre_neg, eff_pos, eff_neg;
    for (const auto& lit : schema.precondition) {
      (lit.positive ? pre_pos : pre_neg).push_back(resolve_literal(lit, subst, vocab, name));
    }
    for (const auto& lit : schema.effect) {
      (lit.positive ? eff_pos : eff_neg).push_back(resolve_literal(lit, subst, vocab, name));
    }
    LiteralConjunction pre;
    try {
      pre = LiteralConjunction(pre_pos, pre_neg);
    } catch (const std::invalid_argument&) {
      continue;  // never applicable
    }
    out.push_back({name, std::move(pre), LiteralConjunction::with_add_precedence(eff_pos, eff_neg)});
  }
  return out;
}

std::vector<GroundAction> ground(const std::vector<ActionSchema>& schemas, const ObjectSorts& sorts,
                                 const Vocabulary& vocab, std::size_t max_actions) {
  std::vector<const ActionSchema*> order;
  for (const auto& s : schemas) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const ActionSchema* a, const ActionSchema* b) { return a->name < b->name; });
  std::vector<GroundAction> out;
  for (const ActionSchema* s : order) {
    auto part = ground_schema(*s, sorts, vocab, max_actions);
    if (out.size() + part.size() > max_actions) {
      throw GroundingError("grounding exceeds the limit of " + std::to_string(max_actions) + " actions");
    }
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

std::optional<Valuation> apply_ground(const Valuation& v, const GroundAction& a) {
  if (!a.pre.holds(v)) return std::nullopt;
  return a.post.apply(v);
}

BeliefState apply_belief(const BeliefState& b, const ConditionalAction& a) {
  std::vector<Valuation> out;
  for (const auto& v : b.valuations()) {
    bool any = false;
    for (const auto& e : a.events) {
      if (auto r = apply_ground(v, e)) {
        out.push_back(std::move(*r));
        any = true;
      }
    }
    if (!any) throw ApplicabilityError("action " + a.name + " has no applicable event in some valuation");
  }
  return BeliefState(std::move(out));
}

namespace {

bool goal_holds(const PropositionalTask& task, const Valuation& v) {
  // One-world model: K and C collapse, but the goal is propositional anyway.
  EpistemicModel m(task.vocab, {{"w", v}}, {});
  return eval_world(m, 0, task.goal);
}

}  // namespace

std::optional<std::vector<std::string>> solve_classical(const PropositionalTask& task, std::size_t depth_cap) {
  if (!is_propositional(task.goal)) throw std::invalid_argument("classical goal must be propositional");
  struct Node {
    Valuation state;
    std::size_t parent;
    std::size_t action;
  };
  std::vector<Node> nodes{{task.initial, SIZE_MAX, SIZE_MAX}};
  std::set<Valuation> visited{task.initial};
  auto plan_to = [&](std::size_t n) {
    std::vector<std::string> plan;
    for (; nodes[n].parent != SIZE_MAX; n = nodes[n].parent) plan.push_back(task.actions[nodes[n].action].name);
    std::reverse(plan.begin(), plan.end());
    return plan;
  };
  if (goal_holds(task, task.initial)) return std::vector<std::string>{};
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < depth_cap; ++depth) {
    const std::size_t level_end = nodes.size();
    for (std::size_t n = level_begin; n < level_end; ++n) {
      for (std::size_t a = 0; a < task.actions.size(); ++a) {
        auto next = apply_ground(nodes[n].state, task.actions[a]);
        if (!next || !visited.insert(*next).second) continue;
        nodes.push_back({*next, n, a});
        if (goal_holds(task, *next)) return plan_to(nodes.size() - 1);
      }
    }
    if (nodes.size() == level_end) break;
    level_begin = level_end;
  }
  return std::nullopt;
}

TransitionSystem reachable_system(const PropositionalTask& task) {
  TransitionSystem ts;
  std::map<Valuation, std::size_t> index;
  ts.states.push_back(task.initial);
  index.emplace(task.initial, 0);
  for (std::size_t s = 0; s < ts.states.size(); ++s) {
    for (std::size_t a = 0; a < task.actions.size(); ++a) {
      auto next = apply_ground(ts.states[s], task.actions[a]);
      if (!next) continue;
      auto [it, fresh] = index.emplace(*next, ts.states.size());
      if (fresh) ts.states.push_back(*next);
      ts.edges.push_back({s, a, it->second});
    }
  }
  return ts;
}

EpistemicAction to_epistemic(const GroundAction& a, VocabularyPtr vocab) {
  return induced_action(a.name, std::move(vocab), a.pre.to_formula(), a.post);
}

EpistemicAction to_epistemic(const ConditionalAction& a, VocabularyPtr vocab, bool observable) {
  std::vector<Event> events;
  std::vector<EventId> designated;
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    events.push_back({"e" + std::to_string(k + 1), a.events[k].pre.to_formula(), a.events[k].post});
    designated.push_back(static_cast<EventId>(k));
  }
  std::vector<EdgeGuard> edges;
  if (!observable) {
    for (AgentId i = 0; i < vocab->agent_count(); ++i) {
      for (EventId x = 0; x < events.size(); ++x) {
        for (EventId y = 0; y < events.size(); ++y) {
          if (x != y) edges.push_back({i, x, y, Formula::top()});
        }
      }
    }
  }
  return EpistemicAction(a.name, std::move(vocab), std::move(events), std::move(edges), std::move(designated));
}

}  // namespace delp
