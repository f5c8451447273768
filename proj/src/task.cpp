#include "delp/task.hpp"

#include <set>
#include <stdexcept>

#include "delp/semantics.hpp"

namespace delp {

void check_task(const EpistemicTask& task) {
  if (!task.vocab) throw std::invalid_argument("task has no vocabulary");
  if (!same_vocabulary(*task.vocab, task.initial.vocabulary())) {
    throw std::invalid_argument("initial state uses a different vocabulary");
  }
  check_formula(task.goal, *task.vocab);
  std::set<std::string> names;
  for (const auto& a : task.actions) {
    if (!same_vocabulary(*task.vocab, a.vocabulary())) {
      throw std::invalid_argument("action " + a.name() + " uses a different vocabulary");
    }
    if (!names.insert(a.name()).second) throw std::invalid_argument("duplicate action name " + a.name());
  }
  if (task.owner) {
    const AgentId i = *task.owner;
    if (i >= task.vocab->agent_count()) throw std::invalid_argument("owner is not an agent");
    if (!is_local_for(task.initial, i)) {
      throw std::invalid_argument("initial state is not local for " + task.vocab->agent_name(i));
    }
    for (const auto& a : task.actions) {
      if (!is_local_for(a, i)) {
        throw std::invalid_argument("action " + a.name() + " is not local for " + task.vocab->agent_name(i));
      }
    }
  }
}

const EpistemicAction* find_action(const EpistemicTask& task, const std::string& name) {
  for (const auto& a : task.actions) {
    if (a.name() == name) return &a;
  }
  return nullptr;
}

EpistemicTask localize(const EpistemicTask& task, AgentId agent) {
  EpistemicTask out{task.name, task.vocab, {}, local_state(task.initial, agent), task.goal, agent};
  out.actions.reserve(task.actions.size());
  for (const auto& a : task.actions) out.actions.push_back(local_action(a, agent));
  return out;
}

std::optional<PropositionalTask> as_propositional(const EpistemicTask& task) {
  if (!task.initial.is_global() || !is_propositional(task.goal)) return std::nullopt;
  PropositionalTask out{task.vocab, {}, task.initial.model().label(task.initial.designated().front()), task.goal};
  for (const auto& a : task.actions) {
    if (a.event_count() != 1) return std::nullopt;
    const Event& e = a.event(a.designated().front());
    LiteralConjunction pre;
    if (!as_literal_conjunction(e.pre, pre)) return std::nullopt;
    out.actions.push_back({a.name(), pre, e.post});
  }
  return out;
}

}  // namespace delp

namespace delp {

namespace {

bool same_state(const EpistemicState& a, const EpistemicState& b) {
  const auto& ma = a.model();
  const auto& mb = b.model();
  if (ma.world_count() != mb.world_count() || a.designated() != b.designated()) return false;
  for (WorldId w = 0; w < ma.world_count(); ++w) {
    if (ma.world_name(w) != mb.world_name(w) || ma.label(w) != mb.label(w)) return false;
  }
  auto ea = ma.edges();
  auto eb = mb.edges();
  if (ea.size() != eb.size()) return false;
  for (std::size_t k = 0; k < ea.size(); ++k) {
    if (ea[k].agent != eb[k].agent || ea[k].from != eb[k].from || ea[k].to != eb[k].to) return false;
  }
  return true;
}

bool same_action(const EpistemicAction& a, const EpistemicAction& b) {
  if (a.name() != b.name() || a.designated() != b.designated() || a.event_count() != b.event_count()) return false;
  for (EventId e = 0; e < a.event_count(); ++e) {
    const auto& x = a.event(e);
    const auto& y = b.event(e);
    if (x.name != y.name || !(x.pre == y.pre) || !(x.post == y.post)) return false;
  }
  if (a.edges().size() != b.edges().size()) return false;
  for (std::size_t k = 0; k < a.edges().size(); ++k) {
    const auto& x = a.edges()[k];
    const auto& y = b.edges()[k];
    if (x.agent != y.agent || x.from != y.from || x.to != y.to || !(x.condition == y.condition)) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const EpistemicTask& a, const EpistemicTask& b) {
  if (!(*a.vocab == *b.vocab) || a.owner != b.owner || !(a.goal == b.goal)) return false;
  if (a.actions.size() != b.actions.size() || !same_state(a.initial, b.initial)) return false;
  for (std::size_t k = 0; k < a.actions.size(); ++k) {
    if (!same_action(a.actions[k], b.actions[k])) return false;
  }
  return true;
}

}  // namespace delp
