#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delp/action.hpp"
#include "delp/classical.hpp"
#include "delp/formula.hpp"
#include "delp/model.hpp"

namespace delp {

struct EpistemicTask {
  std::string name = "task";
  VocabularyPtr vocab;
  std::vector<EpistemicAction> actions;  // search order
  EpistemicState initial;
  Formula goal;
  std::optional<AgentId> owner;
};

/// Throws std::invalid_argument if vocabularies differ, action names repeat,
/// or the owner is set but the initial state or some action is not local
/// for it.
void check_task(const EpistemicTask& task);

/// nullptr if there is no action with that name.
const EpistemicAction* find_action(const EpistemicTask& task, const std::string& name);

/// Local planning task of agent i: local initial state and local actions.
EpistemicTask localize(const EpistemicTask& task, AgentId agent);

/// The task as a propositional one: a single designated initial world,
/// single-event actions with literal preconditions, and a
/// propositional goal. nullopt if the task does not have that shape.
std::optional<PropositionalTask> as_propositional(const EpistemicTask& task);

}  // namespace delp

namespace delp {

/// Same vocabulary, actions (names, events, edges, designated sets),
/// initial model including world names, goal and owner.
bool structurally_equal(const EpistemicTask& a, const EpistemicTask& b);

}  // namespace delp
