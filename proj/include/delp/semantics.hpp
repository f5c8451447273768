#pragma once

#include <vector>

#include "delp/formula.hpp"
#include "delp/model.hpp"

namespace delp {

/// Characteristic vector of the worlds satisfying `phi` (1 = true).
/// Throws std::out_of_range if `phi` mentions an atom or agent outside the
/// model's vocabulary.
std::vector<char> truth_set(const EpistemicModel& model, const Formula& phi);

/// Throws std::out_of_range for an unknown world.
bool eval_world(const EpistemicModel& model, WorldId world, const Formula& phi);

/// True iff phi holds at every designated world.
bool eval_state(const EpistemicState& state, const Formula& phi);

/// Checks that phi only uses ids present in `vocab`; throws std::out_of_range.
void check_formula(const Formula& phi, const Vocabulary& vocab);

}  // namespace delp
