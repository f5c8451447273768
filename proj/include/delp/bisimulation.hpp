#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delp/model.hpp"

namespace delp {

/// Coarsest stable partition of all worlds of `model` (labels plus per-agent
/// successor blocks). Block ids are canonical: they depend only on the
/// structure, not on world numbering.
std::vector<std::uint32_t> bisimulation_classes(const EpistemicModel& model);

/// Quotient of the part reachable from the designated worlds. Worlds of the
/// result are numbered by canonical block id, so two bisimilar states
/// contract to identical models.
EpistemicState bisim_contract(const EpistemicState& s);

/// Multi-pointed bisimilarity: every designated world on either side has a
/// bisimilar designated world on the other. Throws std::invalid_argument if
/// the vocabularies differ.
bool bisimilar(const EpistemicState& s, const EpistemicState& t);

/// Byte string that is equal for two states iff they are bisimilar.
std::string canonical_key(const EpistemicState& s);

/// Key of a state already returned by bisim_contract (skips the contraction).
std::string contracted_key(const EpistemicState& contracted);

/// 64-bit FNV-1a of a key.
std::uint64_t digest(const std::string& key);
/// digest() as 16 lowercase hex characters.
std::string digest_hex(const std::string& key);

}  // namespace delp
