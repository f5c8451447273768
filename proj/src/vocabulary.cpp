#include "delp/vocabulary.hpp"

#include <stdexcept>

#include "delp/valuation.hpp"

namespace delp {

Vocabulary::Vocabulary(std::vector<std::string> agents, std::vector<std::string> atoms)
    : agents_(std::move(agents)), atoms_(std::move(atoms)) {
  for (AgentId i = 0; i < agents_.size(); ++i) {
    if (!agent_index_.emplace(agents_[i], i).second) {
      throw std::invalid_argument("duplicate agent '" + agents_[i] + "'");
    }
  }
  for (AtomId i = 0; i < atoms_.size(); ++i) {
    if (!atom_index_.emplace(atoms_[i], i).second) {
      throw std::invalid_argument("duplicate atom '" + atoms_[i] + "'");
    }
  }
}

std::optional<AtomId> Vocabulary::find_atom(std::string_view name) const {
  auto it = atom_index_.find(std::string(name));
  if (it == atom_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<AgentId> Vocabulary::find_agent(std::string_view name) const {
  auto it = agent_index_.find(std::string(name));
  if (it == agent_index_.end()) return std::nullopt;
  return it->second;
}

AtomId Vocabulary::atom(std::string_view name) const {
  if (auto id = find_atom(name)) return *id;
  throw std::out_of_range("unknown atom '" + std::string(name) + "'");
}

AgentId Vocabulary::agent(std::string_view name) const {
  if (auto id = find_agent(name)) return *id;
  throw std::out_of_range("unknown agent '" + std::string(name) + "'");
}

VocabularyPtr make_vocabulary(std::vector<std::string> agents, std::vector<std::string> atoms) {
  return std::make_shared<const Vocabulary>(std::move(agents), std::move(atoms));
}

bool same_vocabulary(const Vocabulary& a, const Vocabulary& b) { return &a == &b || a == b; }

Valuation::Valuation(std::size_t atom_count, const std::vector<AtomId>& atoms)
    : Valuation(atom_count) {
  for (AtomId a : atoms) insert(a);
}

void Valuation::insert(AtomId atom) {
  if (atom >= size_) throw std::out_of_range("atom id out of range");
  words_[atom / 64] |= (std::uint64_t{1} << (atom % 64));
}

void Valuation::erase(AtomId atom) {
  if (atom >= size_) throw std::out_of_range("atom id out of range");
  words_[atom / 64] &= ~(std::uint64_t{1} << (atom % 64));
}

std::vector<AtomId> Valuation::atoms() const {
  std::vector<AtomId> out;
  for (AtomId a = 0; a < size_; ++a) {
    if (contains(a)) out.push_back(a);
  }
  return out;
}

std::size_t Valuation::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

std::string to_string(const Valuation& v, const Vocabulary& vocab) {
  std::string out = "{";
  bool first = true;
  for (AtomId a : v.atoms()) {
    if (!first) out += ", ";
    out += vocab.atom_name(a);
    first = false;
  }
  out += "}";
  return out;
}

}  // namespace delp
