#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace delp {

using AtomId = std::uint32_t;
using AgentId = std::uint32_t;
using WorldId = std::uint32_t;
using EventId = std::uint32_t;

/// Interned atom and agent tables shared by every model, action and formula
/// of one task. Ids are dense indices in declaration order.
class Vocabulary {
 public:
  Vocabulary(std::vector<std::string> agents, std::vector<std::string> atoms);

  std::size_t atom_count() const { return atoms_.size(); }
  std::size_t agent_count() const { return agents_.size(); }

  const std::string& atom_name(AtomId id) const { return atoms_.at(id); }
  const std::string& agent_name(AgentId id) const { return agents_.at(id); }
  const std::vector<std::string>& atom_names() const { return atoms_; }
  const std::vector<std::string>& agent_names() const { return agents_; }

  std::optional<AtomId> find_atom(std::string_view name) const;
  std::optional<AgentId> find_agent(std::string_view name) const;

  // Throwing lookups, for code that builds tasks programmatically.
  AtomId atom(std::string_view name) const;
  AgentId agent(std::string_view name) const;

  bool operator==(const Vocabulary& other) const {
    return atoms_ == other.atoms_ && agents_ == other.agents_;
  }

 private:
  std::vector<std::string> agents_;
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, AgentId> agent_index_;
  std::unordered_map<std::string, AtomId> atom_index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

VocabularyPtr make_vocabulary(std::vector<std::string> agents, std::vector<std::string> atoms);

/// Same pointer or same tables.
bool same_vocabulary(const Vocabulary& a, const Vocabulary& b);

}  // namespace delp
