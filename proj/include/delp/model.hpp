#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "delp/valuation.hpp"
#include "delp/vocabulary.hpp"

namespace delp {

/// A finite multi-agent Kripke model. Each agent's relation is a set of
/// directed edges; reflexive edges are implicit and always present, so
/// successors() never lists the world itself.
class EpistemicModel {
 public:
  struct World {
    std::string name;
    Valuation label;
  };
  struct Edge {
    AgentId agent;
    WorldId from;
    WorldId to;
  };

  /// Throws std::invalid_argument on an empty world set, an edge to an
  /// undeclared world, an unknown agent, or a label over a different atom
  /// table.
  EpistemicModel(VocabularyPtr vocab, std::vector<World> worlds, const std::vector<Edge>& edges);

  const Vocabulary& vocabulary() const { return *vocab_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }

  std::size_t world_count() const { return labels_.size(); }
  std::size_t agent_count() const { return successors_.size(); }
  const Valuation& label(WorldId w) const { return labels_.at(w); }
  const std::string& world_name(WorldId w) const { return names_.at(w); }

  /// Sorted, excluding w itself.
  std::span<const WorldId> successors(AgentId agent, WorldId w) const {
    return successors_.at(agent).at(w);
  }
  /// Reflexive pairs are always related.
  bool related(AgentId agent, WorldId from, WorldId to) const;

  /// All non-reflexive edges, ordered by (agent, from, to).
  std::vector<Edge> edges() const;

 private:
  VocabularyPtr vocab_;
  std::vector<std::string> names_;
  std::vector<Valuation> labels_;
  std::vector<std::vector<std::vector<WorldId>>> successors_;  // [agent][world]
};

using ModelPtr = std::shared_ptr<const EpistemicModel>;

/// A model together with a non-empty set of designated worlds.
class EpistemicState {
 public:
  /// Sorts and deduplicates `designated`; throws std::invalid_argument if it
  /// is empty or names a world outside the model.
  EpistemicState(ModelPtr model, std::vector<WorldId> designated);

  const EpistemicModel& model() const { return *model_; }
  const ModelPtr& model_ptr() const { return model_; }
  const Vocabulary& vocabulary() const { return model_->vocabulary(); }
  const std::vector<WorldId>& designated() const { return designated_; }
  bool is_designated(WorldId w) const;
  bool is_global() const { return designated_.size() == 1; }

 private:
  ModelPtr model_;
  std::vector<WorldId> designated_;
};

/// A set of propositional valuations (the plan-time view of an agent that
/// cannot observe anything).
class BeliefState {
 public:
  /// Sorts and merges duplicates; throws std::invalid_argument if empty.
  explicit BeliefState(std::vector<Valuation> valuations);

  const std::vector<Valuation>& valuations() const { return valuations_; }
  std::size_t size() const { return valuations_.size(); }

  friend bool operator==(const BeliefState&, const BeliefState&) = default;

 private:
  std::vector<Valuation> valuations_;
};

/// One global state per designated world, in world order, sharing the model.
std::vector<EpistemicState> globals(const EpistemicState& s);

/// Designated set closed under forward reachability along `agent`'s relation.
EpistemicState local_state(const EpistemicState& s, AgentId agent);

bool is_local_for(const EpistemicState& s, AgentId agent);

/// One world per valuation, every agent's relation total, all designated.
EpistemicState from_belief_state(const BeliefState& b, VocabularyPtr vocab);

/// Worlds reachable from the designated set along the union of all agents'
/// relations (designated worlds included), in increasing order.
std::vector<WorldId> reachable_worlds(const EpistemicState& s);

/// Short human-readable rendering: designated labels and model size.
std::string summarize(const EpistemicState& s);

}  // namespace delp
