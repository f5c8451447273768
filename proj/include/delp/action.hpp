#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "delp/formula.hpp"
#include "delp/model.hpp"

namespace delp {

struct Event {
  std::string name;
  Formula pre;
  LiteralConjunction post;
};

/// Directed agent edge between events. The edge exists for a world pair only
/// where `condition` holds at the source world (before the update).
struct EdgeGuard {
  AgentId agent = 0;
  EventId from = 0;
  EventId to = 0;
  Formula condition;  // top for ordinary action models
};

/// Action model with designated events. Reflexive top-guarded edges are
/// implicit for every agent; declared reflexive edges are dropped.
class EpistemicAction {
 public:
  EpistemicAction(std::string name, VocabularyPtr vocab, std::vector<Event> events,
                  std::vector<EdgeGuard> edges, std::vector<EventId> designated);

  const std::string& name() const { return name_; }
  const Vocabulary& vocabulary() const { return *vocab_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }
  std::size_t event_count() const { return events_.size(); }
  const Event& event(EventId e) const { return events_.at(e); }
  const std::vector<Event>& events() const { return events_; }
  /// Sorted by (agent, from, to), duplicates removed.
  const std::vector<EdgeGuard>& edges() const { return edges_; }
  const std::vector<EventId>& designated() const { return designated_; }
  bool is_designated(EventId e) const;
  bool has_conditional_edges() const;

  EpistemicAction renamed(std::string name) const;

 private:
  std::string name_;
  VocabularyPtr vocab_;
  std::vector<Event> events_;
  std::vector<EdgeGuard> edges_;
  std::vector<EventId> designated_;
};

class UpdateError : public std::runtime_error {
 public:
  UpdateError(const std::string& msg, WorldId witness) : std::runtime_error(msg), witness_(witness) {}
  /// A designated world with no applicable designated event.
  WorldId witness() const { return witness_; }

 private:
  WorldId witness_;
};

/// Every designated world satisfies the precondition of some designated event.
bool applicable(const EpistemicState& s, const EpistemicAction& a);

/// First designated world with no applicable designated event, if any.
std::optional<WorldId> inapplicable_witness(const EpistemicState& s, const EpistemicAction& a);

struct UpdateResult {
  EpistemicState state;
  std::vector<std::pair<WorldId, EventId>> origins;  // per new world
};

/// s ⊗ a. Worlds are the pairs (w,e) with w ⊨ pre(e), ordered by w then e,
/// named "(w,e)". Throws UpdateError if `a` is not applicable in `s`.
EpistemicState product_update(const EpistemicState& s, const EpistemicAction& a);
UpdateResult update_with_origins(const EpistemicState& s, const EpistemicAction& a);

/// Designated set closed under the agent's top-guarded edges.
EpistemicAction local_action(const EpistemicAction& a, AgentId agent);
bool is_local_for(const EpistemicAction& a, AgentId agent);

/// Single designated event, no edges besides the implicit loops.
EpistemicAction induced_action(std::string name, VocabularyPtr vocab, Formula pre, LiteralConjunction post);
EpistemicAction skip_action(VocabularyPtr vocab);

struct AskMode {
  enum class Kind { public_, private_, overheard } kind = Kind::public_;
  std::vector<AgentId> overhearing;  // B, for Kind::overheard

  static AskMode make_public() { return {}; }
  static AskMode make_private() { return {Kind::private_, {}}; }
  static AskMode make_overheard(std::vector<AgentId> b) { return {Kind::overheard, std::move(b)}; }
};

/// Agent i asks agent j whether phi. Events yes/no/unknown with
/// preconditions K_j phi, K_j !phi, !K_j phi & !K_j !phi. The private and
/// overheard variants add a non-designated skip event that the other agents
/// believe happened. Throws std::invalid_argument if i == j.
EpistemicAction make_ask(std::string name, VocabularyPtr vocab, AgentId i, AgentId j, const Formula& phi,
                         const AskMode& mode);

}  // namespace delp
