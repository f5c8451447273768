#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "delp/action.hpp"
#include "delp/formula.hpp"
#include "delp/model.hpp"

namespace delp {

struct Parameter {
  std::string name;
  std::string sort;
};

/// One literal of a schema precondition or effect. Arguments are parameter
/// names or object names.
struct LiteralTemplate {
  std::string predicate;
  std::vector<std::string> args;
  bool positive = true;
};

struct ActionSchema {
  std::string name;
  std::vector<Parameter> parameters;
  std::vector<LiteralTemplate> precondition;
  std::vector<LiteralTemplate> effect;
};

/// Sort name -> objects, in declaration order.
using ObjectSorts = std::map<std::string, std::vector<std::string>>;

struct GroundAction {
  std::string name;  // e.g. "Go(Father,Home,PO1)"
  LiteralConjunction pre;
  LiteralConjunction post;
};

class GroundingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// All instances of the schemas over the sorts, ordered by schema name then
/// argument strings. Instances with a contradictory precondition are dropped.
/// An effect that adds and deletes the same atom keeps the add (so
/// Go(F,H,H) is a self-loop). Throws GroundingError on an empty or unknown
/// sort, an undeclared atom, or more than `max_actions` instances.
std::vector<GroundAction> ground(const std::vector<ActionSchema>& schemas, const ObjectSorts& sorts,
                                 const Vocabulary& vocab, std::size_t max_actions = 10000);

/// Ground instances of a single schema, in argument order.
std::vector<GroundAction> ground_schema(const ActionSchema& schema, const ObjectSorts& sorts,
                                        const Vocabulary& vocab, std::size_t max_actions = 10000);

/// Delete-then-add, or nullopt if the precondition fails.
std::optional<Valuation> apply_ground(const Valuation& v, const GroundAction& a);

/// A set of events; which one happens is decided by the world.
struct ConditionalAction {
  std::string name;
  std::vector<GroundAction> events;
};

class ApplicabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Generalised transition function over belief states. Every valuation must
/// admit at least one event; otherwise throws ApplicabilityError.
BeliefState apply_belief(const BeliefState& b, const ConditionalAction& a);

struct PropositionalTask {
  VocabularyPtr vocab;
  std::vector<GroundAction> actions;
  Valuation initial;
  Formula goal;  // no K/C
};

/// Shortest plan by breadth-first search with a visited set; ties follow
/// the action order. nullopt if none within `depth_cap` steps.
std::optional<std::vector<std::string>> solve_classical(const PropositionalTask& task, std::size_t depth_cap);

/// Reachable fragment of the induced transition system, states in BFS order.
struct TransitionSystem {
  struct Edge {
    std::size_t from;
    std::size_t action;
    std::size_t to;
  };
  std::vector<Valuation> states;
  std::vector<Edge> edges;
};
TransitionSystem reachable_system(const PropositionalTask& task);

/// Epistemic counterparts: single-event actions are induced directly; a
/// conditional action becomes one designated event per branch, with the
/// events mutually indistinguishable for every agent when `observable` is
/// false and distinguishable otherwise.
EpistemicAction to_epistemic(const GroundAction& a, VocabularyPtr vocab);
EpistemicAction to_epistemic(const ConditionalAction& a, VocabularyPtr vocab, bool observable);

}  // namespace delp
