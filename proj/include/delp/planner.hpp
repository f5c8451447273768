#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "delp/parallel.hpp"
#include "delp/task.hpp"

namespace delp {

struct SearchOptions {
  std::size_t depth_cap = 0;  // mandatory, no unbounded mode
  bool contract = true;       // contract every search node
  Backend backend = Backend::serial;
};

struct SearchStats {
  std::size_t expanded = 0;   // nodes whose actions were tried
  std::size_t generated = 0;  // successor states built
  std::size_t distinct = 0;   // distinct canonical keys seen
};

using SequentialPlan = std::vector<std::string>;

/// Breadth-first search over product updates with canonical-key
/// deduplication. Returns a shortest plan, ties broken by action order.
std::optional<SequentialPlan> solve_sequential(const EpistemicTask& task, const SearchOptions& options,
                                               SearchStats* stats = nullptr);

struct PolicyEntry {
  EpistemicState state;  // contracted global state
  std::string action;
  std::string local_key;  // canonical key of the owner's view
};

/// Partial map from global states (up to bisimulation) to action names.
class Policy {
 public:
  explicit Policy(AgentId owner) : owner_(owner) {}

  AgentId owner() const { return owner_; }
  /// Throws std::invalid_argument if `global` has more than one designated world.
  void assign(const EpistemicState& global, const std::string& action);
  const PolicyEntry* lookup(const EpistemicState& global) const;
  /// Keyed by canonical key of the global state.
  const std::map<std::string, PolicyEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  AgentId owner_;
  std::map<std::string, PolicyEntry> entries_;
};

/// Strong acyclic policy for the task's owner minimising the worst-case
/// execution length, found by AND-OR search over owner views. Throws
/// std::invalid_argument if the task has no owner.
std::optional<Policy> solve_policy(const EpistemicTask& task, const SearchOptions& options,
                                   SearchStats* stats = nullptr);

/// Builds a policy by asking `rule` for an action at every owner view
/// reachable from the initial globals within `max_steps` steps. Views where
/// the rule returns nullopt stay undefined. For tests and hand-written
/// policies.
Policy build_policy(const EpistemicTask& task,
                    const std::function<std::optional<std::string>(const EpistemicState& view)>& rule,
                    std::size_t max_steps);

struct Execution {
  enum class Outcome { success, failure, cutoff };
  std::vector<EpistemicState> states;  // s_0 .. s_n (contracted after s_0)
  std::vector<std::string> actions;    // a_1 .. a_n
  Outcome outcome = Outcome::failure;
  std::string reason;  // for failures
};

const char* outcome_name(Execution::Outcome o);

/// Picks one of n outcomes.
using Chooser = std::function<std::size_t(std::size_t n)>;
Chooser seeded_chooser(std::uint64_t seed);

/// Follows the policy from a global state. Stops with success when the
/// policy is undefined at a goal state, failure when it is undefined
/// elsewhere or the chosen action is not applicable in the owner's view,
/// and cutoff after `max_steps` actions.
Execution execute(const EpistemicTask& task, const Policy& policy, const EpistemicState& start,
                  const Chooser& chooser, std::size_t max_steps);

struct PolicyReport {
  struct Violation {
    std::string kind;  // applicability | uniformity | coverage | execution | unknown-action
    std::string message;
    std::vector<std::string> trace;  // action names leading to the witness
  };
  struct Run {
    std::size_t start;  // index into Globals(s_0)
    std::vector<std::string> actions;
    Execution::Outcome outcome;
  };
  std::vector<Violation> violations;
  std::vector<Run> executions;  // every execution from every initial global
  bool ok() const { return violations.empty(); }
};

/// Independent check of the strong-solution conditions: applicability in
/// the owner view, uniformity across equal views, coverage of the initial
/// globals (goal globals may stay undefined), and exhaustive enumeration of
/// executions with cycle detection.
PolicyReport validate_policy(const EpistemicTask& task, const Policy& policy);

struct PlanReport {
  bool valid = false;
  std::optional<std::size_t> failed_step;  // 0-based index of first inapplicable step
  bool goal_reached = false;
  std::string message;
  std::optional<EpistemicState> final_state;  // contracted, when all steps applied
};

/// Replays the plan by product update. Throws std::invalid_argument for an
/// action name the task does not define.
PlanReport validate_plan(const EpistemicTask& task, const SequentialPlan& plan);

}  // namespace delp
