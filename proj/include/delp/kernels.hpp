#pragma once

#include <string>
#include <vector>

#include "delp/parallel.hpp"
#include "delp/task.hpp"

namespace delp {

/// One applicable (node, action) pair of a sequential search level.
struct Successor {
  std::size_t parent;
  std::size_t action;
  EpistemicState state;  // contracted when requested
  std::string key;       // canonical key
  bool goal;
};

/// Expands every frontier state by every applicable action. The result is
/// ordered by (parent, action) regardless of backend.
std::vector<Successor> expand_level(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                    bool contract, Backend backend);

std::vector<Successor> expand_serial(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                     bool contract);
std::vector<Successor> expand_openmp(const EpistemicTask& task, const std::vector<EpistemicState>& frontier,
                                     bool contract);

/// An owner view: the contracted local state plus the designated worlds
/// whose own view is that same state.
struct View {
  EpistemicState state;
  std::string key;
  std::vector<WorldId> representatives;
  bool goal;  // every representative satisfies the goal
};

/// The owner's view of a global state.
View view_of(const EpistemicState& global, AgentId owner, const Formula& goal);

/// Applicable actions of a view and the views the owner may observe after
/// each, one entry per action in task order (empty `children` and
/// applicable == false when the action cannot be chosen).
struct ViewExpansion {
  struct Branch {
    bool applicable = false;
    std::vector<View> children;  // distinct keys, in first-seen order
  };
  std::vector<Branch> branches;
};

std::vector<ViewExpansion> expand_views(const EpistemicTask& task, const std::vector<View>& views,
                                        Backend backend);

}  // namespace delp
