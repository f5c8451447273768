#include "delp/action.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

#include "delp/semantics.hpp"

namespace delp {

EpistemicAction::EpistemicAction(std::string name, VocabularyPtr vocab, std::vector<Event> events,
                                 std::vector<EdgeGuard> edges, std::vector<EventId> designated)
    : name_(std::move(name)), vocab_(std::move(vocab)), events_(std::move(events)),
      designated_(std::move(designated)) {
  if (!vocab_) throw std::invalid_argument("action requires a vocabulary");
  if (events_.empty()) throw std::invalid_argument("action '" + name_ + "' has no events");
  for (const auto& e : events_) {
    check_formula(e.pre, *vocab_);
    for (AtomId p : e.post.positives()) {
      if (p >= vocab_->atom_count()) throw std::invalid_argument("postcondition uses an unknown atom");
    }
    for (AtomId p : e.post.negatives()) {
      if (p >= vocab_->atom_count()) throw std::invalid_argument("postcondition uses an unknown atom");
    }
  }
  for (const auto& g : edges) {
    if (g.agent >= vocab_->agent_count()) throw std::invalid_argument("edge for unknown agent");
    if (g.from >= events_.size() || g.to >= events_.size()) {
      throw std::invalid_argument("edge endpoint is not an event of '" + name_ + "'");
    }
    check_formula(g.condition, *vocab_);
    if (g.from == g.to) continue;
    bool dup = std::any_of(edges_.begin(), edges_.end(), [&](const EdgeGuard& h) {
      return h.agent == g.agent && h.from == g.from && h.to == g.to && h.condition == g.condition;
    });
    if (!dup) edges_.push_back(g);
  }
  std::stable_sort(edges_.begin(), edges_.end(), [](const EdgeGuard& x, const EdgeGuard& y) {
    return std::tie(x.agent, x.from, x.to) < std::tie(y.agent, y.from, y.to);
  });
  std::sort(designated_.begin(), designated_.end());
  designated_.erase(std::unique(designated_.begin(), designated_.end()), designated_.end());
  if (designated_.empty()) throw std::invalid_argument("action '" + name_ + "' has no designated event");
  if (designated_.back() >= events_.size()) throw std::invalid_argument("designated event out of range");
}

bool EpistemicAction::is_designated(EventId e) const {
  return std::binary_search(designated_.begin(), designated_.end(), e);
}

bool EpistemicAction::has_conditional_edges() const {
  return std::any_of(edges_.begin(), edges_.end(), [](const EdgeGuard& g) { return !g.condition.is_top(); });
}

EpistemicAction EpistemicAction::renamed(std::string name) const {
  EpistemicAction out = *this;
  out.name_ = std::move(name);
  return out;
}

namespace {

std::vector<std::vector<char>> precondition_sets(const EpistemicModel& m, const EpistemicAction& a) {
  std::vector<std::vector<char>> out;
  out.reserve(a.event_count());
  for (const auto& e : a.events()) out.push_back(truth_set(m, e.pre));
  return out;
}

std::optional<WorldId> witness(const EpistemicState& s, const EpistemicAction& a,
                               const std::vector<std::vector<char>>& pre) {
  for (WorldId w : s.designated()) {
    bool ok = std::any_of(a.designated().begin(), a.designated().end(),
                          [&](EventId e) { return pre[e][w] != 0; });
    if (!ok) return w;
  }
  return std::nullopt;
}

}  // namespace

std::optional<WorldId> inapplicable_witness(const EpistemicState& s, const EpistemicAction& a) {
  if (!same_vocabulary(s.vocabulary(), a.vocabulary())) {
    throw std::invalid_argument("state and action use different vocabularies");
  }
  return witness(s, a, precondition_sets(s.model(), a));
}

bool applicable(const EpistemicState& s, const EpistemicAction& a) { return !inapplicable_witness(s, a); }

UpdateResult update_with_origins(const EpistemicState& s, const EpistemicAction& a) {
  if (!same_vocabulary(s.vocabulary(), a.vocabulary())) {
    throw std::invalid_argument("state and action use different vocabularies");
  }
  const auto& m = s.model();
  const auto pre = precondition_sets(m, a);
  if (auto w = witness(s, a, pre)) {
    throw UpdateError("action '" + a.name() + "' is not applicable: no designated event fits world " +
                          m.world_name(*w),
                      *w);
  }
  const std::size_t nw = m.world_count();
  const std::size_t ne = a.event_count();

  std::vector<WorldId> index(nw * ne, UINT32_MAX);
  std::vector<EpistemicModel::World> worlds;
  std::vector<std::pair<WorldId, EventId>> origins;
  std::vector<WorldId> designated;
  for (WorldId w = 0; w < nw; ++w) {
    for (EventId e = 0; e < ne; ++e) {
      if (!pre[e][w]) continue;
      auto id = static_cast<WorldId>(worlds.size());
      index[w * ne + e] = id;
      worlds.push_back({"(" + m.world_name(w) + "," + a.event(e).name + ")", a.event(e).post.apply(m.label(w))});
      origins.emplace_back(w, e);
      if (s.is_designated(w) && a.is_designated(e)) designated.push_back(id);
    }
  }

  std::vector<std::vector<char>> guard_truth;
  guard_truth.reserve(a.edges().size());
  for (const auto& g : a.edges()) guard_truth.push_back(truth_set(m, g.condition));

  std::vector<EpistemicModel::Edge> edges;
  for (AgentId i = 0; i < m.agent_count(); ++i) {
    auto first = std::lower_bound(a.edges().begin(), a.edges().end(), i,
                                  [](const EdgeGuard& g, AgentId ag) { return g.agent < ag; });
    for (std::size_t k = 0; k < origins.size(); ++k) {
      const auto [w, e] = origins[k];
      // Event targets reachable from e for this agent at source world w.
      std::vector<EventId> targets{e};
      for (auto it = first; it != a.edges().end() && it->agent == i; ++it) {
        if (it->from == e && guard_truth[static_cast<std::size_t>(it - a.edges().begin())][w]) {
          targets.push_back(it->to);
        }
      }
      std::vector<WorldId> sources{w};
      auto succ = m.successors(i, w);
      sources.insert(sources.end(), succ.begin(), succ.end());
      for (WorldId v : sources) {
        for (EventId f : targets) {
          WorldId to = index[v * ne + f];
          if (to != UINT32_MAX && to != k) edges.push_back({i, static_cast<WorldId>(k), to});
        }
      }
    }
  }
  auto model = std::make_shared<const EpistemicModel>(m.vocabulary_ptr(), std::move(worlds), edges);
  return {EpistemicState(std::move(model), std::move(designated)), std::move(origins)};
}

EpistemicState product_update(const EpistemicState& s, const EpistemicAction& a) {
  return update_with_origins(s, a).state;
}

EpistemicAction local_action(const EpistemicAction& a, AgentId agent) {
  std::vector<char> seen(a.event_count(), 0);
  std::deque<EventId> queue(a.designated().begin(), a.designated().end());
  for (EventId e : queue) seen[e] = 1;
  while (!queue.empty()) {
    EventId e = queue.front();
    queue.pop_front();
    for (const auto& g : a.edges()) {
      if (g.agent == agent && g.from == e && g.condition.is_top() && !seen[g.to]) {
        seen[g.to] = 1;
        queue.push_back(g.to);
      }
    }
  }
  std::vector<EventId> designated;
  for (EventId e = 0; e < seen.size(); ++e) {
    if (seen[e]) designated.push_back(e);
  }
  return EpistemicAction(a.name(), a.vocabulary_ptr(), a.events(), a.edges(), std::move(designated));
}

bool is_local_for(const EpistemicAction& a, AgentId agent) {
  for (const auto& g : a.edges()) {
    if (g.agent == agent && g.condition.is_top() && a.is_designated(g.from) && !a.is_designated(g.to)) {
      return false;
    }
  }
  return true;
}

EpistemicAction induced_action(std::string name, VocabularyPtr vocab, Formula pre, LiteralConjunction post) {
  std::vector<Event> events{{"e", std::move(pre), std::move(post)}};
  return EpistemicAction(std::move(name), std::move(vocab), std::move(events), {}, {0});
}

EpistemicAction skip_action(VocabularyPtr vocab) {
  return induced_action("skip", std::move(vocab), Formula::top(), LiteralConjunction());
}

EpistemicAction make_ask(std::string name, VocabularyPtr vocab, AgentId i, AgentId j, const Formula& phi,
                         const AskMode& mode) {
  if (i == j) throw std::invalid_argument("Ask: asker and answerer must differ");
  if (i >= vocab->agent_count() || j >= vocab->agent_count()) {
    throw std::invalid_argument("Ask: unknown agent");
  }
  const Formula yes = Formula::knows(j, phi);
  const Formula no = Formula::knows(j, Formula::negation(phi));
  std::vector<Event> events{
      {"yes", yes, {}},
      {"no", no, {}},
      {"unknown", Formula::conjunction(Formula::negation(yes), Formula::negation(no)), {}},
  };
  std::vector<EdgeGuard> edges;
  if (mode.kind != AskMode::Kind::public_) {
    events.push_back({"skip", Formula::top(), {}});
    std::vector<char> hears(vocab->agent_count(), 0);
    if (mode.kind == AskMode::Kind::overheard) {
      for (AgentId b : mode.overhearing) {
        if (b >= vocab->agent_count()) throw std::invalid_argument("Ask: unknown agent");
        if (b == i || b == j) continue;
        hears[b] = 1;
        for (EventId x = 0; x < 3; ++x) {
          for (EventId y = 0; y < 3; ++y) {
            if (x != y) edges.push_back({b, x, y, Formula::top()});
          }
        }
      }
    }
    for (AgentId k = 0; k < vocab->agent_count(); ++k) {
      if (k == i || k == j || hears[k]) continue;
      for (EventId x = 0; x < 3; ++x) edges.push_back({k, x, 3, Formula::top()});
    }
  }
  return EpistemicAction(std::move(name), std::move(vocab), std::move(events), std::move(edges), {0, 1, 2});
}

}  // namespace delp
