#include "delp/model.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace delp {

EpistemicModel::EpistemicModel(VocabularyPtr vocab, std::vector<World> worlds,
                               const std::vector<Edge>& edges)
    : vocab_(std::move(vocab)) {
  if (!vocab_) throw std::invalid_argument("model requires a vocabulary");
  if (worlds.empty()) throw std::invalid_argument("model must have at least one world");
  names_.reserve(worlds.size());
  labels_.reserve(worlds.size());
  for (auto& w : worlds) {
    if (w.label.atom_count() != vocab_->atom_count()) {
      throw std::invalid_argument("label of world '" + w.name + "' uses a different atom table");
    }
    names_.push_back(std::move(w.name));
    labels_.push_back(std::move(w.label));
  }
  successors_.assign(vocab_->agent_count(), std::vector<std::vector<WorldId>>(labels_.size()));
  for (const auto& e : edges) {
    if (e.agent >= vocab_->agent_count()) throw std::invalid_argument("edge for unknown agent");
    if (e.from >= labels_.size() || e.to >= labels_.size()) {
      throw std::invalid_argument("edge endpoint is not a declared world");
    }
    if (e.from != e.to) successors_[e.agent][e.from].push_back(e.to);
  }
  for (auto& per_agent : successors_) {
    for (auto& succ : per_agent) {
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
  }
}

bool EpistemicModel::related(AgentId agent, WorldId from, WorldId to) const {
  if (from == to) return true;
  auto succ = successors(agent, from);
  return std::binary_search(succ.begin(), succ.end(), to);
}

std::vector<EpistemicModel::Edge> EpistemicModel::edges() const {
  std::vector<Edge> out;
  for (AgentId i = 0; i < successors_.size(); ++i) {
    for (WorldId w = 0; w < successors_[i].size(); ++w) {
      for (WorldId v : successors_[i][w]) out.push_back({i, w, v});
    }
  }
  return out;
}

EpistemicState::EpistemicState(ModelPtr model, std::vector<WorldId> designated)
    : model_(std::move(model)), designated_(std::move(designated)) {
  if (!model_) throw std::invalid_argument("state requires a model");
  std::sort(designated_.begin(), designated_.end());
  designated_.erase(std::unique(designated_.begin(), designated_.end()), designated_.end());
  if (designated_.empty()) throw std::invalid_argument("designated set must be non-empty");
  if (designated_.back() >= model_->world_count()) {
    throw std::invalid_argument("designated world outside the model");
  }
}

bool EpistemicState::is_designated(WorldId w) const {
  return std::binary_search(designated_.begin(), designated_.end(), w);
}

BeliefState::BeliefState(std::vector<Valuation> valuations) : valuations_(std::move(valuations)) {
  if (valuations_.empty()) throw std::invalid_argument("belief state must be non-empty");
  std::sort(valuations_.begin(), valuations_.end());
  valuations_.erase(std::unique(valuations_.begin(), valuations_.end()), valuations_.end());
}

std::vector<EpistemicState> globals(const EpistemicState& s) {
  std::vector<EpistemicState> out;
  out.reserve(s.designated().size());
  for (WorldId w : s.designated()) out.emplace_back(s.model_ptr(), std::vector<WorldId>{w});
  return out;
}

EpistemicState local_state(const EpistemicState& s, AgentId agent) {
  const auto& m = s.model();
  std::vector<char> seen(m.world_count(), 0);
  std::deque<WorldId> queue(s.designated().begin(), s.designated().end());
  for (WorldId w : queue) seen[w] = 1;
  while (!queue.empty()) {
    WorldId w = queue.front();
    queue.pop_front();
    for (WorldId v : m.successors(agent, w)) {
      if (!seen[v]) {
        seen[v] = 1;
        queue.push_back(v);
      }
    }
  }
  std::vector<WorldId> designated;
  for (WorldId w = 0; w < seen.size(); ++w) {
    if (seen[w]) designated.push_back(w);
  }
  return EpistemicState(s.model_ptr(), std::move(designated));
}

bool is_local_for(const EpistemicState& s, AgentId agent) {
  for (WorldId w : s.designated()) {
    for (WorldId v : s.model().successors(agent, w)) {
      if (!s.is_designated(v)) return false;
    }
  }
  return true;
}

EpistemicState from_belief_state(const BeliefState& b, VocabularyPtr vocab) {
  std::vector<EpistemicModel::World> worlds;
  std::vector<EpistemicModel::Edge> edges;
  const auto n = static_cast<WorldId>(b.size());
  for (WorldId w = 0; w < n; ++w) {
    worlds.push_back({"w" + std::to_string(w + 1), b.valuations()[w]});
  }
  for (AgentId i = 0; i < vocab->agent_count(); ++i) {
    for (WorldId w = 0; w < n; ++w) {
      for (WorldId v = 0; v < n; ++v) edges.push_back({i, w, v});
    }
  }
  std::vector<WorldId> designated(n);
  for (WorldId w = 0; w < n; ++w) designated[w] = w;
  auto model = std::make_shared<const EpistemicModel>(std::move(vocab), std::move(worlds), edges);
  return EpistemicState(std::move(model), std::move(designated));
}

std::vector<WorldId> reachable_worlds(const EpistemicState& s) {
  const auto& m = s.model();
  std::vector<char> seen(m.world_count(), 0);
  std::deque<WorldId> queue(s.designated().begin(), s.designated().end());
  for (WorldId w : queue) seen[w] = 1;
  while (!queue.empty()) {
    WorldId w = queue.front();
    queue.pop_front();
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      for (WorldId v : m.successors(i, w)) {
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
  }
  std::vector<WorldId> out;
  for (WorldId w = 0; w < seen.size(); ++w) {
    if (seen[w]) out.push_back(w);
  }
  return out;
}

std::string summarize(const EpistemicState& s) {
  const auto& m = s.model();
  std::string out;
  for (std::size_t k = 0; k < s.designated().size(); ++k) {
    if (k > 0) out += " / ";
    out += to_string(m.label(s.designated()[k]), m.vocabulary());
  }
  out += " [" + std::to_string(m.world_count()) + (m.world_count() == 1 ? " world]" : " worlds]");
  return out;
}

}  // namespace delp
