#include "delp/bisimulation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace delp {

namespace {

using Signature = std::vector<std::uint32_t>;

std::vector<std::uint32_t> rank(const std::vector<Signature>& sigs) {
  std::map<Signature, std::uint32_t> ids;
  for (const auto& s : sigs) ids.emplace(s, 0);
  std::uint32_t next = 0;
  for (auto& [sig, id] : ids) id = next++;
  std::vector<std::uint32_t> out(sigs.size());
  for (std::size_t k = 0; k < sigs.size(); ++k) out[k] = ids.at(sigs[k]);
  return out;
}

// Refines over the sub-model induced by `worlds` (successors outside the set
// are ignored; callers pass successor-closed sets).
std::vector<std::uint32_t> refine(const EpistemicModel& m, const std::vector<WorldId>& worlds) {
  const std::size_t n = worlds.size();
  std::vector<std::uint32_t> local(m.world_count(), UINT32_MAX);
  for (std::size_t k = 0; k < n; ++k) local[worlds[k]] = static_cast<std::uint32_t>(k);

  std::vector<Signature> sigs(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (auto word : m.label(worlds[k]).words()) {
      sigs[k].push_back(static_cast<std::uint32_t>(word >> 32));
      sigs[k].push_back(static_cast<std::uint32_t>(word));
    }
  }
  std::vector<std::uint32_t> block = rank(sigs);
  std::size_t count = n == 0 ? 0 : *std::max_element(block.begin(), block.end()) + 1;

  for (;;) {
    for (std::size_t k = 0; k < n; ++k) {
      Signature& sig = sigs[k];
      sig.clear();
      sig.push_back(block[k]);
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        std::vector<std::uint32_t> succ{block[k]};
        for (WorldId v : m.successors(i, worlds[k])) {
          if (local[v] != UINT32_MAX) succ.push_back(block[local[v]]);
        }
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        sig.push_back(static_cast<std::uint32_t>(succ.size()));
        sig.insert(sig.end(), succ.begin(), succ.end());
      }
    }
    std::vector<std::uint32_t> next = rank(sigs);
    std::size_t next_count = n == 0 ? 0 : *std::max_element(next.begin(), next.end()) + 1;
    block = std::move(next);
    if (next_count == count) break;
    count = next_count;
  }
  return block;
}

void put32(std::string& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
}

}  // namespace

std::vector<std::uint32_t> bisimulation_classes(const EpistemicModel& model) {
  std::vector<WorldId> all(model.world_count());
  for (WorldId w = 0; w < all.size(); ++w) all[w] = w;
  return refine(model, all);
}

EpistemicState bisim_contract(const EpistemicState& s) {
  const auto& m = s.model();
  const std::vector<WorldId> worlds = reachable_worlds(s);
  const std::vector<std::uint32_t> block = refine(m, worlds);
  const std::size_t classes = *std::max_element(block.begin(), block.end()) + 1;

  std::vector<EpistemicModel::World> out_worlds(classes);
  std::vector<char> named(classes, 0);
  std::vector<EpistemicModel::Edge> edges;
  std::vector<WorldId> local(m.world_count(), UINT32_MAX);
  for (std::size_t k = 0; k < worlds.size(); ++k) local[worlds[k]] = static_cast<WorldId>(k);

  for (std::size_t k = 0; k < worlds.size(); ++k) {
    const WorldId b = block[k];
    if (!named[b]) {
      named[b] = 1;
      out_worlds[b] = {m.world_name(worlds[k]), m.label(worlds[k])};
    }
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      for (WorldId v : m.successors(i, worlds[k])) edges.push_back({i, b, block[local[v]]});
    }
  }
  std::vector<WorldId> designated;
  for (WorldId w : s.designated()) designated.push_back(block[local[w]]);
  auto model = std::make_shared<const EpistemicModel>(m.vocabulary_ptr(), std::move(out_worlds), edges);
  return EpistemicState(std::move(model), std::move(designated));
}

bool bisimilar(const EpistemicState& s, const EpistemicState& t) {
  if (!same_vocabulary(s.vocabulary(), t.vocabulary())) {
    throw std::invalid_argument("bisimilar: states use different vocabularies");
  }
  const auto& ms = s.model();
  const auto& mt = t.model();
  const auto offset = static_cast<WorldId>(ms.world_count());
  std::vector<EpistemicModel::World> worlds;
  for (WorldId w = 0; w < ms.world_count(); ++w) worlds.push_back({ms.world_name(w), ms.label(w)});
  for (WorldId w = 0; w < mt.world_count(); ++w) worlds.push_back({mt.world_name(w), mt.label(w)});
  std::vector<EpistemicModel::Edge> edges = ms.edges();
  for (auto e : mt.edges()) edges.push_back({e.agent, e.from + offset, e.to + offset});
  EpistemicModel joint(ms.vocabulary_ptr(), std::move(worlds), edges);
  const auto block = bisimulation_classes(joint);

  std::vector<std::uint32_t> left;
  std::vector<std::uint32_t> right;
  for (WorldId w : s.designated()) left.push_back(block[w]);
  for (WorldId w : t.designated()) right.push_back(block[w + offset]);
  std::sort(left.begin(), left.end());
  left.erase(std::unique(left.begin(), left.end()), left.end());
  std::sort(right.begin(), right.end());
  right.erase(std::unique(right.begin(), right.end()), right.end());
  return left == right;
}

std::string contracted_key(const EpistemicState& c) {
  const auto& m = c.model();
  std::string out;
  put32(out, static_cast<std::uint32_t>(m.world_count()));
  put32(out, static_cast<std::uint32_t>(m.agent_count()));
  for (WorldId w = 0; w < m.world_count(); ++w) {
    for (auto word : m.label(w).words()) {
      put32(out, static_cast<std::uint32_t>(word));
      put32(out, static_cast<std::uint32_t>(word >> 32));
    }
    out.push_back(c.is_designated(w) ? 'd' : 'n');
    for (AgentId i = 0; i < m.agent_count(); ++i) {
      auto succ = m.successors(i, w);
      put32(out, static_cast<std::uint32_t>(succ.size()));
      for (WorldId v : succ) put32(out, v);
    }
  }
  return out;
}

std::string canonical_key(const EpistemicState& s) { return contracted_key(bisim_contract(s)); }

std::uint64_t digest(const std::string& key) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& key) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest(key)));
  return buf;
}

}  // namespace delp
