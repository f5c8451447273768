#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "delp/dsl.hpp"

namespace delp {

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string join_agents(const std::set<AgentId>& agents, const Vocabulary& vocab) {
  std::string out;
  for (AgentId i : agents) out += (out.empty() ? "" : ",") + vocab.agent_name(i);
  return out;
}

// Edges keyed by (from, to, condition text) with the agent set as value.
using EdgeGroups = std::map<std::tuple<std::uint32_t, std::uint32_t, std::string>, std::set<AgentId>>;

void write_edges(std::ostringstream& os, const EdgeGroups& groups, const Vocabulary& vocab) {
  std::set<std::tuple<std::uint32_t, std::uint32_t, std::string>> done;
  for (const auto& [key, agents] : groups) {
    if (done.count(key)) continue;
    const auto& [from, to, cond] = key;
    std::string label = join_agents(agents, vocab);
    if (!cond.empty()) label += ": " + cond;
    auto back = groups.find({to, from, cond});
    os << "  n" << from << " -> n" << to << " [label=" << quote(label);
    if (back != groups.end() && back->second == agents) {
      os << ", dir=none";
      done.insert(back->first);
    }
    os << "];\n";
  }
}

}  // namespace

std::string export_dot(const EpistemicState& s, const std::string& graph_name) {
  const auto& m = s.model();
  const auto& vocab = m.vocabulary();
  std::ostringstream os;
  os << "digraph " << quote(graph_name) << " {\n";
  for (WorldId w = 0; w < m.world_count(); ++w) {
    os << "  n" << w << " [label=" << quote(m.world_name(w) + "\n" + to_string(m.label(w), vocab))
       << ", shape=" << (s.is_designated(w) ? "doublecircle" : "circle") << "];\n";
  }
  EdgeGroups groups;
  for (const auto& e : m.edges()) groups[{e.from, e.to, ""}].insert(e.agent);
  write_edges(os, groups, vocab);
  os << "}\n";
  return os.str();
}

std::string export_dot(const EpistemicAction& a) {
  const auto& vocab = a.vocabulary();
  std::ostringstream os;
  os << "digraph " << quote(a.name()) << " {\n";
  for (EventId e = 0; e < a.event_count(); ++e) {
    const auto& ev = a.event(e);
    os << "  n" << e << " [label="
       << quote(ev.name + ": <" + to_string(ev.pre, vocab) + ", " + to_string(ev.post, vocab) + ">")
       << ", shape=" << (a.is_designated(e) ? "doublecircle" : "circle") << "];\n";
  }
  EdgeGroups groups;
  for (const auto& g : a.edges()) {
    groups[{g.from, g.to, g.condition.is_top() ? "" : to_string(g.condition, vocab)}].insert(g.agent);
  }
  write_edges(os, groups, vocab);
  os << "}\n";
  return os.str();
}

}  // namespace delp
