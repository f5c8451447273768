#include "delp/semantics.hpp"

#include <stdexcept>

namespace delp {

namespace {

using Bits = std::vector<char>;

Bits eval(const EpistemicModel& m, const Formula& f) {
  using K = Formula::Kind;
  const std::size_t n = m.world_count();
  switch (f.kind()) {
    case K::top:
      return Bits(n, 1);
    case K::bottom:
      return Bits(n, 0);
    case K::atom: {
      Bits out(n, 0);
      for (WorldId w = 0; w < n; ++w) out[w] = m.label(w).contains(f.atom_id()) ? 1 : 0;
      return out;
    }
    case K::negation: {
      Bits out = eval(m, f.operand());
      for (auto& b : out) b = b ? 0 : 1;
      return out;
    }
    case K::conjunction: {
      Bits out = eval(m, f.left());
      Bits rhs = eval(m, f.right());
      for (std::size_t w = 0; w < n; ++w) out[w] = out[w] && rhs[w];
      return out;
    }
    case K::disjunction:
      break;  // removed by desugar()
    case K::knows: {
      Bits inner = eval(m, f.operand());
      Bits out(n, 0);
      for (WorldId w = 0; w < n; ++w) {
        bool ok = inner[w] != 0;
        for (WorldId v : m.successors(f.agent(), w)) {
          if (!ok) break;
          ok = inner[v] != 0;
        }
        out[w] = ok ? 1 : 0;
      }
      return out;
    }
    case K::common: {
      // C phi fails exactly at worlds that can reach a non-phi world along the
      // union relation, so walk backwards from the counterexamples.
      Bits inner = eval(m, f.operand());
      std::vector<std::vector<WorldId>> preds(n);
      for (AgentId i = 0; i < m.agent_count(); ++i) {
        for (WorldId w = 0; w < n; ++w) {
          for (WorldId v : m.successors(i, w)) preds[v].push_back(w);
        }
      }
      Bits bad(n, 0);
      std::vector<WorldId> stack;
      for (WorldId w = 0; w < n; ++w) {
        if (!inner[w]) {
          bad[w] = 1;
          stack.push_back(w);
        }
      }
      while (!stack.empty()) {
        WorldId v = stack.back();
        stack.pop_back();
        for (WorldId u : preds[v]) {
          if (!bad[u]) {
            bad[u] = 1;
            stack.push_back(u);
          }
        }
      }
      for (auto& b : bad) b = b ? 0 : 1;
      return bad;
    }
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace

void check_formula(const Formula& phi, const Vocabulary& vocab) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::top:
    case K::bottom:
      return;
    case K::atom:
      if (phi.atom_id() >= vocab.atom_count()) throw std::out_of_range("formula uses an unknown atom");
      return;
    case K::conjunction:
    case K::disjunction:
      check_formula(phi.left(), vocab);
      check_formula(phi.right(), vocab);
      return;
    case K::knows:
      if (phi.agent() >= vocab.agent_count()) throw std::out_of_range("formula uses an unknown agent");
      [[fallthrough]];
    default:
      check_formula(phi.operand(), vocab);
  }
}

std::vector<char> truth_set(const EpistemicModel& model, const Formula& phi) {
  check_formula(phi, model.vocabulary());
  return eval(model, desugar(phi));
}

bool eval_world(const EpistemicModel& model, WorldId world, const Formula& phi) {
  if (world >= model.world_count()) throw std::out_of_range("unknown world");
  return truth_set(model, phi)[world] != 0;
}

bool eval_state(const EpistemicState& state, const Formula& phi) {
  auto t = truth_set(state.model(), phi);
  for (WorldId w : state.designated()) {
    if (!t[w]) return false;
  }
  return true;
}

}  // namespace delp
