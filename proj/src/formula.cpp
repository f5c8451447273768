#include "delp/formula.hpp"

#include <algorithm>

#include "delp/detail/text.hpp"

namespace delp {

struct Formula::Node {
  Kind kind = Kind::top;
  std::uint32_t id = 0;  // atom or agent
  std::vector<Formula> children;
};

Formula::Formula() : Formula(top()) {}

Formula Formula::top() {
  static const auto node = std::make_shared<const Node>(Node{Kind::top, 0, {}});
  return Formula(node);
}

Formula Formula::bottom() {
  static const auto node = std::make_shared<const Node>(Node{Kind::bottom, 0, {}});
  return Formula(node);
}

Formula Formula::atom(AtomId atom) {
  return Formula(std::make_shared<const Node>(Node{Kind::atom, atom, {}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::negation, 0, {std::move(operand)}}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::conjunction, 0, {std::move(left), std::move(right)}}));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::disjunction, 0, {std::move(left), std::move(right)}}));
}

Formula Formula::knows(AgentId agent, Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::knows, agent, {std::move(operand)}}));
}

Formula Formula::common(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::common, 0, {std::move(operand)}}));
}

Formula Formula::conjunction(const std::vector<Formula>& conjuncts) {
  if (conjuncts.empty()) return top();
  Formula acc = conjuncts.front();
  for (std::size_t i = 1; i < conjuncts.size(); ++i) acc = conjunction(acc, conjuncts[i]);
  return acc;
}

Formula::Kind Formula::kind() const { return node_->kind; }

AtomId Formula::atom_id() const {
  if (kind() != Kind::atom) throw std::logic_error("not an atom");
  return node_->id;
}

AgentId Formula::agent() const {
  if (kind() != Kind::knows) throw std::logic_error("not a knowledge formula");
  return node_->id;
}

const Formula& Formula::operand() const {
  if (node_->children.size() != 1) throw std::logic_error("formula has no single operand");
  return node_->children[0];
}

const Formula& Formula::left() const {
  if (node_->children.size() != 2) throw std::logic_error("formula is not binary");
  return node_->children[0];
}

const Formula& Formula::right() const {
  if (node_->children.size() != 2) throw std::logic_error("formula is not binary");
  return node_->children[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->kind != b.node_->kind || a.node_->id != b.node_->id) return false;
  return a.node_->children == b.node_->children;
}

Formula desugar(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
    case K::bottom:
    case K::atom:
      return f;
    case K::negation:
      return Formula::negation(desugar(f.operand()));
    case K::conjunction:
      return Formula::conjunction(desugar(f.left()), desugar(f.right()));
    case K::disjunction:
      return Formula::negation(Formula::conjunction(Formula::negation(desugar(f.left())),
                                                    Formula::negation(desugar(f.right()))));
    case K::knows:
      return Formula::knows(f.agent(), desugar(f.operand()));
    case K::common:
      return Formula::common(desugar(f.operand()));
  }
  return f;
}

namespace {

void collect_atoms(const Formula& f, std::set<AtomId>& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom:
      out.insert(f.atom_id());
      return;
    case K::top:
    case K::bottom:
      return;
    case K::conjunction:
    case K::disjunction:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      return;
    default:
      collect_atoms(f.operand(), out);
  }
}

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::disjunction:
      return 1;
    case Formula::Kind::conjunction:
      return 2;
    default:
      return 3;
  }
}

void print(const Formula& f, const Vocabulary& vocab, std::string& out) {
  using K = Formula::Kind;
  auto wrapped = [&](const Formula& sub, bool parens) {
    if (parens) out += '(';
    print(sub, vocab, out);
    if (parens) out += ')';
  };
  switch (f.kind()) {
    case K::top:
      out += "top";
      return;
    case K::bottom:
      out += "bot";
      return;
    case K::atom:
      out += vocab.atom_name(f.atom_id());
      return;
    case K::negation:
      out += '!';
      wrapped(f.operand(), precedence(f.operand()) < 3);
      return;
    case K::knows:
      out += "K[" + vocab.agent_name(f.agent()) + "] ";
      wrapped(f.operand(), precedence(f.operand()) < 3);
      return;
    case K::common:
      out += "C ";
      wrapped(f.operand(), precedence(f.operand()) < 3);
      return;
    case K::conjunction:
      wrapped(f.left(), precedence(f.left()) < 2);
      out += " & ";
      wrapped(f.right(), precedence(f.right()) <= 2);
      return;
    case K::disjunction:
      wrapped(f.left(), false);
      out += " | ";
      wrapped(f.right(), precedence(f.right()) <= 1);
      return;
  }
}

std::vector<AtomId> sorted_unique(std::vector<AtomId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool collect_literals(const Formula& f, std::vector<AtomId>& pos, std::vector<AtomId>& neg) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
      return true;
    case K::atom:
      pos.push_back(f.atom_id());
      return true;
    case K::negation:
      if (f.operand().kind() != K::atom) return false;
      neg.push_back(f.operand().atom_id());
      return true;
    case K::conjunction:
      return collect_literals(f.left(), pos, neg) && collect_literals(f.right(), pos, neg);
    default:
      return false;
  }
}

}  // namespace

std::set<AtomId> atoms_of(const Formula& f) {
  std::set<AtomId> out;
  collect_atoms(f, out);
  return out;
}

bool is_propositional(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::knows:
    case K::common:
      return false;
    case K::top:
    case K::bottom:
    case K::atom:
      return true;
    case K::conjunction:
    case K::disjunction:
      return is_propositional(f.left()) && is_propositional(f.right());
    case K::negation:
      return is_propositional(f.operand());
  }
  return false;
}

std::size_t modal_depth(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top:
    case K::bottom:
    case K::atom:
      return 0;
    case K::conjunction:
    case K::disjunction:
      return std::max(modal_depth(f.left()), modal_depth(f.right()));
    case K::negation:
      return modal_depth(f.operand());
    case K::knows:
    case K::common:
      return 1 + modal_depth(f.operand());
  }
  return 0;
}

std::string to_string(const Formula& f, const Vocabulary& vocab) {
  std::string out;
  print(f, vocab, out);
  return out;
}

Formula parse_formula(std::string_view text, const Vocabulary& vocab) {
  try {
    text::TokenStream ts(text::tokenize(text));
    text::FormulaSyntax syntax = text::parse_formula(ts);
    if (!ts.at_end()) ts.fail("unexpected trailing input");
    return text::resolve(syntax, vocab);
  } catch (const text::SyntaxError& e) {
    throw FormulaSyntaxError(e.what(), e.position().line, e.position().column);
  }
}

LiteralConjunction::LiteralConjunction(std::vector<AtomId> positives, std::vector<AtomId> negatives)
    : positives_(sorted_unique(std::move(positives))), negatives_(sorted_unique(std::move(negatives))) {
  std::vector<AtomId> both;
  std::set_intersection(positives_.begin(), positives_.end(), negatives_.begin(), negatives_.end(),
                        std::back_inserter(both));
  if (!both.empty()) {
    throw std::invalid_argument("inconsistent literal conjunction: atom " + std::to_string(both.front()) +
                                " occurs both positively and negatively");
  }
}

LiteralConjunction LiteralConjunction::with_add_precedence(std::vector<AtomId> positives,
                                                           std::vector<AtomId> negatives) {
  positives = sorted_unique(std::move(positives));
  negatives = sorted_unique(std::move(negatives));
  std::vector<AtomId> kept;
  std::set_difference(negatives.begin(), negatives.end(), positives.begin(), positives.end(),
                      std::back_inserter(kept));
  return LiteralConjunction(std::move(positives), std::move(kept));
}

bool LiteralConjunction::holds(const Valuation& v) const {
  for (AtomId a : positives_) {
    if (!v.contains(a)) return false;
  }
  for (AtomId a : negatives_) {
    if (v.contains(a)) return false;
  }
  return true;
}

Valuation LiteralConjunction::apply(const Valuation& v) const {
  Valuation out = v;
  for (AtomId a : negatives_) out.erase(a);
  for (AtomId a : positives_) out.insert(a);
  return out;
}

Formula LiteralConjunction::to_formula() const {
  std::vector<Formula> parts;
  // Interleave in atom order so printing is stable and readable.
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < positives_.size() || j < negatives_.size()) {
    if (j >= negatives_.size() || (i < positives_.size() && positives_[i] < negatives_[j])) {
      parts.push_back(Formula::atom(positives_[i++]));
    } else {
      parts.push_back(Formula::negation(Formula::atom(negatives_[j++])));
    }
  }
  return Formula::conjunction(parts);
}

std::string to_string(const LiteralConjunction& c, const Vocabulary& vocab) {
  return to_string(c.to_formula(), vocab);
}

bool as_literal_conjunction(const Formula& f, LiteralConjunction& out) {
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;
  if (!collect_literals(f, pos, neg)) return false;
  try {
    out = LiteralConjunction(std::move(pos), std::move(neg));
  } catch (const std::invalid_argument&) {
    return false;
  }
  return true;
}

}  // namespace delp
