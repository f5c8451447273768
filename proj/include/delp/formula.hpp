#pragma once

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delp/valuation.hpp"
#include "delp/vocabulary.hpp"

namespace delp {

/// Formulas of the multi-agent epistemic language with individual knowledge
/// K[i] and common knowledge C. Immutable; copies share structure.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    top,
    bottom,
    atom,
    negation,
    conjunction,
    disjunction,  // sugar, removed by desugar() before evaluation
    knows,
    common,
  };

  Formula();  // top

  static Formula top();
  static Formula bottom();
  static Formula atom(AtomId atom);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula left, Formula right);
  static Formula disjunction(Formula left, Formula right);
  static Formula knows(AgentId agent, Formula operand);
  static Formula common(Formula operand);

  /// Left-nested conjunction; the empty conjunction is top.
  static Formula conjunction(const std::vector<Formula>& conjuncts);

  Kind kind() const;
  AtomId atom_id() const;
  AgentId agent() const;
  const Formula& operand() const;
  const Formula& left() const;
  const Formula& right() const;

  bool is_top() const { return kind() == Kind::top; }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

inline Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&&(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula operator||(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }

/// Rewrites every disjunction a | b into !(!a & !b).
Formula desugar(const Formula& f);

std::set<AtomId> atoms_of(const Formula& f);
bool is_propositional(const Formula& f);
std::size_t modal_depth(const Formula& f);

/// Concrete syntax, minimally parenthesised. parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f, const Vocabulary& vocab);

class FormulaSyntaxError : public std::runtime_error {
 public:
  FormulaSyntaxError(const std::string& msg, int line, int column)
      : std::runtime_error(msg), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses `top`, `bot`, atoms, `!f`, `f & g`, `f | g`, `K[agent] f`, `C f`.
/// `&` binds tighter than `|`; unary operators bind tightest.
Formula parse_formula(std::string_view text, const Vocabulary& vocab);

/// A conjunction of literals, as used for STRIPS effects and event
/// postconditions. Positive and negative atoms are disjoint.
class LiteralConjunction {
 public:
  LiteralConjunction() = default;
  /// Throws std::invalid_argument if an atom occurs with both signs.
  LiteralConjunction(std::vector<AtomId> positives, std::vector<AtomId> negatives);

  /// Drops negatives that also occur positively (delete-then-add reading).
  static LiteralConjunction with_add_precedence(std::vector<AtomId> positives,
                                                std::vector<AtomId> negatives);

  const std::vector<AtomId>& positives() const { return positives_; }
  const std::vector<AtomId>& negatives() const { return negatives_; }
  bool empty() const { return positives_.empty() && negatives_.empty(); }

  bool holds(const Valuation& v) const;
  /// Delete negatives, then add positives.
  Valuation apply(const Valuation& v) const;
  Formula to_formula() const;

  friend bool operator==(const LiteralConjunction&, const LiteralConjunction&) = default;

 private:
  std::vector<AtomId> positives_;
  std::vector<AtomId> negatives_;
};

std::string to_string(const LiteralConjunction& c, const Vocabulary& vocab);

/// Recognises conjunctions of literals (top, atoms, negated atoms and their
/// conjunctions). Returns false for anything else.
bool as_literal_conjunction(const Formula& f, LiteralConjunction& out);

}  // namespace delp
