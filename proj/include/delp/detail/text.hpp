#pragma once

// Tokenizer and formula syntax trees shared by the formula parser and the
// task-file parser. Not part of the public API.

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delp/formula.hpp"

namespace delp::text {

struct Position {
  int line = 1;
  int column = 1;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& msg, Position pos) : std::runtime_error(msg), pos_(pos) {}
  Position position() const { return pos_; }

 private:
  Position pos_;
};

enum class TokenKind { identifier, punct, end };

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  Position pos;
};

/// Identifiers are [A-Za-z0-9_'.]+; punctuation is one of
/// ( ) [ ] { } , ; : = ! & | * @ -> --. `#` starts a line comment.
std::vector<Token> tokenize(std::string_view input);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::end; }
  bool check(std::string_view punct_or_keyword, std::size_t ahead = 0) const;
  bool accept(std::string_view punct_or_keyword);
  const Token& expect(std::string_view punct_or_keyword);
  const Token& expect_identifier(std::string_view what);
  [[noreturn]] void fail(const std::string& msg) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

struct AtomSyntax {
  std::string predicate;
  std::vector<std::string> args;
  Position pos;

  std::string display() const;
  AtomSyntax substituted(const std::map<std::string, std::string>& subst) const;
};

struct FormulaSyntax {
  Formula::Kind kind = Formula::Kind::top;
  AtomSyntax atom;    // kind == atom
  std::string agent;  // kind == knows
  Position agent_pos;
  std::vector<FormulaSyntax> children;
  Position pos;
};

using Substitution = std::map<std::string, std::string>;

AtomSyntax parse_atom(TokenStream& ts);
FormulaSyntax parse_formula(TokenStream& ts);

/// Resolves names against the vocabulary after applying the substitution to
/// atom arguments and agent names. Throws SyntaxError on unknown names.
Formula resolve(const FormulaSyntax& syntax, const Vocabulary& vocab, const Substitution& subst = {});

}  // namespace delp::text
