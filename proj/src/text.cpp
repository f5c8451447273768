#include "delp/detail/text.hpp"

#include <cctype>

namespace delp::text {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'' || c == '.';
}

constexpr std::size_t kMaxNesting = 256;

}  // namespace

std::vector<Token> tokenize(std::string_view input) {
  std::vector<Token> out;
  Position pos;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (input[i] == '\n') {
        ++pos.line;
        pos.column = 1;
      } else {
        ++pos.column;
      }
      ++i;
    }
  };
  while (i < input.size()) {
    char c = input[i];
    if (c == '#') {
      while (i < input.size() && input[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      advance(1);
      continue;
    }
    Token tok;
    tok.pos = pos;
    if (is_ident_char(c)) {
      std::size_t j = i;
      while (j < input.size() && is_ident_char(input[j])) ++j;
      tok.kind = TokenKind::identifier;
      tok.text = std::string(input.substr(i, j - i));
      advance(j - i);
      out.push_back(std::move(tok));
      continue;
    }
    if (i + 1 < input.size() && c == '-' && (input[i + 1] == '>' || input[i + 1] == '-')) {
      tok.kind = TokenKind::punct;
      tok.text = std::string(input.substr(i, 2));
      advance(2);
      out.push_back(std::move(tok));
      continue;
    }
    static constexpr std::string_view kSingles = "()[]{},;:=!&|*@";
    if (kSingles.find(c) != std::string_view::npos) {
      tok.kind = TokenKind::punct;
      tok.text = std::string(1, c);
      advance(1);
      out.push_back(std::move(tok));
      continue;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c)) != 0
                            ? std::string(1, c)
                            : "\\x" + std::to_string(static_cast<unsigned char>(c));
    throw SyntaxError("unexpected character '" + shown + "'", pos);
  }
  Token end;
  end.kind = TokenKind::end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  if (idx >= tokens_.size()) return tokens_.back();
  return tokens_[idx];
}

const Token& TokenStream::next() {
  const Token& t = peek();
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::check(std::string_view text, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind != TokenKind::end && t.text == text;
}

bool TokenStream::accept(std::string_view text) {
  if (!check(text)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(std::string_view text) {
  if (!check(text)) {
    fail("expected '" + std::string(text) + "'");
  }
  return next();
}

const Token& TokenStream::expect_identifier(std::string_view what) {
  if (peek().kind != TokenKind::identifier) fail("expected " + std::string(what));
  return next();
}

void TokenStream::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string found = t.kind == TokenKind::end ? "end of input" : "'" + t.text + "'";
  throw SyntaxError(msg + ", found " + found, t.pos);
}

std::string AtomSyntax::display() const {
  if (args.empty()) return predicate;
  std::string out = predicate + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ",";
    out += args[i];
  }
  return out + ")";
}

AtomSyntax AtomSyntax::substituted(const Substitution& subst) const {
  AtomSyntax out = *this;
  for (auto& a : out.args) {
    if (auto it = subst.find(a); it != subst.end()) a = it->second;
  }
  return out;
}

AtomSyntax parse_atom(TokenStream& ts) {
  AtomSyntax atom;
  const Token& name = ts.expect_identifier("atom name");
  atom.predicate = name.text;
  atom.pos = name.pos;
  if (ts.accept("(")) {
    atom.args.push_back(ts.expect_identifier("atom argument").text);
    while (ts.accept(",")) atom.args.push_back(ts.expect_identifier("atom argument").text);
    ts.expect(")");
  }
  return atom;
}

namespace {

FormulaSyntax parse_disjunction(TokenStream& ts, std::size_t depth);

FormulaSyntax parse_unary(TokenStream& ts, std::size_t depth) {
  if (depth > kMaxNesting) ts.fail("formula nested too deeply");
  FormulaSyntax f;
  f.pos = ts.peek().pos;
  if (ts.accept("!")) {
    f.kind = Formula::Kind::negation;
    f.children.push_back(parse_unary(ts, depth + 1));
    return f;
  }
  if (ts.check("K") && ts.check("[", 1)) {
    ts.next();
    ts.next();
    f.kind = Formula::Kind::knows;
    const Token& agent = ts.expect_identifier("agent name");
    f.agent = agent.text;
    f.agent_pos = agent.pos;
    ts.expect("]");
    f.children.push_back(parse_unary(ts, depth + 1));
    return f;
  }
  if (ts.check("C")) {
    // C is reserved; `C (phi)` is common knowledge, never an atom.
    ts.next();
    f.kind = Formula::Kind::common;
    f.children.push_back(parse_unary(ts, depth + 1));
    return f;
  }
  if (ts.accept("(")) {
    FormulaSyntax inner = parse_disjunction(ts, depth + 1);
    ts.expect(")");
    return inner;
  }
  if (ts.accept("top")) {
    f.kind = Formula::Kind::top;
    return f;
  }
  if (ts.accept("bot")) {
    f.kind = Formula::Kind::bottom;
    return f;
  }
  if (ts.peek().kind != TokenKind::identifier) ts.fail("expected formula");
  if (ts.check("K")) ts.fail("'K' must be followed by '[agent]'");
  f.kind = Formula::Kind::atom;
  f.atom = parse_atom(ts);
  return f;
}

FormulaSyntax parse_conjunction(TokenStream& ts, std::size_t depth) {
  FormulaSyntax lhs = parse_unary(ts, depth);
  while (ts.check("&")) {
    Position pos = ts.next().pos;
    FormulaSyntax node;
    node.kind = Formula::Kind::conjunction;
    node.pos = pos;
    node.children.push_back(std::move(lhs));
    node.children.push_back(parse_unary(ts, depth));
    lhs = std::move(node);
  }
  return lhs;
}

FormulaSyntax parse_disjunction(TokenStream& ts, std::size_t depth) {
  FormulaSyntax lhs = parse_conjunction(ts, depth);
  while (ts.check("|")) {
    Position pos = ts.next().pos;
    FormulaSyntax node;
    node.kind = Formula::Kind::disjunction;
    node.pos = pos;
    node.children.push_back(std::move(lhs));
    node.children.push_back(parse_conjunction(ts, depth));
    lhs = std::move(node);
  }
  return lhs;
}

}  // namespace

FormulaSyntax parse_formula(TokenStream& ts) { return parse_disjunction(ts, 0); }

Formula resolve(const FormulaSyntax& syntax, const Vocabulary& vocab, const Substitution& subst) {
  using K = Formula::Kind;
  switch (syntax.kind) {
    case K::top:
      return Formula::top();
    case K::bottom:
      return Formula::bottom();
    case K::atom: {
      std::string name = syntax.atom.substituted(subst).display();
      auto id = vocab.find_atom(name);
      if (!id) throw SyntaxError("undeclared atom '" + name + "'", syntax.atom.pos);
      return Formula::atom(*id);
    }
    case K::negation:
      return Formula::negation(resolve(syntax.children.at(0), vocab, subst));
    case K::conjunction:
      return Formula::conjunction(resolve(syntax.children.at(0), vocab, subst),
                                  resolve(syntax.children.at(1), vocab, subst));
    case K::disjunction:
      return Formula::disjunction(resolve(syntax.children.at(0), vocab, subst),
                                  resolve(syntax.children.at(1), vocab, subst));
    case K::knows: {
      std::string agent = syntax.agent;
      if (auto it = subst.find(agent); it != subst.end()) agent = it->second;
      auto id = vocab.find_agent(agent);
      if (!id) throw SyntaxError("undeclared agent '" + agent + "'", syntax.agent_pos);
      return Formula::knows(*id, resolve(syntax.children.at(0), vocab, subst));
    }
    case K::common:
      return Formula::common(resolve(syntax.children.at(0), vocab, subst));
  }
  throw SyntaxError("malformed formula", syntax.pos);
}

}  // namespace delp::text
