#include "delp/dsl.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "delp/detail/text.hpp"

namespace delp {

using text::AtomSyntax;
using text::FormulaSyntax;
using text::Position;
using text::Substitution;
using text::SyntaxError;
using text::TokenKind;
using text::TokenStream;

std::string format_diagnostic(const Diagnostic& d) {
  return std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message;
}

namespace {

// ---------------------------------------------------------------------------
// Syntax tree

struct Name {
  std::string text;
  Position pos;
};

struct ParamSyntax {
  std::string name;
  std::string sort;
  Position pos;
};

struct LiteralSyntax {
  AtomSyntax atom;
  bool positive = true;
};

struct SortDecl {
  Name name;
  std::vector<std::string> objects;
};

struct AtomDecl {
  Name predicate;
  std::vector<std::vector<std::string>> args;  // alternatives per position
  bool has_parens = false;
};

struct SchemaDecl {
  Name name;
  std::vector<ParamSyntax> params;
  std::vector<LiteralSyntax> pre;
  std::vector<LiteralSyntax> eff;
};

struct EventDecl {
  Name name;
  FormulaSyntax pre;
  std::vector<LiteralSyntax> post;
};

struct EdgeDecl {
  std::vector<Name> agents;
  std::optional<std::string> forall_var;
  Name from;
  Name to;
  bool symmetric = false;
  std::optional<FormulaSyntax> condition;
};

struct ActionDecl {
  Name name;  // base name, or full ground name when there are no params
  std::optional<std::vector<ParamSyntax>> params;
  std::vector<EventDecl> events;
  std::vector<EdgeDecl> edges;
  std::vector<Name> designated;
  bool has_designated = false;
};

struct AskDecl {
  Name name;
  Name asker;
  Name answerer;
  FormulaSyntax question;
  std::string mode = "public";
  std::vector<Name> overhearing;
};

struct WorldDecl {
  Name name;
  std::vector<AtomSyntax> atoms;
};

struct StateDecl {
  Name name;
  std::vector<WorldDecl> worlds;
  std::vector<EdgeDecl> edges;
  std::vector<Name> designated;
};

struct GoalDecl {
  Name name;
  FormulaSyntax formula;
};

struct TaskDecl {
  Name name;
  std::optional<Name> initial;
  std::vector<Name> actions;
  std::optional<FormulaSyntax> goal;
  std::optional<Name> owner;
};

struct Document {
  std::vector<Name> agents;
  std::vector<SortDecl> sorts;
  std::vector<AtomDecl> atoms;
  std::vector<SchemaDecl> schemas;
  std::vector<ActionDecl> actions;
  std::vector<AskDecl> asks;
  std::vector<StateDecl> states;
  std::vector<GoalDecl> goals;
  std::vector<TaskDecl> tasks;
  // Declaration order of action families, for error messages and lookup.
};

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string, std::less<>> kTopLevel = {"agents", "sort",  "atoms", "schema", "action",
                                                      "ask",    "state", "goal",  "task"};

Name identifier(TokenStream& ts, std::string_view what) {
  const auto& t = ts.expect_identifier(what);
  return {t.text, t.pos};
}

std::vector<Name> name_list(TokenStream& ts, std::string_view what) {
  std::vector<Name> out{identifier(ts, what)};
  while (ts.accept(",")) out.push_back(identifier(ts, what));
  return out;
}

std::vector<LiteralSyntax> parse_literals(TokenStream& ts) {
  std::vector<LiteralSyntax> out;
  if (ts.accept("top")) return out;
  do {
    LiteralSyntax lit;
    lit.positive = !ts.accept("!");
    lit.atom = text::parse_atom(ts);
    out.push_back(std::move(lit));
  } while (ts.accept("&"));
  return out;
}

std::vector<ParamSyntax> parse_params(TokenStream& ts) {
  // Caller consumed '('.
  std::vector<ParamSyntax> out;
  do {
    ParamSyntax p;
    const auto& t = ts.expect_identifier("parameter name");
    p.name = t.text;
    p.pos = t.pos;
    ts.expect(":");
    p.sort = ts.expect_identifier("sort name").text;
    out.push_back(std::move(p));
  } while (ts.accept(","));
  ts.expect(")");
  return out;
}

// NAME or NAME(arg, ...) where the args are plain identifiers.
Name parse_ground_name(TokenStream& ts, std::string_view what) {
  Name n = identifier(ts, what);
  if (ts.check("(")) {
    ts.next();
    n.text += "(";
    n.text += ts.expect_identifier("argument").text;
    while (ts.accept(",")) n.text += "," + ts.expect_identifier("argument").text;
    ts.expect(")");
    n.text += ")";
  }
  return n;
}

EdgeDecl parse_edge(TokenStream& ts, bool allow_guard) {
  EdgeDecl e;
  if (ts.check("forall") && ts.peek(1).kind == TokenKind::identifier && ts.check(":", 2)) {
    ts.next();
    e.forall_var = ts.next().text;
  } else {
    e.agents = name_list(ts, "agent name");
  }
  ts.expect(":");
  e.from = identifier(ts, "source");
  if (ts.accept("--")) {
    e.symmetric = true;
  } else {
    ts.expect("->");
  }
  e.to = identifier(ts, "target");
  if (allow_guard && ts.accept("if")) e.condition = text::parse_formula(ts);
  ts.expect(";");
  return e;
}

void parse_item(TokenStream& ts, Document& doc) {
  const auto& head = ts.peek();
  if (head.kind != TokenKind::identifier || !kTopLevel.count(head.text)) {
    ts.fail("expected a declaration (agents, sort, atoms, schema, action, ask, state, goal or task)");
  }
  const std::string kw = ts.next().text;

  if (kw == "agents") {
    auto names = name_list(ts, "agent name");
    doc.agents.insert(doc.agents.end(), names.begin(), names.end());
    ts.expect(";");
  } else if (kw == "sort") {
    SortDecl s;
    s.name = identifier(ts, "sort name");
    ts.expect("=");
    ts.expect("{");
    for (auto& n : name_list(ts, "object name")) s.objects.push_back(n.text);
    ts.expect("}");
    ts.expect(";");
    doc.sorts.push_back(std::move(s));
  } else if (kw == "atoms") {
    do {
      AtomDecl a;
      a.predicate = identifier(ts, "atom name");
      if (ts.accept("(")) {
        a.has_parens = true;
        do {
          std::vector<std::string> alts{ts.expect_identifier("atom argument").text};
          while (ts.accept("|")) alts.push_back(ts.expect_identifier("atom argument").text);
          a.args.push_back(std::move(alts));
        } while (ts.accept(","));
        ts.expect(")");
      }
      doc.atoms.push_back(std::move(a));
    } while (ts.accept(","));
    ts.expect(";");
  } else if (kw == "schema") {
    SchemaDecl s;
    s.name = identifier(ts, "schema name");
    if (ts.accept("(")) s.params = parse_params(ts);
    ts.expect("{");
    ts.expect("pre");
    ts.expect(":");
    s.pre = parse_literals(ts);
    ts.expect(";");
    ts.expect("eff");
    ts.expect(":");
    s.eff = parse_literals(ts);
    ts.expect(";");
    ts.expect("}");
    doc.schemas.push_back(std::move(s));
  } else if (kw == "action") {
    ActionDecl a;
    a.name = identifier(ts, "action name");
    if (ts.check("(")) {
      if (ts.peek(1).kind == TokenKind::identifier && ts.check(":", 2)) {
        ts.next();
        a.params = parse_params(ts);
      } else {
        ts.next();
        a.name.text += "(" + ts.expect_identifier("argument").text;
        while (ts.accept(",")) a.name.text += "," + ts.expect_identifier("argument").text;
        ts.expect(")");
        a.name.text += ")";
      }
    }
    ts.expect("{");
    while (!ts.accept("}")) {
      if (ts.accept("event")) {
        EventDecl e;
        e.name = identifier(ts, "event name");
        ts.expect("{");
        ts.expect("pre");
        ts.expect(":");
        e.pre = text::parse_formula(ts);
        ts.expect(";");
        if (ts.accept("post")) {
          ts.expect(":");
          e.post = parse_literals(ts);
          ts.expect(";");
        }
        ts.expect("}");
        a.events.push_back(std::move(e));
      } else if (ts.accept("edge")) {
        a.edges.push_back(parse_edge(ts, true));
      } else if (ts.accept("designated")) {
        auto names = name_list(ts, "event name");
        a.designated.insert(a.designated.end(), names.begin(), names.end());
        a.has_designated = true;
        ts.expect(";");
      } else {
        ts.fail("expected 'event', 'edge', 'designated' or '}'");
      }
    }
    doc.actions.push_back(std::move(a));
  } else if (kw == "ask") {
    AskDecl a;
    a.name = parse_ground_name(ts, "action name");
    ts.expect("{");
    bool have_question = false;
    while (!ts.accept("}")) {
      if (ts.accept("asker")) {
        a.asker = identifier(ts, "agent name");
      } else if (ts.accept("answerer")) {
        a.answerer = identifier(ts, "agent name");
      } else if (ts.accept("question")) {
        a.question = text::parse_formula(ts);
        have_question = true;
      } else if (ts.accept("mode")) {
        const auto& m = ts.expect_identifier("mode");
        if (m.text != "public" && m.text != "private" && m.text != "overheard") {
          throw SyntaxError("mode must be public, private or overheard", m.pos);
        }
        a.mode = m.text;
        if (a.mode == "overheard") a.overhearing = name_list(ts, "agent name");
      } else {
        ts.fail("expected 'asker', 'answerer', 'question', 'mode' or '}'");
      }
      ts.expect(";");
    }
    if (a.asker.text.empty() || a.answerer.text.empty() || !have_question) {
      throw SyntaxError("ask needs asker, answerer and question", a.name.pos);
    }
    doc.asks.push_back(std::move(a));
  } else if (kw == "state") {
    StateDecl s;
    s.name = identifier(ts, "state name");
    ts.expect("{");
    while (!ts.accept("}")) {
      if (ts.accept("world")) {
        WorldDecl w;
        w.name = identifier(ts, "world name");
        if (ts.accept(":") && !ts.check(";")) {
          w.atoms.push_back(text::parse_atom(ts));
          while (ts.accept(",")) w.atoms.push_back(text::parse_atom(ts));
        }
        ts.expect(";");
        s.worlds.push_back(std::move(w));
      } else if (ts.accept("edge")) {
        s.edges.push_back(parse_edge(ts, false));
      } else if (ts.accept("designated")) {
        auto names = name_list(ts, "world name");
        s.designated.insert(s.designated.end(), names.begin(), names.end());
        ts.expect(";");
      } else {
        ts.fail("expected 'world', 'edge', 'designated' or '}'");
      }
    }
    doc.states.push_back(std::move(s));
  } else if (kw == "goal") {
    GoalDecl g;
    g.name = identifier(ts, "goal name");
    ts.expect("=");
    g.formula = text::parse_formula(ts);
    ts.expect(";");
    doc.goals.push_back(std::move(g));
  } else if (kw == "task") {
    TaskDecl t;
    t.name = identifier(ts, "task name");
    ts.expect("{");
    while (!ts.accept("}")) {
      if (ts.accept("initial")) {
        t.initial = identifier(ts, "state name");
      } else if (ts.accept("actions")) {
        t.actions.push_back(parse_ground_name(ts, "action name"));
        while (ts.accept(",")) t.actions.push_back(parse_ground_name(ts, "action name"));
      } else if (ts.accept("goal")) {
        t.goal = text::parse_formula(ts);
      } else if (ts.accept("owner")) {
        t.owner = identifier(ts, "agent name");
      } else {
        ts.fail("expected 'initial', 'actions', 'goal', 'owner' or '}'");
      }
      ts.expect(";");
    }
    doc.tasks.push_back(std::move(t));
  }
}

// Skips to the start of the next top-level declaration.
void recover(TokenStream& ts) {
  int depth = 0;
  while (!ts.at_end()) {
    const auto& t = ts.next();
    if (t.kind == TokenKind::punct && t.text == "{") ++depth;
    if (t.kind == TokenKind::punct && t.text == "}" && depth > 0) --depth;
    const bool boundary = t.kind == TokenKind::punct && (t.text == ";" || t.text == "}");
    if (depth == 0 && boundary && ts.peek().kind == TokenKind::identifier && kTopLevel.count(ts.peek().text)) {
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Resolution

std::string call_name(const std::string& head, const std::vector<std::string>& args) {
  if (args.empty()) return head;
  std::string out = head + "(";
  for (std::size_t k = 0; k < args.size(); ++k) out += (k ? "," : "") + args[k];
  return out + ")";
}

void check_consistent_templates(const std::vector<LiteralSyntax>& lits, const Position& where) {
  for (std::size_t x = 0; x < lits.size(); ++x) {
    for (std::size_t y = x + 1; y < lits.size(); ++y) {
      if (lits[x].positive != lits[y].positive && lits[x].atom.predicate == lits[y].atom.predicate &&
          lits[x].atom.args == lits[y].atom.args) {
        throw SyntaxError("inconsistent postcondition: " + lits[x].atom.display() + " and its negation",
                          lits[y].atom.pos);
      }
    }
  }
  (void)where;
}

struct Resolver {
  const Document& doc;
  const ParseOptions& options;
  VocabularyPtr vocab;
  ObjectSorts sorts;
  std::size_t ground_count = 0;

  // Family name -> instances in ground order.
  std::vector<std::pair<std::string, std::vector<EpistemicAction>>> families;

  AtomId atom(const AtomSyntax& a, const Substitution& subst) const {
    std::string name = a.substituted(subst).display();
    auto id = vocab->find_atom(name);
    if (!id) throw SyntaxError("undeclared atom '" + name + "'", a.pos);
    return *id;
  }

  AgentId agent(const Name& n, const Substitution& subst = {}) const {
    std::string name = n.text;
    if (auto it = subst.find(name); it != subst.end()) name = it->second;
    auto id = vocab->find_agent(name);
    if (!id) throw SyntaxError("undeclared agent '" + name + "'", n.pos);
    return *id;
  }

  LiteralConjunction literals(const std::vector<LiteralSyntax>& lits, const Substitution& subst,
                              bool add_precedence) const {
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;
    for (const auto& l : lits) (l.positive ? pos : neg).push_back(atom(l.atom, subst));
    if (add_precedence) return LiteralConjunction::with_add_precedence(pos, neg);
    try {
      return LiteralConjunction(pos, neg);
    } catch (const std::invalid_argument&) {
      throw SyntaxError("inconsistent literal conjunction", lits.front().atom.pos);
    }
  }

  void count_ground(std::size_t n, const Position& pos) {
    ground_count += n;
    if (ground_count > options.max_ground_actions) {
      throw SyntaxError("grounding produces more than " + std::to_string(options.max_ground_actions) +
                            " actions",
                        pos);
    }
  }

  void build_vocabulary() {
    std::vector<std::string> agents;
    std::set<std::string> seen;
    for (const auto& a : doc.agents) {
      if (!seen.insert(a.text).second) throw SyntaxError("agent '" + a.text + "' declared twice", a.pos);
      agents.push_back(a.text);
    }
    for (const auto& s : doc.sorts) {
      if (sorts.count(s.name.text)) throw SyntaxError("sort '" + s.name.text + "' declared twice", s.name.pos);
      std::set<std::string> objs(s.objects.begin(), s.objects.end());
      if (objs.size() != s.objects.size()) {
        throw SyntaxError("sort '" + s.name.text + "' lists an object twice", s.name.pos);
      }
      sorts[s.name.text] = s.objects;
    }
    std::vector<std::string> atoms;
    std::set<std::string> atom_seen;
    for (const auto& a : doc.atoms) {
      std::vector<std::vector<std::string>> domains;
      for (const auto& alts : a.args) {
        std::vector<std::string> values;
        for (const auto& alt : alts) {
          if (auto it = sorts.find(alt); it != sorts.end()) {
            values.insert(values.end(), it->second.begin(), it->second.end());
          } else {
            values.push_back(alt);
          }
        }
        domains.push_back(std::move(values));
      }
      std::vector<std::size_t> idx(domains.size(), 0);
      const bool empty = std::any_of(domains.begin(), domains.end(), [](const auto& d) { return d.empty(); });
      if (empty) throw SyntaxError("atom '" + a.predicate.text + "' ranges over an empty sort", a.predicate.pos);
      for (;;) {
        std::vector<std::string> args;
        for (std::size_t k = 0; k < domains.size(); ++k) args.push_back(domains[k][idx[k]]);
        std::string name = call_name(a.predicate.text, args);
        if (!atom_seen.insert(name).second) {
          throw SyntaxError("atom '" + name + "' declared twice", a.predicate.pos);
        }
        atoms.push_back(std::move(name));
        bool carry = true;
        for (std::size_t k = domains.size(); carry && k > 0;) {
          --k;
          if (++idx[k] < domains[k].size()) {
            carry = false;
          } else {
            idx[k] = 0;
          }
        }
        if (carry) break;
      }
    }
    vocab = make_vocabulary(std::move(agents), std::move(atoms));
  }

  // Cartesian product of parameter sorts, sorted by argument strings.
  std::vector<std::vector<std::string>> instances(const std::vector<ParamSyntax>& params, const Name& owner) {
    std::set<std::string> names;
    std::vector<const std::vector<std::string>*> domains;
    for (const auto& p : params) {
      if (!names.insert(p.name).second) throw SyntaxError("parameter '" + p.name + "' declared twice", p.pos);
      auto it = sorts.find(p.sort);
      if (it == sorts.end()) throw SyntaxError("unknown sort '" + p.sort + "'", p.pos);
      if (it->second.empty()) throw SyntaxError("sort '" + p.sort + "' is empty", p.pos);
      domains.push_back(&it->second);
    }
    std::size_t total = 1;
    for (auto* d : domains) {
      total *= d->size();
      if (total > options.max_ground_actions) break;
    }
    count_ground(std::min(total, options.max_ground_actions + 1), owner.pos);
    std::vector<std::vector<std::string>> out;
    std::vector<std::size_t> idx(domains.size(), 0);
    for (;;) {
      std::vector<std::string> args;
      for (std::size_t k = 0; k < domains.size(); ++k) args.push_back((*domains[k])[idx[k]]);
      out.push_back(std::move(args));
      bool carry = true;
      for (std::size_t k = domains.size(); carry && k > 0;) {
        --k;
        if (++idx[k] < domains[k]->size()) {
          carry = false;
        } else {
          idx[k] = 0;
        }
      }
      if (carry) break;
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void add_family(const Name& name, std::vector<EpistemicAction> actions) {
    for (const auto& f : families) {
      if (f.first == name.text) throw SyntaxError("action '" + name.text + "' declared twice", name.pos);
    }
    families.emplace_back(name.text, std::move(actions));
  }

  void schemas(std::vector<ActionSchema>& out) {
    for (const auto& s : doc.schemas) {
      check_consistent_templates(s.eff, s.name.pos);
      ActionSchema schema{s.name.text, {}, {}, {}};
      std::set<std::string> params;
      for (const auto& p : s.params) {
        schema.parameters.push_back({p.name, p.sort});
        params.insert(p.name);
      }
      auto templ = [](const LiteralSyntax& l) { return LiteralTemplate{l.atom.predicate, l.atom.args, l.positive}; };
      for (const auto& l : s.pre) schema.precondition.push_back(templ(l));
      for (const auto& l : s.eff) schema.effect.push_back(templ(l));
      std::vector<GroundAction> ground;
      try {
        // Cap by what is left of the global budget.
        ground = ground_schema(schema, sorts, *vocab, options.max_ground_actions - std::min(ground_count, options.max_ground_actions));
      } catch (const GroundingError& e) {
        throw SyntaxError(e.what(), s.name.pos);
      }
      count_ground(ground.size(), s.name.pos);
      std::vector<EpistemicAction> actions;
      for (const auto& g : ground) actions.push_back(to_epistemic(g, vocab));
      add_family(s.name, std::move(actions));
      out.push_back(std::move(schema));
    }
  }

  EpistemicAction instantiate(const ActionDecl& a, const std::string& name, const Substitution& subst) const {
    std::vector<Event> events;
    std::map<std::string, EventId> ids;
    for (const auto& e : a.events) {
      if (!ids.emplace(e.name.text, static_cast<EventId>(events.size())).second) {
        throw SyntaxError("event '" + e.name.text + "' declared twice", e.name.pos);
      }
      // Resolved into locals first: GCC 11 leaks earlier members when a
      // later one throws inside a braced initializer.
      Formula pre = text::resolve(e.pre, *vocab, subst);
      LiteralConjunction post = literals(e.post, subst, true);
      events.push_back({e.name.text, std::move(pre), std::move(post)});
    }
    auto event_id = [&](const Name& n) {
      auto it = ids.find(n.text);
      if (it == ids.end()) throw SyntaxError("undeclared event '" + n.text + "'", n.pos);
      return it->second;
    };
    std::vector<EdgeGuard> edges;
    for (const auto& e : a.edges) {
      const EventId from = event_id(e.from);
      const EventId to = event_id(e.to);
      auto add = [&](AgentId i, const Substitution& s) {
        Formula cond = e.condition ? text::resolve(*e.condition, *vocab, s) : Formula::top();
        edges.push_back({i, from, to, cond});
        if (e.symmetric) edges.push_back({i, to, from, cond});
      };
      if (e.forall_var) {
        for (AgentId i = 0; i < vocab->agent_count(); ++i) {
          Substitution s = subst;
          s[*e.forall_var] = vocab->agent_name(i);
          add(i, s);
        }
      } else {
        for (const auto& ag : e.agents) add(agent(ag, subst), subst);
      }
    }
    if (!a.has_designated || a.designated.empty()) {
      throw SyntaxError("action '" + a.name.text + "' has an empty designated set", a.name.pos);
    }
    std::vector<EventId> designated;
    for (const auto& d : a.designated) designated.push_back(event_id(d));
    return EpistemicAction(name, vocab, std::move(events), std::move(edges), std::move(designated));
  }

  void actions() {
    for (const auto& a : doc.actions) {
      if (a.events.empty()) throw SyntaxError("action '" + a.name.text + "' has no events", a.name.pos);
      for (const auto& e : a.events) check_consistent_templates(e.post, e.name.pos);
      std::vector<EpistemicAction> out;
      if (!a.params) {
        count_ground(1, a.name.pos);
        out.push_back(instantiate(a, a.name.text, {}));
      } else {
        for (const auto& args : instances(*a.params, a.name)) {
          Substitution subst;
          for (std::size_t k = 0; k < args.size(); ++k) subst[(*a.params)[k].name] = args[k];
          out.push_back(instantiate(a, call_name(a.name.text, args), subst));
        }
      }
      add_family(a.name, std::move(out));
    }
    for (const auto& a : doc.asks) {
      count_ground(1, a.name.pos);
      AskMode mode;
      if (a.mode == "private") mode = AskMode::make_private();
      if (a.mode == "overheard") {
        std::vector<AgentId> b;
        for (const auto& n : a.overhearing) b.push_back(agent(n));
        mode = AskMode::make_overheard(std::move(b));
      }
      const AgentId i = agent(a.asker);
      const AgentId j = agent(a.answerer);
      if (i == j) throw SyntaxError("asker and answerer must differ", a.answerer.pos);
      std::vector<EpistemicAction> out;
      out.push_back(make_ask(a.name.text, vocab, i, j, text::resolve(a.question, *vocab), mode));
      add_family(a.name, std::move(out));
    }
  }

  EpistemicState state(const StateDecl& s) const {
    std::vector<EpistemicModel::World> worlds;
    std::map<std::string, WorldId> ids;
    for (const auto& w : s.worlds) {
      if (!ids.emplace(w.name.text, static_cast<WorldId>(worlds.size())).second) {
        throw SyntaxError("world '" + w.name.text + "' declared twice", w.name.pos);
      }
      Valuation label(vocab->atom_count());
      for (const auto& a : w.atoms) label.insert(atom(a, {}));
      worlds.push_back({w.name.text, std::move(label)});
    }
    if (worlds.empty()) throw SyntaxError("state '" + s.name.text + "' has no worlds", s.name.pos);
    auto world_id = [&](const Name& n) {
      auto it = ids.find(n.text);
      if (it == ids.end()) throw SyntaxError("undeclared world '" + n.text + "'", n.pos);
      return it->second;
    };
    std::vector<EpistemicModel::Edge> edges;
    for (const auto& e : s.edges) {
      if (e.forall_var) throw SyntaxError("'forall' edges are only allowed in actions", e.from.pos);
      for (const auto& ag : e.agents) {
        const AgentId i = agent(ag);
        edges.push_back({i, world_id(e.from), world_id(e.to)});
        if (e.symmetric) edges.push_back({i, world_id(e.to), world_id(e.from)});
      }
    }
    if (s.designated.empty()) throw SyntaxError("state '" + s.name.text + "' has an empty designated set", s.name.pos);
    std::vector<WorldId> designated;
    for (const auto& d : s.designated) designated.push_back(world_id(d));
    auto model = std::make_shared<const EpistemicModel>(vocab, std::move(worlds), edges);
    return EpistemicState(std::move(model), std::move(designated));
  }

  TaskDocument task(std::vector<ActionSchema> schemas_out) {
    if (doc.tasks.empty()) throw SyntaxError("missing task block", {});
    if (doc.tasks.size() > 1) throw SyntaxError("more than one task block", doc.tasks[1].name.pos);
    const TaskDecl& t = doc.tasks.front();
    TaskDocument out{EpistemicTask{t.name.text, vocab, {}, EpistemicState(nullptr_model(), {0}), Formula::top(), {}},
                     std::move(schemas_out), sorts, {}};

    std::map<std::string, const StateDecl*> states;
    for (const auto& s : doc.states) {
      if (!states.emplace(s.name.text, &s).second) {
        throw SyntaxError("state '" + s.name.text + "' declared twice", s.name.pos);
      }
      out.source["state:" + s.name.text] = {s.name.pos.line, s.name.pos.column};
    }
    std::map<std::string, const GoalDecl*> goals;
    for (const auto& g : doc.goals) {
      if (!goals.emplace(g.name.text, &g).second) {
        throw SyntaxError("goal '" + g.name.text + "' declared twice", g.name.pos);
      }
      out.source["goal:" + g.name.text] = {g.name.pos.line, g.name.pos.column};
    }
    for (const auto& s : doc.schemas) out.source["schema:" + s.name.text] = {s.name.pos.line, s.name.pos.column};
    for (const auto& a : doc.actions) out.source["action:" + a.name.text] = {a.name.pos.line, a.name.pos.column};
    for (const auto& a : doc.asks) out.source["action:" + a.name.text] = {a.name.pos.line, a.name.pos.column};
    out.source["task"] = {t.name.pos.line, t.name.pos.column};

    if (!t.initial) throw SyntaxError("task needs an 'initial' state", t.name.pos);
    auto st = states.find(t.initial->text);
    if (st == states.end()) throw SyntaxError("undeclared state '" + t.initial->text + "'", t.initial->pos);
    out.task.initial = state(*st->second);

    if (!t.goal) throw SyntaxError("task needs a 'goal'", t.name.pos);
    const FormulaSyntax& g = *t.goal;
    if (g.kind == Formula::Kind::atom && g.atom.args.empty() && goals.count(g.atom.predicate)) {
      out.task.goal = text::resolve(goals.at(g.atom.predicate)->formula, *vocab);
    } else {
      out.task.goal = text::resolve(g, *vocab);
    }
    for (const auto& [name, decl] : goals) text::resolve(decl->formula, *vocab);

    if (t.owner) out.task.owner = agent(*t.owner);

    std::set<std::string> used;
    for (const auto& n : t.actions) {
      // A family name, then an exact ground name, then the head of
      // individually declared ground actions such as Ask(Father,Employee).
      std::vector<const EpistemicAction*> picked;
      for (const auto& [family, instances] : families) {
        if (family == n.text) {
          for (const auto& a : instances) picked.push_back(&a);
        }
      }
      for (int pass = 0; pass < 2 && picked.empty(); ++pass) {
        for (const auto& [family, instances] : families) {
          for (const auto& a : instances) {
            const std::string& name = a.name();
            const bool match = pass == 0 ? name == n.text
                                         : name.size() > n.text.size() && name.compare(0, n.text.size(), n.text) == 0 &&
                                               name[n.text.size()] == '(' && family == name;
            if (match) picked.push_back(&a);
          }
        }
      }
      if (picked.empty()) throw SyntaxError("undeclared action '" + n.text + "'", n.pos);
      for (const auto* a : picked) {
        if (!used.insert(a->name()).second) throw SyntaxError("action '" + a->name() + "' listed twice", n.pos);
        out.task.actions.push_back(*a);
      }
    }
    try {
      check_task(out.task);
    } catch (const std::invalid_argument& e) {
      throw SyntaxError(e.what(), t.name.pos);
    }
    return out;
  }

  // Placeholder model used only until the initial state is resolved.
  ModelPtr nullptr_model() const {
    return std::make_shared<const EpistemicModel>(
        vocab, std::vector<EpistemicModel::World>{{"w", Valuation(vocab->atom_count())}},
        std::vector<EpistemicModel::Edge>{});
  }
};

constexpr std::size_t kMaxDiagnostics = 20;

}  // namespace

ParseResult parse_task(std::string_view input, const ParseOptions& options) {
  ParseResult result;
  auto report = [&](const std::string& msg, Position pos) { result.diagnostics.push_back({pos.line, pos.column, msg}); };
  try {
    TokenStream ts(text::tokenize(input));
    Document doc;
    while (!ts.at_end()) {
      try {
        parse_item(ts, doc);
      } catch (const SyntaxError& e) {
        report(e.what(), e.position());
        if (result.diagnostics.size() >= kMaxDiagnostics) break;
        recover(ts);
      }
    }
    if (!result.diagnostics.empty()) return result;

    Resolver r{doc, options, nullptr, {}, 0, {}};
    r.build_vocabulary();
    std::vector<ActionSchema> schemas;
    r.schemas(schemas);
    r.actions();
    result.document = r.task(std::move(schemas));
  } catch (const SyntaxError& e) {
    report(e.what(), e.position());
  } catch (const std::exception& e) {
    report(e.what(), {});
  }
  if (!result.diagnostics.empty()) result.document.reset();
  return result;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'' || c == '.';
  });
}

std::vector<std::string> display_names(const std::vector<std::string>& names, const char* prefix) {
  std::set<std::string> seen;
  bool ok = true;
  for (const auto& n : names) ok = ok && is_identifier(n) && seen.insert(n).second && n != "if";
  if (ok) return names;
  std::vector<std::string> out;
  for (std::size_t k = 0; k < names.size(); ++k) out.push_back(prefix + std::to_string(k + 1));
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) out += (k ? sep : "") + parts[k];
  return out;
}

void write_state(std::ostringstream& os, const EpistemicState& s, const std::string& name) {
  const auto& m = s.model();
  const auto& vocab = m.vocabulary();
  std::vector<std::string> raw;
  for (WorldId w = 0; w < m.world_count(); ++w) raw.push_back(m.world_name(w));
  const auto names = display_names(raw, "w");
  os << "state " << name << " {\n";
  for (WorldId w = 0; w < m.world_count(); ++w) {
    std::vector<std::string> atoms;
    for (AtomId a : m.label(w).atoms()) atoms.push_back(vocab.atom_name(a));
    os << "  world " << names[w] << ":" << (atoms.empty() ? "" : " " + join(atoms, ", ")) << ";\n";
  }
  for (const auto& e : m.edges()) {
    // Symmetric pairs are written once, from the lower index.
    const bool both = m.related(e.agent, e.to, e.from);
    if (both && e.from > e.to) continue;
    os << "  edge " << vocab.agent_name(e.agent) << ": " << names[e.from] << (both ? " -- " : " -> ") << names[e.to]
       << ";\n";
  }
  std::vector<std::string> designated;
  for (WorldId w : s.designated()) designated.push_back(names[w]);
  os << "  designated " << join(designated, ", ") << ";\n}\n";
}

}  // namespace

std::string serialize_state(const EpistemicState& s, const std::string& name) {
  std::ostringstream os;
  write_state(os, s, name);
  return os.str();
}

std::string serialize_task(const EpistemicTask& task) {
  const auto& vocab = *task.vocab;
  std::ostringstream os;
  if (vocab.agent_count() > 0) os << "agents " << join(vocab.agent_names(), ", ") << ";\n";
  if (vocab.atom_count() > 0) os << "atoms " << join(vocab.atom_names(), ", ") << ";\n";
  for (const auto& a : task.actions) {
    os << "\naction " << a.name() << " {\n";
    std::vector<std::string> raw;
    for (const auto& e : a.events()) raw.push_back(e.name);
    const auto names = display_names(raw, "e");
    for (EventId e = 0; e < a.event_count(); ++e) {
      const auto& ev = a.event(e);
      os << "  event " << names[e] << " { pre: " << to_string(ev.pre, vocab) << "; post: " << to_string(ev.post, vocab)
         << "; }\n";
    }
    auto reverse_of = [&](const EdgeGuard& g) {
      return std::any_of(a.edges().begin(), a.edges().end(), [&](const EdgeGuard& h) {
        return h.agent == g.agent && h.from == g.to && h.to == g.from && h.condition == g.condition;
      });
    };
    for (const auto& g : a.edges()) {
      const bool both = reverse_of(g);
      if (both && g.from > g.to) continue;
      os << "  edge " << vocab.agent_name(g.agent) << ": " << names[g.from] << (both ? " -- " : " -> ") << names[g.to];
      if (!g.condition.is_top()) os << " if " << to_string(g.condition, vocab);
      os << ";\n";
    }
    std::vector<std::string> designated;
    for (EventId e : a.designated()) designated.push_back(names[e]);
    os << "  designated " << join(designated, ", ") << ";\n}\n";
  }
  os << "\n";
  write_state(os, task.initial, "s0");
  os << "\ngoal g = " << to_string(task.goal, vocab) << ";\n\n";
  os << "task " << (is_identifier(task.name) ? task.name : "task") << " {\n  initial s0;\n";
  if (!task.actions.empty()) {
    std::vector<std::string> names;
    for (const auto& a : task.actions) names.push_back(a.name());
    os << "  actions " << join(names, ", ") << ";\n";
  }
  os << "  goal g;\n";
  if (task.owner) os << "  owner " << vocab.agent_name(*task.owner) << ";\n";
  os << "}\n";
  return os.str();
}

EpistemicState parse_state(std::string_view input, const VocabularyPtr& vocab) {
  try {
    TokenStream ts(text::tokenize(input));
    Document doc;
    if (!ts.check("state")) ts.fail("expected 'state'");
    parse_item(ts, doc);
    if (!ts.at_end()) ts.fail("unexpected input after state block");
    ParseOptions options;
    Resolver r{doc, options, vocab, {}, 0, {}};
    return r.state(doc.states.front());
  } catch (const SyntaxError& e) {
    throw std::invalid_argument(std::to_string(e.position().line) + ":" + std::to_string(e.position().column) +
                                ": " + e.what());
  }
}

}  // namespace delp
