#include <doctest.h>

#include "support.hpp"

using namespace delp;
using test::load_task;

namespace {

ActionSchema go_schema() {
  return {"Go",
          {{"a", "Agent"}, {"from", "Loc"}, {"to", "Loc"}},
          {{"At", {"a", "from"}, true}},
          {{"At", {"a", "to"}, true}, {"At", {"a", "from"}, false}}};
}

ActionSchema wrap_schema() {
  return {"Wrap",
          {{"a", "Agent"}, {"o", "Obj"}},
          {{"Has", {"a", "o"}, true}, {"Wrapped", {"o"}, false}},
          {{"Wrapped", {"o"}, true}}};
}

ActionSchema pickup_schema() {
  return {"PickUp",
          {{"a", "Agent"}, {"o", "Obj"}, {"l", "Loc"}},
          {{"At", {"a", "l"}, true}, {"At", {"o", "l"}, true}, {"Has", {"a", "o"}, false}},
          {{"Has", {"a", "o"}, true}, {"At", {"o", "l"}, false}}};
}

// Atoms At(x,l) for every x in `things`, Has(a,o), Wrapped(o).
VocabularyPtr birthday_vocab(const std::vector<std::string>& agents, const std::vector<std::string>& objs,
                             const std::vector<std::string>& locs) {
  std::vector<std::string> atoms;
  for (const auto& group : {agents, objs}) {
    for (const auto& x : group) {
      for (const auto& l : locs) atoms.push_back("At(" + x + "," + l + ")");
    }
  }
  for (const auto& a : agents) {
    for (const auto& o : objs) atoms.push_back("Has(" + a + "," + o + ")");
  }
  for (const auto& o : objs) atoms.push_back("Wrapped(" + o + ")");
  return make_vocabulary(agents, atoms);
}

Valuation valuation(const Vocabulary& v, const std::vector<std::string>& atoms) {
  Valuation out(v.atom_count());
  for (const auto& a : atoms) out.insert(v.atom(a));
  return out;
}

LiteralConjunction lits(const Vocabulary& v, const std::vector<std::string>& pos,
                        const std::vector<std::string>& neg) {
  std::vector<AtomId> p;
  std::vector<AtomId> n;
  for (const auto& a : pos) p.push_back(v.atom(a));
  for (const auto& a : neg) n.push_back(v.atom(a));
  return LiteralConjunction(p, n);
}

ConditionalAction try_pickup(const Vocabulary& v, const std::string& l) {
  return {"TryPickUp(Father,Present," + l + ")",
          {{"succeed", lits(v, {"At(Father," + l + ")", "At(Present," + l + ")"}, {"Has(Father,Present)"}),
            lits(v, {"Has(Father,Present)"}, {"At(Present," + l + ")"})},
           {"fail", lits(v, {"At(Father," + l + ")"}, {"At(Present," + l + ")"}), {}}}};
}

ConditionalAction single(const GroundAction& g) { return {g.name, {g}}; }

const GroundAction& by_name(const std::vector<GroundAction>& all, const std::string& name) {
  for (const auto& g : all) {
    if (g.name == name) return g;
  }
  FAIL("no ground action " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_SUITE("classical") {

TEST_CASE("grounding cardinalities and order") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"Present"}}, {"Loc", {"Home", "PO"}}};
  auto go = ground_schema(go_schema(), sorts, *v);
  REQUIRE(go.size() == 4);
  CHECK(go[0].name == "Go(Father,Home,Home)");
  CHECK(go[1].name == "Go(Father,Home,PO)");
  // Add wins over delete, so the self-move is a no-op.
  CHECK(go[0].post == lits(*v, {"At(Father,Home)"}, {}));

  auto v2 = birthday_vocab({"A", "B"}, {"X", "Y"}, {"L"});
  ObjectSorts two{{"Agent", {"A", "B"}}, {"Obj", {"X", "Y"}}, {"Loc", {"L"}}};
  CHECK(ground_schema(wrap_schema(), two, *v2).size() == 4);

  auto all = ground({wrap_schema(), go_schema(), pickup_schema()}, sorts, *v);
  REQUIRE(all.size() == 4 + 2 + 1);
  CHECK(all.front().name.rfind("Go(", 0) == 0);
  CHECK(all.back().name == "Wrap(Father,Present)");
}

TEST_CASE("grounding errors") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"Present"}}, {"Loc", {"Home", "PO"}}, {"None", {}}};
  auto bad_sort = go_schema();
  bad_sort.parameters[1].sort = "Nowhere";
  CHECK_THROWS_AS(ground_schema(bad_sort, sorts, *v), GroundingError);
  auto empty_sort = go_schema();
  empty_sort.parameters[1].sort = "None";
  CHECK_THROWS_AS(ground_schema(empty_sort, sorts, *v), GroundingError);
  auto bad_atom = go_schema();
  bad_atom.precondition.push_back({"Near", {"a"}, true});
  CHECK_THROWS_AS(ground_schema(bad_atom, sorts, *v), GroundingError);
  CHECK_THROWS_AS(ground_schema(go_schema(), sorts, *v, 3), GroundingError);
}

TEST_CASE("contradictory preconditions are dropped") {
  auto v = make_vocabulary({}, {"P(x)", "P(y)"});
  ActionSchema s{"S", {{"u", "T"}, {"w", "T"}}, {{"P", {"u"}, true}, {"P", {"w"}, false}}, {}};
  auto g = ground_schema(s, {{"T", {"x", "y"}}}, *v);
  REQUIRE(g.size() == 2);
  CHECK(g[0].name == "S(x,y)");
  CHECK(g[1].name == "S(y,x)");
}

TEST_CASE("apply_ground") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"Present"}}, {"Loc", {"Home", "PO"}}};
  auto all = ground({go_schema(), pickup_schema(), wrap_schema()}, sorts, *v);
  auto s0 = valuation(*v, {"At(Father,Home)", "At(Present,PO)"});
  auto s1 = apply_ground(s0, by_name(all, "Go(Father,Home,PO)"));
  REQUIRE(s1);
  CHECK(*s1 == valuation(*v, {"At(Father,PO)", "At(Present,PO)"}));
  CHECK_FALSE(apply_ground(s0, by_name(all, "Wrap(Father,Present)")));
  GroundAction noop{"noop", {}, {}};
  CHECK(apply_ground(s0, noop) == s0);

  Valuation s = s0;
  for (const char* n : {"Go(Father,Home,PO)", "PickUp(Father,Present,PO)", "Go(Father,PO,Home)",
                        "Wrap(Father,Present)"}) {
    auto next = apply_ground(s, by_name(all, n));
    REQUIRE(next);
    s = *next;
  }
  CHECK(s == valuation(*v, {"At(Father,Home)", "Has(Father,Present)", "Wrapped(Present)"}));
}

TEST_CASE("belief-state transitions") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO1", "PO2"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"Present"}}, {"Loc", {"Home", "PO1", "PO2"}}};
  auto all = ground({go_schema(), wrap_schema()}, sorts, *v);
  BeliefState s3({valuation(*v, {"At(Father,PO2)", "Has(Father,Present)"}),
                  valuation(*v, {"At(Father,PO2)", "At(Present,PO2)"})});
  auto s4 = apply_belief(s3, try_pickup(*v, "PO2"));
  CHECK(s4.size() == 1);
  CHECK(s4.valuations()[0] == valuation(*v, {"At(Father,PO2)", "Has(Father,Present)"}));

  CHECK(apply_belief(s3, ConditionalAction{"skip", {{"skip", {}, {}}}}) == s3);
  CHECK_THROWS_AS(apply_belief(s3, single(by_name(all, "Go(Father,Home,PO1)"))), ApplicabilityError);
}

TEST_CASE("classical search and the brute-force oracle") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"Present"}}, {"Loc", {"Home", "PO"}}};
  PropositionalTask task{v, ground({go_schema(), pickup_schema(), wrap_schema()}, sorts, *v),
                         valuation(*v, {"At(Father,Home)", "At(Present,PO)"}),
                         parse_formula("At(Father,Home) & Has(Father,Present) & Wrapped(Present)", *v)};
  auto plan = solve_classical(task, 10);
  REQUIRE(plan);
  CHECK(*plan == std::vector<std::string>{"Go(Father,Home,PO)", "PickUp(Father,Present,PO)", "Go(Father,PO,Home)",
                                          "Wrap(Father,Present)"});
  CHECK(test::classical_oracle(task, 10) == std::size_t{4});
  CHECK_FALSE(solve_classical(task, 3));

  auto trivial = task;
  trivial.goal = parse_formula("At(Father,Home)", *v);
  CHECK(solve_classical(trivial, 0) == std::vector<std::string>{});
}

TEST_CASE("two parcels need a single trip") {
  auto v = birthday_vocab({"Father"}, {"P1", "P2"}, {"Home", "PO"});
  ObjectSorts sorts{{"Agent", {"Father"}}, {"Obj", {"P1", "P2"}}, {"Loc", {"Home", "PO"}}};
  PropositionalTask task{
      v, ground({go_schema(), pickup_schema(), wrap_schema()}, sorts, *v),
      valuation(*v, {"At(Father,Home)", "At(P1,PO)", "At(P2,PO)"}),
      parse_formula("At(Father,Home) & Has(Father,P1) & Has(Father,P2) & Wrapped(P1) & Wrapped(P2)", *v)};
  auto plan = solve_classical(task, 10);
  REQUIRE(plan);
  // Go, two pickups, Go back, two wraps.
  CHECK(plan->size() == 6);
  CHECK(test::classical_oracle(task, 7) == std::size_t{6});
  // Both parcels are collected on a single visit to the post office.
  CHECK(std::count(plan->begin(), plan->end(), "Go(Father,Home,PO)") == 1);
}

TEST_CASE("classical search matches the oracle on random tasks") {
  test::Rng rng(test::kSeed + 10);
  auto v = test::small_vocab(1, 4);
  for (int k = 0; k < 500; ++k) {
    std::vector<GroundAction> actions;
    const std::size_t n = 1 + test::pick(rng, 4);
    for (std::size_t a = 0; a < n; ++a) {
      actions.push_back({"a" + std::to_string(a), test::random_literals(rng, *v, 0.3),
                         test::random_literals(rng, *v, 0.5)});
    }
    PropositionalTask task{v, actions, test::random_valuation(rng, *v), test::random_literals(rng, *v, 0.5).to_formula()};
    auto plan = solve_classical(task, 6);
    auto oracle = test::classical_oracle(task, 6);
    REQUIRE(plan.has_value() == oracle.has_value());
    if (plan) {
      REQUIRE(plan->size() == *oracle);
      Valuation s = task.initial;
      for (const auto& name : *plan) {
        auto it = std::find_if(actions.begin(), actions.end(), [&](const GroundAction& g) { return g.name == name; });
        auto next = apply_ground(s, *it);
        REQUIRE(next);
        s = *next;
      }
      EpistemicModel m(v, {{"w", s}}, {});
      REQUIRE(eval_world(m, 0, task.goal));
    }
  }
}

TEST_CASE("reachable transition system of the STRIPS task") {
  auto doc = load_task("birthday_strips.eplan");
  auto prop = as_propositional(doc.task);
  REQUIRE(prop);
  auto ts = reachable_system(*prop);
  CHECK(ts.states.size() == 6);
  CHECK(ts.edges.size() == 15);
  CHECK(ts.states.front() == prop->initial);
}

TEST_CASE("to_epistemic") {
  auto v = birthday_vocab({"Father"}, {"Present"}, {"Home", "PO1", "PO2"});
  auto obs = to_epistemic(try_pickup(*v, "PO1"), v, true);
  CHECK(obs.event_count() == 2);
  CHECK(obs.designated().size() == 2);
  CHECK(obs.edges().empty());
  auto blind = to_epistemic(try_pickup(*v, "PO1"), v, false);
  CHECK(blind.edges().size() == 2);
  GroundAction g{"g", lits(*v, {"At(Father,Home)"}, {}), lits(*v, {"At(Father,PO1)"}, {"At(Father,Home)"})};
  auto e = to_epistemic(g, v);
  CHECK(e.event_count() == 1);
  CHECK(e.name() == "g");
}

}  // TEST_SUITE
