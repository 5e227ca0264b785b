#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "specdrive/logic.hpp"
#include "testutil.hpp"

using namespace specdrive;
using testutil::random_formula;
using testutil::random_trace;

namespace {

PropSet demo_props() {
  return PropSet::make({"pedestrian", "a", "b", "c", "p", "q"}, {"stop", "act"});
}

FiniteTrace trace_of(std::vector<NameSet> observations, std::vector<NameSet> actions = {}) {
  FiniteTrace t;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    TraceStep s;
    s.observations = observations[i];
    if (i < actions.size()) s.actions = actions[i];
    t.steps.push_back(std::move(s));
  }
  return t;
}

}  // namespace

TEST_CASE("prop set validation") {
  CHECK(PropSet::valid_name("green_traffic_light"));
  CHECK_FALSE(PropSet::valid_name("Green"));
  CHECK_FALSE(PropSet::valid_name("2fast"));
  CHECK_FALSE(PropSet::valid_name(""));
  CHECK_THROWS_AS(PropSet::make({"a"}, {"a"}), ValidationError);
  CHECK_THROWS_AS(PropSet::make({"a", "a"}, {}), ValidationError);
}

TEST_CASE("parse: rule shapes") {
  const PropSet props = demo_props();
  FormulaPtr f = parse_ltl("G (pedestrian -> F stop)", props);
  FormulaPtr expected = Formula::always(
      Formula::implies(Formula::atom("pedestrian"), Formula::eventually(Formula::atom("stop"))));
  CHECK(structurally_equal(f, expected));

  CHECK(parse_ltl("true", props)->op == Op::True);
  CHECK(parse_ltl("false", props)->op == Op::False);
}

TEST_CASE("parse: precedence and associativity") {
  const PropSet props = demo_props();
  // unary > U > & > | > ->, with -> and U right-associative
  FormulaPtr f = parse_ltl("G (a U b -> X c)", props);
  FormulaPtr expected = Formula::always(Formula::implies(
      Formula::until(Formula::atom("a"), Formula::atom("b")), Formula::next(Formula::atom("c"))));
  CHECK(structurally_equal(f, expected));

  CHECK(structurally_equal(parse_ltl("!a U b", props),
                           Formula::until(Formula::not_(Formula::atom("a")), Formula::atom("b"))));
  CHECK(structurally_equal(
      parse_ltl("a U b U c", props),
      Formula::until(Formula::atom("a"), Formula::until(Formula::atom("b"), Formula::atom("c")))));
  CHECK(structurally_equal(
      parse_ltl("a -> b -> c", props),
      Formula::implies(Formula::atom("a"), Formula::implies(Formula::atom("b"), Formula::atom("c")))));
  CHECK(structurally_equal(
      parse_ltl("a & b | c", props),
      Formula::or_(Formula::and_(Formula::atom("a"), Formula::atom("b")), Formula::atom("c"))));
  // parentheses override
  CHECK(structurally_equal(
      parse_ltl("a & (b | c)", props),
      Formula::and_(Formula::atom("a"), Formula::or_(Formula::atom("b"), Formula::atom("c")))));
}

TEST_CASE("parse: errors carry positions and names") {
  const PropSet props = demo_props();
  CHECK_THROWS_AS(parse_ltl("", props), SyntaxError);
  CHECK_THROWS_AS(parse_ltl("a &", props), SyntaxError);
  CHECK_THROWS_AS(parse_ltl("(a", props), SyntaxError);
  CHECK_THROWS_AS(parse_ltl("a b", props), SyntaxError);
  CHECK_THROWS_AS(parse_ltl("G Green", props), SyntaxError);

  try {
    parse_ltl("a & ) b", props);
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.position == 4);
    CHECK_FALSE(e.expected.empty());
  }

  try {
    parse_ltl("a & zebra", props);
    FAIL("expected UnknownPropositionError");
  } catch (const UnknownPropositionError& e) {
    CHECK(e.name == "zebra");
  }
}

TEST_CASE("finite-trace evaluation") {
  const PropSet props = demo_props();
  const FormulaPtr gp = parse_ltl("G p", props);
  CHECK(eval_finite(gp, trace_of({{"p"}, {"p"}, {"p"}}), 0));
  CHECK_FALSE(eval_finite(gp, trace_of({{"p"}, {}, {"p"}}), 0));

  // strong next: no successor at the last step
  const FormulaPtr xp = parse_ltl("X p", props);
  CHECK_FALSE(eval_finite(xp, trace_of({{"p"}}), 0));
  CHECK(eval_finite(xp, trace_of({{}, {"p"}}), 0));

  const FormulaPtr rule = parse_ltl("G (pedestrian -> F stop)", props);
  CHECK(eval_finite(rule, trace_of({{"pedestrian"}, {}, {}}, {{}, {}, {"stop"}}), 0));
  CHECK_FALSE(eval_finite(rule, trace_of({{"pedestrian"}, {}, {}}), 0));

  // actions count as atoms
  CHECK(eval_finite(parse_ltl("F act", props), trace_of({{}, {}}, {{}, {"act"}}), 0));

  // until needs the right-hand side to arrive
  const FormulaPtr au = parse_ltl("a U b", props);
  CHECK(eval_finite(au, trace_of({{"a"}, {"a"}, {"b"}}), 0));
  CHECK_FALSE(eval_finite(au, trace_of({{"a"}, {"a"}, {"a"}}), 0));
  CHECK_FALSE(eval_finite(au, trace_of({{"a"}, {}, {"b"}}, {}), 0));

  CHECK_THROWS_AS(eval_finite(gp, trace_of({{"p"}}), 5), ValidationError);
}

TEST_CASE("desugar definitions") {
  const PropSet props = demo_props();
  CHECK(structurally_equal(desugar(parse_ltl("F p", props)),
                           Formula::until(Formula::tt(), Formula::atom("p"))));
  CHECK(structurally_equal(
      desugar(parse_ltl("G p", props)),
      Formula::not_(Formula::until(Formula::tt(), Formula::not_(Formula::atom("p"))))));
  CHECK(structurally_equal(desugar(parse_ltl("p -> q", props)),
                           Formula::or_(Formula::not_(Formula::atom("p")), Formula::atom("q"))));

  // desugared output stays within the core operator set
  Rng rng(2024);
  const std::vector<std::string> atoms = {"a", "b", "p"};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = desugar(random_formula(rng, 4, atoms));
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
      if (!g) return;
      const bool core = g->op == Op::Atom || g->op == Op::True || g->op == Op::Not ||
                        g->op == Op::Or || g->op == Op::Next || g->op == Op::Until;
      CHECK(core);
      walk(g->lhs);
      walk(g->rhs);
    };
    walk(f);
  }
}

TEST_CASE("printer round-trip") {
  const PropSet props = demo_props();
  Rng rng(7);
  const std::vector<std::string> atoms = {"a", "b", "c", "p", "q"};
  for (int i = 0; i < 1200; ++i) {
    FormulaPtr f = random_formula(rng, 4, atoms);
    FormulaPtr reparsed = parse_ltl(print_ltl(f), props);
    CHECK(structurally_equal(reparsed, f));
    CHECK(structurally_equal(desugar(reparsed), desugar(f)));
    // full parenthesization parses back to the same tree too
    CHECK(structurally_equal(parse_ltl(print_ltl(f, true), props), f));
  }
}

TEST_CASE("desugaring preserves finite-trace evaluation") {
  Rng rng(99);
  const std::vector<std::string> obs = {"a", "b", "c"};
  const std::vector<std::string> acts = {"act"};
  const std::vector<std::string> atoms = {"a", "b", "c", "act"};
  for (int i = 0; i < 400; ++i) {
    FormulaPtr f = random_formula(rng, 4, atoms);
    FiniteTrace t = random_trace(rng, obs, acts, 8);
    for (std::size_t pos = 0; pos < t.size(); ++pos)
      CHECK(eval_finite(f, t, pos) == eval_finite(desugar(f), t, pos));
  }
}

TEST_CASE("finite-trace identities") {
  Rng rng(1234);
  const std::vector<std::string> obs = {"a", "b", "c", "d"};
  const std::vector<std::string> atoms = obs;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = random_formula(rng, 3, atoms);
    FiniteTrace t = random_trace(rng, obs, {}, 8);
    const std::size_t last = t.size() - 1;
    // weak-next dual: !X phi is true at the final step
    CHECK(eval_finite(Formula::not_(Formula::next(f)), t, last));
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
      CHECK(eval_finite(Formula::always(f), t, pos) ==
            eval_finite(Formula::not_(Formula::eventually(Formula::not_(f))), t, pos));
      CHECK(eval_finite(Formula::eventually(Formula::eventually(f)), t, pos) ==
            eval_finite(Formula::eventually(f), t, pos));
    }
  }
}

TEST_CASE("lasso evaluation") {
  const PropSet props = demo_props();
  const FormulaPtr gp = parse_ltl("G p", props);
  const FormulaPtr fq = parse_ltl("F q", props);
  const FormulaPtr gfq = parse_ltl("G F q", props);

  CHECK(eval_lasso(gp, {{"p"}}, 0));
  CHECK_FALSE(eval_lasso(gp, {{"p"}, {}}, 0));
  CHECK_FALSE(eval_lasso(fq, {{"p"}}, 0));
  CHECK(eval_lasso(fq, {{}, {"q"}, {}}, 2));       // q in the stem
  CHECK(eval_lasso(gfq, {{}, {"q"}}, 1));          // q repeats forever
  CHECK_FALSE(eval_lasso(gfq, {{"q"}, {}}, 1));    // q only in the stem
  // X across the loop-back edge
  CHECK(eval_lasso(parse_ltl("G (q -> X p)", props), {{"q"}, {"p", "q"}}, 1));
  CHECK_THROWS_AS(eval_lasso(gp, {}, 0), ValidationError);
}

TEST_CASE("lasso evaluation agrees with long finite prefixes on safety shapes") {
  // for G(boolean), the lasso verdict matches evaluation of a deep unrolling
  Rng rng(55);
  const std::vector<std::string> atoms = {"a", "b"};
  for (int i = 0; i < 200; ++i) {
    FormulaPtr inner = random_formula(rng, 2, atoms, true);
    FormulaPtr f = Formula::always(inner);
    const std::size_t len = 1 + rng.below(5);
    std::vector<Letter> word;
    for (std::size_t k = 0; k < len; ++k) word.push_back(testutil::random_letter(rng, atoms));
    const std::size_t loop = rng.below(len);
    FiniteTrace unrolled;
    for (std::size_t k = 0; k < len; ++k)
      unrolled.steps.push_back(TraceStep{word[k], {}});
    for (int rep = 0; rep < 4; ++rep)
      for (std::size_t k = loop; k < len; ++k) unrolled.steps.push_back(TraceStep{word[k], {}});
    CHECK(eval_lasso(f, word, loop) == eval_finite(f, unrolled, 0));
  }
}
