#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "regtrace/parser.hpp"
#include "regtrace/trace_spec.hpp"

namespace regtrace {
namespace {

using testing::FormulaShape;
using testing::random_formula;
using testing::random_regex;

Regex R(const char* text) { return parse_regex(text); }
Formula F(const char* text) { return parse_formula(text); }

TraceSpec even_odd_invariant(const char* b) {
  const std::string not_b = std::string("!") + b;
  return TraceSpec{{{R("(even odd)*"), F(not_b.c_str())}, {R("(even odd)* even"), F(b)}}};
}

GroundState state_b(bool b) { return GroundState{{"b", b}}; }

class UnknownSolver final : public Solver {
 public:
  SatResult check_sat(const Formula&) override { return {SatStatus::kUnknown, std::nullopt, "no answer"}; }
  std::string name() const override { return "unknown"; }
};

TEST(TraceSpecEval, EvenOddInvariant) {
  const TraceSpec spec = even_odd_invariant("b");
  EXPECT_EQ(eval_at(spec, state_b(false)), R("(even odd)*"));
  EXPECT_EQ(eval_at(spec, state_b(true)), R("(even odd)* even"));
}

TEST(TraceSpecEval, EmptySpecIsEmptyLanguage) { EXPECT_TRUE(eval_at(TraceSpec{}, state_b(true)).is_empty()); }

TEST(TraceSpecEval, OverlappingGuardsTakeTheUnion) {
  const TraceSpec spec{{{R("a"), F("x <= 3")}, {R("b"), F("x >= 3")}}};
  EXPECT_EQ(eval_at(spec, {{"x", std::int64_t{3}}}), R("a | b"));
  EXPECT_EQ(eval_at(spec, {{"x", std::int64_t{4}}}), R("b"));
}

TEST(TraceSpecEval, PrimedGuardsReadThePostState) {
  const TraceSpec spec{{{R("a"), F("b'")}, {R("c"), F("!b'")}}};
  EXPECT_EQ(eval_at(spec, state_b(false), state_b(true)), R("a"));
}

TEST(TraceSpecComplete, EmptySpecPermitsOnlyTheEmptyWord) {
  const TraceSpec c = complete(TraceSpec{});
  ASSERT_EQ(c.options.size(), 1u);
  EXPECT_EQ(c.options[0].regex, Regex::epsilon());
  EXPECT_TRUE(c.options[0].guard.is_true());
}

TEST(TraceSpecComplete, ExhaustiveGuardAddsUnreachableDefault) {
  const TraceSpec c = complete(TraceSpec::plain(R("u")));
  ASSERT_EQ(c.options.size(), 2u);
  EXPECT_TRUE(c.options[1].guard.is_false());
}

TEST(TraceSpecComplete, EvenOddCompletionIsSemanticallyUnchanged) {
  const TraceSpec spec = even_odd_invariant("b");
  const TraceSpec c = complete(spec);
  BuiltinSolver solver;
  EXPECT_EQ(solver.check_sat(c.options.back().guard).status, SatStatus::kUnsat);
  for (bool b : {false, true}) EXPECT_EQ(eval_at(c, state_b(b)), eval_at(spec, state_b(b)));
}

TEST(TraceSpecComplete, PreservesCoveredStatesAndDefaultsToEpsilon) {
  std::mt19937_64 rng(31);
  const FormulaShape shape{{"x"}, {"p"}, -3, 3};
  const auto sigma = testing::letters(2);
  for (int i = 0; i < 300; ++i) {
    TraceSpec spec;
    for (int k = 0; k < 2; ++k) spec.options.push_back({random_regex(rng, sigma, 5), random_formula(rng, shape, 2)});
    const TraceSpec c = complete(spec);
    testing::any_state(shape, [&](const GroundState& s) {
      const Regex original = eval_at(spec, s);
      if (original.is_empty() && std::none_of(spec.options.begin(), spec.options.end(),
                                              [&](const TraceOption& o) { return evaluate(o.guard, s); })) {
        EXPECT_EQ(eval_at(c, s), Regex::epsilon());
      } else {
        EXPECT_EQ(eval_at(c, s), original);
      }
      return false;
    });
  }
}

TEST(TraceSpecFrame, EpsilonPrefixIsIdentity) {
  const TraceSpec spec = even_odd_invariant("b");
  const TraceSpec framed = frame_prefix(Regex::epsilon(), spec);
  for (std::size_t i = 0; i < spec.options.size(); ++i) EXPECT_EQ(framed.options[i].regex, spec.options[i].regex);
}

TEST(TraceSpecFrame, WhileStarPrefix) {
  const TraceSpec framed = frame_prefix(R("v*"), TraceSpec::plain(R("v")));
  ASSERT_EQ(framed.options.size(), 1u);
  EXPECT_EQ(framed.options[0].regex, R("v* v"));
  EXPECT_TRUE(framed.options[0].guard.is_true());
}

TEST(TraceSpecFrame, CommutesWithEvaluation) {
  const TraceSpec spec{{{R("b"), F("p")}, {R("c"), F("!p")}}};
  const TraceSpec framed = frame_prefix(R("a"), spec);
  for (bool p : {false, true}) {
    const GroundState s{{"p", p}};
    EXPECT_TRUE(equivalent(eval_at(framed, s), mk_concat(R("a"), eval_at(spec, s))));
  }
}

TEST(TraceSpecFrame, CommutesWithEvaluationOnGeneratedSpecs) {
  std::mt19937_64 rng(37);
  const FormulaShape shape{{"x"}, {"p"}, -2, 2};
  const auto sigma = testing::letters(3);
  for (int i = 0; i < 200; ++i) {
    TraceSpec spec;
    for (int k = 0; k < 3; ++k) spec.options.push_back({random_regex(rng, sigma, 5), random_formula(rng, shape, 2)});
    const Regex w = random_regex(rng, sigma, 4);
    const TraceSpec framed = frame_prefix(w, spec);
    testing::any_state(shape, [&](const GroundState& s) {
      EXPECT_TRUE(equivalent(eval_at(framed, s), mk_concat(w, eval_at(spec, s))));
      return false;
    });
  }
}

TEST(TraceSpecInclusion, EvenOddLoopStep) {
  // One iteration of the even/odd loop: from b the body emits odd, from !b
  // it emits even, and b' = !b.
  BuiltinSolver solver;
  const TraceSpec before = even_odd_invariant("b");
  const TraceSpec after = complete(even_odd_invariant("b'"));
  for (const auto& [guard, event] : {std::pair{"!b", "even"}, std::pair{"b", "odd"}}) {
    const Formula context = make_and(F("b' <==> !b"), F(guard));
    const auto cases = inclusion_obligations(context, before, R(event), after, solver);
    ASSERT_EQ(cases.size(), 1u);
    EXPECT_TRUE(cases[0].holds) << cases[0].lhs.to_string() << " <= " << cases[0].rhs.to_string();
  }
  const auto from_not_b =
      inclusion_obligations(make_and(F("b' <==> !b"), F("!b")), before, R("even"), after, solver);
  EXPECT_EQ(from_not_b[0].lhs, R("(even odd)* even"));
  EXPECT_EQ(from_not_b[0].rhs, R("(even odd)* even"));
  const auto from_b = inclusion_obligations(make_and(F("b' <==> !b"), F("b")), before, R("odd"), after, solver);
  EXPECT_EQ(from_b[0].lhs, R("(even odd)* even odd"));
  EXPECT_EQ(from_b[0].rhs, R("(even odd)*"));
}

TEST(TraceSpecInclusion, FalseContextYieldsNoCases) {
  BuiltinSolver solver;
  EXPECT_TRUE(inclusion_obligations(make_false(), even_odd_invariant("b"), Regex::epsilon(),
                                    complete(TraceSpec::plain(R("a"))), solver)
                  .empty());
}

TEST(TraceSpecInclusion, MatcherAtSign) {
  BuiltinSolver solver;
  TraceSpec matcher;
  const char* regexes[] = {"()",
                           "letter+",
                           "letter+ at",
                           "letter+ at letter+",
                           "letter+ at letter+ dot",
                           "letter+ at letter+ dot letter+",
                           "letter+ at letter+ dot letter+ eof"};
  for (int k = 0; k <= 6; ++k) {
    matcher.options.push_back({R(regexes[k]), F(("state' == " + std::to_string(k)).c_str())});
  }
  const TraceSpec left{{{R("letter+"), F("state == 1")}}};
  const auto cases =
      inclusion_obligations(F("state == 1 && state' == 2"), left, R("at"), complete(matcher), solver);
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_TRUE(cases[0].holds);
  EXPECT_EQ(cases[0].lhs, R("letter+ at"));
  EXPECT_EQ(cases[0].rhs, R("letter+ at"));
}

TEST(TraceSpecInclusion, FailureCarriesWitness) {
  BuiltinSolver solver;
  const auto cases = inclusion_obligations(make_true(), TraceSpec::plain(R("a")), R("b"),
                                           complete(TraceSpec::plain(R("a c"))), solver);
  ASSERT_EQ(cases.size(), 1u);
  EXPECT_FALSE(cases[0].holds);
  ASSERT_TRUE(cases[0].witness);
  EXPECT_EQ(trace_to_string(*cases[0].witness), "<a, b>");
}

TEST(TraceSpecInclusion, UnknownGuardFails) {
  UnknownSolver solver;
  const auto cases = inclusion_obligations(make_true(), TraceSpec::plain(R("a")), Regex::epsilon(),
                                           complete(TraceSpec::plain(R("a"))), solver);
  ASSERT_FALSE(cases.empty());
  for (const auto& c : cases) {
    EXPECT_FALSE(c.holds);
    EXPECT_NE(c.diagnostic.find("cannot decide guard"), std::string::npos);
  }
}

TEST(TraceSpecInclusion, SplittingIsSoundOnSmallStateSpaces) {
  std::mt19937_64 rng(41);
  BuiltinSolver solver;
  const FormulaShape pre{{"x"}, {"p"}, -2, 2};
  const FormulaShape both{{"x", "x'"}, {"p", "p'"}, -2, 2};
  const auto sigma = testing::letters(2);
  int held = 0;
  for (int i = 0; i < 300; ++i) {
    TraceSpec left;
    TraceSpec right;
    for (int k = 0; k < 2; ++k) {
      left.options.push_back({random_regex(rng, sigma, 5), random_formula(rng, pre, 1)});
      right.options.push_back({random_regex(rng, sigma, 5), prime(random_formula(rng, pre, 1))});
    }
    const Formula context = make_and(random_formula(rng, pre, 1), prime(random_formula(rng, pre, 1)));
    const Regex emitted = random_regex(rng, sigma, 3);
    const TraceSpec completed = complete(right);
    const auto cases = inclusion_obligations(context, left, emitted, completed, solver);
    if (!std::all_of(cases.begin(), cases.end(), [](const InclusionCase& c) { return c.holds; })) continue;
    ++held;
    testing::any_state(both, [&](const GroundState& joint) {
      GroundState s{{"x", joint.at("x")}, {"p", joint.at("p")}};
      GroundState t{{"x", joint.at("x'")}, {"p", joint.at("p'")}};
      if (!evaluate(context, s, t)) return false;
      const Regex lhs = mk_concat(eval_at(left, s), emitted);
      EXPECT_TRUE(included(lhs, eval_at(completed, s, t)).holds) << context.to_string();
      return false;
    });
  }
  EXPECT_GT(held, 20);
}

}  // namespace
}  // namespace regtrace
