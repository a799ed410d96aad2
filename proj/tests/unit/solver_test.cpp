#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "regtrace/parser.hpp"
#include "regtrace/solver.hpp"

namespace regtrace {
namespace {

Formula F(const char* text) { return parse_formula(text); }

TEST(BuiltinSolverTest, Examples) {
  BuiltinSolver s;
  EXPECT_EQ(s.check_sat(F("state == 0 && state == 1")).status, SatStatus::kUnsat);
  EXPECT_EQ(s.entails(F("(b' <==> !b) && !b"), F("b'")).validity, Validity::kValid);
  EXPECT_EQ(s.check_sat(F("97 <= c && c <= 122 && c == -1")).status, SatStatus::kUnsat);
}

TEST(BuiltinSolverTest, ModelSatisfiesFormula) {
  BuiltinSolver s;
  const Formula f = F("x + 2 * y == 7 && x >= 2 && y >= 1 && (p || x > 4)");
  const SatResult r = s.check_sat(f);
  ASSERT_EQ(r.status, SatStatus::kSat);
  ASSERT_TRUE(r.model);
  EXPECT_TRUE(evaluate(f, *r.model));
}

TEST(BuiltinSolverTest, IntegerInfeasibleButRationalFeasible) {
  BuiltinSolver s;
  EXPECT_EQ(s.check_sat(F("2 * x == 1")).status, SatStatus::kUnsat);
  EXPECT_EQ(s.check_sat(F("0 < 2 * x && 2 * x < 2")).status, SatStatus::kUnsat);
  EXPECT_EQ(s.check_sat(F("3 * x + 3 * y == 4")).status, SatStatus::kUnsat);
}

TEST(BuiltinSolverTest, UnboundedVariables) {
  BuiltinSolver s;
  EXPECT_EQ(s.check_sat(F("x > y && y > z && z > x")).status, SatStatus::kUnsat);
  EXPECT_EQ(s.check_sat(F("x > y && y > z && z > 1000000")).status, SatStatus::kSat);
}

TEST(BuiltinSolverTest, CounterexampleRefutesEntailment) {
  BuiltinSolver s;
  const EntailResult r = s.entails(F("0 <= x && x <= 6"), F("x != 6"));
  ASSERT_EQ(r.validity, Validity::kInvalid);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(std::get<std::int64_t>(r.counterexample->at(Var{"x"})), 6);
}

TEST(BuiltinSolverTest, AgreesWithEnumerationOnBoundedFragment) {
  std::mt19937_64 rng(59);
  BuiltinSolver s;
  const testing::FormulaShape shapes[] = {
      {{"x", "y"}, {"p", "q"}},
      {{"x", "y", "z"}, {"p"}},
      {{"x", "y", "z", "w"}, {}},
  };
  for (int i = 0; i < 600; ++i) {
    const auto& shape = shapes[i % 3];
    const Formula f = make_and(testing::random_formula(rng, shape, 3), testing::domain_bounds(shape));
    const SatResult r = s.check_sat(f);
    ASSERT_NE(r.status, SatStatus::kUnknown) << f.to_string();
    EXPECT_EQ(r.status == SatStatus::kSat, testing::brute_sat(f, shape)) << f.to_string();
  }
}

TEST(BuiltinSolverTest, EntailmentIsReflexiveAndTransitive) {
  std::mt19937_64 rng(61);
  BuiltinSolver s;
  const testing::FormulaShape shape{{"x", "y"}, {"p"}};
  for (int i = 0; i < 200; ++i) {
    const Formula a = testing::random_formula(rng, shape, 2);
    const Formula b = make_or(a, testing::random_formula(rng, shape, 2));
    const Formula c = make_or(b, testing::random_formula(rng, shape, 2));
    EXPECT_EQ(s.entails(a, a).validity, Validity::kValid);
    ASSERT_EQ(s.entails(a, b).validity, Validity::kValid);
    ASSERT_EQ(s.entails(b, c).validity, Validity::kValid);
    EXPECT_EQ(s.entails(a, c).validity, Validity::kValid);
  }
}

TEST(BuiltinSolverTest, ExhaustedBudgetIsUnknown) {
  BuiltinSolverOptions opts;
  opts.node_budget = 1;
  BuiltinSolver s(opts);
  const Formula f = F("(p || q) && (!p || r) && (!q || !r) && x + y == 3 && x - y == 1");
  const SatResult r = s.check_sat(f);
  if (r.status != SatStatus::kUnknown) {
    BuiltinSolver full;
    EXPECT_EQ(r.status, full.check_sat(f).status);
  }
}

TEST(SmtLibTest, ScriptDeclaresEveryVariable) {
  const std::string script = to_smtlib(F("p && x' + 2 * y < 3"));
  EXPECT_NE(script.find("(declare-const |p| Bool)"), std::string::npos);
  EXPECT_NE(script.find(" Int)"), std::string::npos);
  EXPECT_NE(script.find("(check-sat)"), std::string::npos);
  EXPECT_NE(script.find("(assert "), std::string::npos);
}

TEST(SmtLibTest, ProcessAnswersAreParsed) {
  SmtLibProcessSolver sat("sh -c 'cat > /dev/null; echo sat'");
  SmtLibProcessSolver unsat("sh -c 'cat > /dev/null; echo unsat'");
  SmtLibProcessSolver unknown("sh -c 'cat > /dev/null; echo unknown'");
  const Formula f = F("x < 1");
  EXPECT_EQ(sat.check_sat(f).status, SatStatus::kSat);
  EXPECT_EQ(unsat.check_sat(f).status, SatStatus::kUnsat);
  EXPECT_EQ(unknown.check_sat(f).status, SatStatus::kUnknown);
}

TEST(SmtLibTest, CrashesAndGarbageAreUnknown) {
  SmtLibProcessSolver crash("sh -c 'cat > /dev/null; exit 3'");
  SmtLibProcessSolver garbage("sh -c 'cat > /dev/null; echo (error oops)'");
  SmtLibProcessSolver missing("/nonexistent/solver-binary");
  const Formula f = F("x < 1");
  for (Solver* s : std::initializer_list<Solver*>{&crash, &garbage, &missing}) {
    const SatResult r = s->check_sat(f);
    EXPECT_EQ(r.status, SatStatus::kUnknown) << s->name();
    EXPECT_FALSE(r.diagnostic.empty()) << s->name();
  }
}

TEST(CachingSolverTest, RepeatsInnerAnswers) {
  CachingSolver s(std::make_unique<BuiltinSolver>());
  const Formula f = F("x < 1 && x > -1");
  const SatResult a = s.check_sat(f);
  const SatResult b = s.check_sat(f);
  EXPECT_EQ(a.status, SatStatus::kSat);
  EXPECT_EQ(b.status, a.status);
  EXPECT_EQ(s.name(), "internal");
}

TEST(MakeSolverTest, Selectors) {
  EXPECT_EQ(make_solver("internal")->name(), "internal");
  EXPECT_EQ(make_solver("z3 -in")->name(), "z3 -in");
}

}  // namespace
}  // namespace regtrace
