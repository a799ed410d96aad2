#include <gtest/gtest.h>

#include <random>

#include "corpus.hpp"
#include "regtrace/interpreter.hpp"
#include "regtrace/parser.hpp"

namespace regtrace {
namespace {

using testing::load_corpus;

Trace T(std::initializer_list<const char*> names) {
  Trace t;
  for (const char* n : names) t.emplace_back(n);
  return t;
}

TEST(InterpreterRun, EmitStops) {
  const Program p = load_program("events a;\nvoid f() _(trace a) { _(emit a); }\n");
  const RunResult r = run(p, "f", {}, 1, 10);
  EXPECT_EQ(r.outcome, Outcome::kStopped);
  EXPECT_EQ(r.trace, T({"a"}));
}

TEST(InterpreterRun, FailedSpecGuardAborts) {
  const Program p = load_program("events a;\nint x;\nvoid f() _(modifies x) { _(spec modifies x requires false); }\n");
  const RunResult r = run(p, "f", {{"x", std::int64_t{0}}}, 1, 10);
  EXPECT_EQ(r.outcome, Outcome::kAborted);
}

TEST(InterpreterRun, FailedAssertionAborts) {
  const Program p = load_program("events a;\nvoid f(int x) { _(assert x > 0); }\n");
  EXPECT_EQ(run(p, "f", {{"x", std::int64_t{0}}}, 1, 10).outcome, Outcome::kAborted);
  EXPECT_EQ(run(p, "f", {{"x", std::int64_t{1}}}, 1, 10).outcome, Outcome::kStopped);
}

TEST(InterpreterRun, EvenOddTwoIterationTrace) {
  // Find a seed whose nondeterminism takes exactly two iterations.
  const Program p = load_corpus("even_odd");
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    const RunResult r = run(p, "even_odd", {}, seed, 100);
    ASSERT_EQ(r.outcome, Outcome::kStopped);
    if (r.trace.size() == 2) {
      found = true;
      EXPECT_EQ(r.trace, T({"even", "odd"}));
      EXPECT_TRUE(member(r.trace, parse_regex("(even odd)*")));
    }
  }
  EXPECT_TRUE(found);
}

TEST(InterpreterRun, Deterministic) {
  const Program p = load_corpus("casino");
  const GroundState s0{{"state", std::int64_t{0}}, {"pot", std::int64_t{0}}, {"bet", std::int64_t{0}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RunResult a = run(p, "main", s0, seed, 500);
    const RunResult b = run(p, "main", s0, seed, 500);
    EXPECT_EQ(a.outcome, b.outcome);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.final_state, b.final_state);
  }
}

TEST(InterpreterRun, StraightLineSemantics) {
  std::mt19937_64 rng(73);
  for (int i = 0; i < 200; ++i) {
    std::string body;
    Trace expected;
    std::int64_t x = 0;
    std::int64_t y = 1;
    for (int k = 0; k < 8; ++k) {
      const int op = std::uniform_int_distribution<int>(0, 3)(rng);
      const std::int64_t c = std::uniform_int_distribution<std::int64_t>(-5, 5)(rng);
      if (op == 0) {
        body += "_(emit a); ";
        expected.emplace_back("a");
      } else if (op == 1) {
        body += "_(emit b); ";
        expected.emplace_back("b");
      } else if (op == 2) {
        body += "x = x + " + std::to_string(c) + " * y; ";
        x = x + c * y;
      } else {
        body += "y = x - y; ";
        y = x - y;
      }
    }
    const Program p = load_program("events a, b;\nint x;\nint y;\nvoid f() _(modifies x, y) { " + body + "}\n");
    const RunResult r = run(p, "f", {{"x", std::int64_t{0}}, {"y", std::int64_t{1}}}, 5, 10);
    ASSERT_EQ(r.outcome, Outcome::kStopped);
    EXPECT_EQ(r.trace, expected) << body;
    EXPECT_EQ(std::get<std::int64_t>(r.final_state.at("x")), x) << body;
    EXPECT_EQ(std::get<std::int64_t>(r.final_state.at("y")), y) << body;
  }
}

TEST(InterpreterRun, EmitMatchesEquivalentSpecStatement) {
  const Program a = load_program("events a, b;\nvoid f() { bool c = nondet(); if (c) _(emit a); else _(emit b); }\n");
  const Program b = load_program(
      "events a, b;\nvoid f() { bool c = nondet(); if (c) _(spec trace a); else _(spec trace b); }\n");
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(run(a, "f", {}, seed, 10).trace, run(b, "f", {}, seed, 10).trace);
}

TEST(InterpreterRun, FuelBoundsLoops) {
  const Program p = load_program("events a;\nvoid f() { while (true) { } }\n");
  const RunResult r = run(p, "f", {}, 1, 50);
  EXPECT_EQ(r.outcome, Outcome::kFuelExhausted);
}

TEST(InterpreterRun, SpecStatementSatisfiesItsRelation) {
  const Program p = load_program(
      "events a;\nint x;\nvoid f() _(modifies x) { _(spec modifies x ensures 3 <= x' && x' <= 5 && x' != 4); }\n");
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const RunResult r = run(p, "f", {{"x", std::int64_t{0}}}, seed, 10);
    ASSERT_EQ(r.outcome, Outcome::kStopped);
    const auto x = std::get<std::int64_t>(r.final_state.at("x"));
    EXPECT_TRUE(x == 3 || x == 5) << x;
  }
}

TEST(InterpreterRun, UnsatisfiableRelationRunsOutOfFuel) {
  const Program p = load_program("events a;\nint x;\nvoid f() _(modifies x) { _(spec modifies x ensures x' > 1000); }\n");
  EXPECT_EQ(run(p, "f", {{"x", std::int64_t{0}}}, 1, 10).outcome, Outcome::kFuelExhausted);
}

TEST(InterpreterRun, BodilessCallFollowsContract) {
  const Program p = load_corpus("matcher");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RunResult r = run(p, "check", {{"c", std::int64_t{64}}}, seed, 10);
    EXPECT_EQ(r.trace, T({"at"}));
  }
}

TEST(InterpreterRun, DivergingCallsAreReplayed) {
  const Program p = load_corpus("matcher");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RunResult r = run(p, "lex", {}, seed, 1000);
    ASSERT_EQ(r.outcome, Outcome::kStopped) << r.note;
    EXPECT_TRUE(member(r.trace, parse_regex("letter+ at letter+ dot letter+ eof"))) << trace_to_string(r.trace);
  }
}

TEST(InterpreterRun, MissingBindingIsRejected) {
  const Program p = load_program("events a;\nvoid f(int x) { }\n");
  EXPECT_THROW(run(p, "f", {}, 1, 10), std::invalid_argument);
  EXPECT_THROW(run(p, "g", {}, 1, 10), std::invalid_argument);
}

TEST(Oracle, CorrectProgramsHaveNoViolations) {
  OracleOptions opts;
  opts.runs = 100;
  for (const char* name : {"even_odd", "even_odd_star", "casino", "casino_summary"}) {
    const Program p = load_corpus(name);
    const OracleReport r = check_triple_random(p, p.entry, opts);
    EXPECT_EQ(r.runs, 100u);
    EXPECT_TRUE(r.violations.empty()) << name;
    EXPECT_EQ(r.stopped + r.aborted + r.fuel_exhausted, r.runs);
  }
}

TEST(Oracle, SwappedEmitsAreCaught) {
  const Program p = load_corpus("mutants/even_odd_swapped");
  OracleOptions opts;
  opts.runs = 100;
  const OracleReport r = check_triple_random(p, p.entry, opts);
  ASSERT_FALSE(r.violations.empty());
  for (const auto& v : r.violations) {
    ASSERT_FALSE(v.trace.empty());
    EXPECT_EQ(v.trace.front(), Event("odd"));
  }
}

TEST(Oracle, EmittingWithoutTraceClauseIsAViolation) {
  const Program p = load_program("events a;\nvoid f() { _(emit a); }\n");
  OracleOptions opts;
  opts.runs = 5;
  EXPECT_EQ(check_triple_random(p, "f", opts).violations.size(), 5u);
}

TEST(Oracle, AbortedRunsAreViolations) {
  const Program p = load_program("events a;\nvoid f(int x) { _(assert x != 3); }\n");
  OracleOptions opts;
  opts.runs = 300;
  const OracleReport r = check_triple_random(p, "f", opts);
  EXPECT_GT(r.aborted, 0u);
  EXPECT_EQ(r.violations.size(), r.aborted);
}

TEST(Oracle, PostconditionViolation) {
  const Program p = load_program("events a;\nint f(int x) _(ensures result > x) { return x; }\n");
  OracleOptions opts;
  opts.runs = 10;
  const OracleReport r = check_triple_random(p, "f", opts);
  ASSERT_EQ(r.violations.size(), 10u);
  EXPECT_NE(r.violations[0].reason.find("postcondition"), std::string::npos);
}

TEST(Oracle, PreStateSatisfiesPrecondition) {
  const Program p = load_program("events a;\nvoid f(int x) _(requires x == 17 || x == -40) { _(assert x == 17 || x == -40); }\n");
  OracleOptions opts;
  opts.runs = 50;
  EXPECT_TRUE(check_triple_random(p, "f", opts).violations.empty());
}

TEST(Oracle, UnsatisfiablePrecondition) {
  const Program p = load_program("events a;\nvoid f(int x) _(requires x > 1000) { }\n");
  OracleOptions opts;
  opts.runs = 1;
  opts.max_rejections = 100;
  EXPECT_THROW(check_triple_random(p, "f", opts), NoSatisfyingState);
}

TEST(Oracle, SeedsAreReproducible) {
  const Program p = load_corpus("mutants/casino_remove_after_bet");
  OracleOptions opts;
  opts.runs = 200;
  const OracleReport a = check_triple_random(p, p.entry, opts);
  const OracleReport b = check_triple_random(p, p.entry, opts);
  ASSERT_EQ(a.violations.size(), b.violations.size());
  for (std::size_t i = 0; i < a.violations.size(); ++i) {
    EXPECT_EQ(a.violations[i].seed, b.violations[i].seed);
    EXPECT_EQ(a.violations[i].trace, b.violations[i].trace);
  }
}

TEST(SampleWord, DrawsMembers) {
  std::mt19937_64 rng(79);
  const Regex u = parse_regex("init ((a | b)* c d)* (a | b)*");
  for (int i = 0; i < 200; ++i) EXPECT_TRUE(member(sample_word(u, rng), u));
}

}  // namespace
}  // namespace regtrace
