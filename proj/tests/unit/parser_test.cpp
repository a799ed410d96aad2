#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "corpus.hpp"
#include "regtrace/parser.hpp"

namespace regtrace {
namespace {

using testing::load_corpus;

std::vector<Diagnostic> diagnostics_of(const std::string& source) {
  try {
    load_program(source);
  } catch (const ProgramError& e) {
    return e.diagnostics();
  }
  return {};
}

bool has_diagnostic(const std::string& source, DiagnosticKind kind) {
  for (const auto& d : diagnostics_of(source)) {
    if (d.kind == kind) return true;
  }
  return false;
}

std::vector<std::string> corpus_names() {
  std::vector<std::string> out;
  const std::filesystem::path root(REGTRACE_CORPUS_DIR);
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
    if (entry.path().extension() != ".trc") continue;
    out.push_back(std::filesystem::relative(entry.path(), root).replace_extension().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(ParserTest, EvenOddLoopHasTwoTraceOptions) {
  const Program p = load_corpus("even_odd");
  const Procedure* proc = p.find_procedure("even_odd");
  ASSERT_TRUE(proc && proc->body);
  const Command* loop = nullptr;
  for (const auto& s : proc->body->body) {
    if (s->kind == Command::Kind::kWhile) loop = s.get();
  }
  ASSERT_TRUE(loop);
  ASSERT_EQ(loop->trace.clauses.size(), 2u);
  EXPECT_FALSE(loop->trace.local);
  EXPECT_EQ(loop->trace.clauses[0].regex, parse_regex("(even odd)*"));
  EXPECT_EQ(to_string(*loop->trace.clauses[0].guard), "!b");
  EXPECT_EQ(loop->trace.clauses[1].regex, parse_regex("(even odd)* even"));
  EXPECT_EQ(to_string(*loop->trace.clauses[1].guard), "b");
}

TEST(ParserTest, GuardedTraceClause) {
  const Program p = load_program(
      "events letter, at;\n"
      "void f(int state)\n"
      "  _(trace letter+ at if state == 2)\n"
      "{ }\n");
  const auto& clauses = p.find_procedure("f")->trace.clauses;
  ASSERT_EQ(clauses.size(), 1u);
  EXPECT_EQ(clauses[0].regex, mk_concat(parse_regex("letter"), parse_regex("letter* at")));
  EXPECT_EQ(to_string(*clauses[0].guard), "state == 2");
}

TEST(ParserTest, ProcedureWithoutTraceClause) {
  const Program p = load_program("events a;\nvoid f() { }\n");
  EXPECT_TRUE(p.find_procedure("f")->trace.clauses.empty());
  EXPECT_EQ(p.entry, "f");
}

TEST(ParserTest, NondetBecomesHavoc) {
  const Program p = load_program("events a;\nvoid f() { bool nd = nondet(); }\n");
  const auto& s = p.find_procedure("f")->body->body.front();
  EXPECT_EQ(s->kind, Command::Kind::kHavoc);
  EXPECT_TRUE(s->via_nondet);
  EXPECT_EQ(s->target, "nd");
}

TEST(ParserTest, AbortIsABodilessProcedureWithFalsePostcondition) {
  const Program p = load_program("events a;\nvoid f() { abort(); }\n");
  const Procedure* abort = p.find_procedure("abort");
  ASSERT_TRUE(abort);
  EXPECT_FALSE(abort->has_body());
  EXPECT_TRUE(abort->builtin);
  ASSERT_EQ(abort->ensures_clauses.size(), 1u);
  EXPECT_EQ(to_string(*abort->ensures_clauses[0]), "false");
  EXPECT_EQ(p.find_procedure("f")->body->body.front()->kind, Command::Kind::kCall);
}

TEST(ParserTest, CasinoConstantsResolve) {
  const Program p = load_corpus("casino");
  ASSERT_TRUE(p.find_constant("BET_PLACED"));
  EXPECT_EQ(p.find_constant("IDLE")->value, 0);
  EXPECT_EQ(p.find_constant("GAME_AVAILABLE")->value, 1);
  EXPECT_EQ(p.find_constant("BET_PLACED")->value, 2);
  EXPECT_EQ(p.entry, "main");
}

TEST(ParserTest, LocalTraceAnnotation) {
  const Program p = load_corpus("even_odd_star");
  const auto& body = p.find_procedure("even_odd_star")->body->body;
  const auto loop = std::find_if(body.begin(), body.end(), [](const CommandPtr& c) {
    return c->kind == Command::Kind::kWhile;
  });
  ASSERT_NE(loop, body.end());
  EXPECT_TRUE((*loop)->trace.local);
  EXPECT_EQ((*loop)->trace.clauses.at(0).regex, parse_regex("even | odd"));
}

TEST(ParserTest, SpecStatement) {
  const Program p = load_program(
      "events a, b;\nint x;\n"
      "void f() _(modifies x) { _(spec modifies x requires x > 0 ensures x' == x + 1 trace a if x > 1 trace b if x <= 1); }\n");
  const auto& s = p.find_procedure("f")->body->body.front();
  ASSERT_EQ(s->kind, Command::Kind::kSpec);
  EXPECT_EQ(s->mods, std::vector<std::string>{"x"});
  EXPECT_EQ(to_string(*s->guard), "x > 0");
  EXPECT_EQ(to_string(*s->relation), "x' == x + 1");
  EXPECT_EQ(s->trace.clauses.size(), 2u);
}

TEST(ParserTest, ExpressionPrecedence) {
  EXPECT_EQ(to_string(*parse_expr("a || b && c ==> d")), to_string(*parse_expr("(a || (b && c)) ==> d")));
  EXPECT_EQ(to_string(*parse_expr("1 + 2 * x < y - 3")), to_string(*parse_expr("(1 + (2 * x)) < (y - 3)")));
  EXPECT_EQ(to_string(*parse_expr("a ==> b ==> c")), to_string(*parse_expr("a ==> (b ==> c)")));
}

TEST(ParserDiagnostics, UndeclaredEventAndVariableWithPositions) {
  const auto ds = diagnostics_of("events a;\nvoid f() {\n  _(emit b);\n  x = 1;\n}\n");
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].kind, DiagnosticKind::kUndeclaredEvent);
  EXPECT_EQ(ds[0].span.line, 3);
  EXPECT_EQ(ds[1].kind, DiagnosticKind::kUndeclaredVariable);
  EXPECT_EQ(ds[1].span.line, 4);
  EXPECT_EQ(ds[1].to_string(), "4:3: UndeclaredVariable: undeclared variable 'x'");
}

TEST(ParserDiagnostics, SyntaxError) {
  const auto ds = diagnostics_of("events a;\nvoid f() { if }\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].kind, DiagnosticKind::kSyntaxError);
  EXPECT_EQ(ds[0].span.line, 2);
}

TEST(ParserDiagnostics, DuplicateName) {
  EXPECT_TRUE(has_diagnostic("events a, a;\n", DiagnosticKind::kDuplicateName));
  EXPECT_TRUE(has_diagnostic("events a;\nint x;\nbool x;\n", DiagnosticKind::kDuplicateName));
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f() { }\nvoid f() { }\n", DiagnosticKind::kDuplicateName));
}

TEST(ParserDiagnostics, CallToUndeclaredProcedure) {
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f() { check(1); }\n", DiagnosticKind::kUnboundName));
}

TEST(ParserDiagnostics, IntLoopTest) {
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f() { int y = 3; while (y) { } }\n", DiagnosticKind::kTypeError));
}

TEST(ParserDiagnostics, TypeErrors) {
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f() { int y = true; }\n", DiagnosticKind::kTypeError));
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f() { bool y = 1 + false; }\n", DiagnosticKind::kTypeError));
  EXPECT_TRUE(has_diagnostic("events a;\nvoid f(int x) { int y = x * x; }\n", DiagnosticKind::kTypeError));
  EXPECT_TRUE(has_diagnostic("events a;\nvoid g(int x) { }\nvoid f() { g(true); }\n", DiagnosticKind::kTypeError));
}

TEST(ParserDiagnostics, ContractContexts) {
  EXPECT_TRUE(has_diagnostic("events a;\nint x;\nvoid f() _(requires old(x) == 1) { }\n", DiagnosticKind::kTypeError) ||
              has_diagnostic("events a;\nint x;\nvoid f() _(requires old(x) == 1) { }\n", DiagnosticKind::kUnboundName));
  EXPECT_FALSE(diagnostics_of("events a;\nint x;\nvoid f() _(modifies x) _(ensures x == old(x)) { }\n").size());
  EXPECT_FALSE(diagnostics_of("events a;\nint x;\nvoid f(int c) _(trace a if c > x) { _(emit a); }\n").size());
  EXPECT_FALSE(diagnostics_of("events a;\nint f() _(trace a if result > 0);\n").empty());
}

TEST(ParserDiagnostics, ModifiesViolation) {
  EXPECT_TRUE(has_diagnostic("events a;\nint x;\nvoid f() { x = 1; }\n", DiagnosticKind::kModifiesViolation));
  EXPECT_TRUE(has_diagnostic("events a;\nint x;\nvoid g() _(modifies x);\nvoid f() { g(); }\n",
                             DiagnosticKind::kModifiesViolation));
}

TEST(ParserDiagnostics, AssignmentTargets) {
  EXPECT_TRUE(has_diagnostic("events a;\nconst int K = 1;\nvoid f() { K = 2; }\n", DiagnosticKind::kTypeError) ||
              has_diagnostic("events a;\nconst int K = 1;\nvoid f() { K = 2; }\n", DiagnosticKind::kUnboundName));
  EXPECT_FALSE(diagnostics_of("events a;\nvoid f(int p) { p = 2; }\n").empty());
}

TEST(ParserDiagnostics, MessagesAreSortedByPosition) {
  const auto ds = diagnostics_of("events a;\nvoid f() {\n  y = 1;\n  _(emit q);\n  x = 1;\n}\n");
  ASSERT_GE(ds.size(), 3u);
  for (std::size_t i = 1; i < ds.size(); ++i) {
    EXPECT_LE(std::pair(ds[i - 1].span.line, ds[i - 1].span.column), std::pair(ds[i].span.line, ds[i].span.column));
  }
}

TEST(ParserRoundTrip, CorpusPrintsToAFixpoint) {
  const auto names = corpus_names();
  ASSERT_GE(names.size(), 10u);
  for (const auto& name : names) {
    const std::string once = print_program(load_corpus(name));
    const std::string twice = print_program(load_program(once));
    EXPECT_EQ(once, twice) << name;
  }
}

/// Random well-typed program text over a fixed set of names.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string program() {
    std::string out = "events a, b, c;\nconst int K = 3;\nint g;\nbool h;\n";
    out += "int helper(int p)\n  _(requires p > 0)\n  _(modifies g)\n  _(ensures result == p + old(g))\n"
           "  _(trace a if p > 1)\n  _(trace b c* if p <= 1);\n";
    out += "void main(int n)\n  _(modifies g, h)\n  _(trace (a | b | c)*)\n{\n  int x = n;\n  bool y = h;\n";
    const int count = uniform(1, 6);
    for (int i = 0; i < count; ++i) out += statement(2, 1);
    out += "}\n";
    return out;
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string int_expr(int depth) {
    const int k = depth <= 0 ? uniform(0, 2) : uniform(0, 5);
    switch (k) {
      case 0: return std::to_string(uniform(-5, 9));
      case 1: return uniform(0, 1) ? "x" : "g";
      case 2: return uniform(0, 1) ? "K" : "n";
      case 3: return "(" + int_expr(depth - 1) + " + " + int_expr(depth - 1) + ")";
      case 4: return std::to_string(uniform(2, 4)) + " * " + int_expr(depth - 1);
      default: return "-" + int_expr(depth - 1);
    }
  }

  std::string bool_expr(int depth) {
    const int k = depth <= 0 ? uniform(0, 2) : uniform(0, 6);
    static const char* kCmp[] = {"<", "<=", ">", ">=", "==", "!="};
    switch (k) {
      case 0: return uniform(0, 1) ? "y" : "h";
      case 1: return uniform(0, 1) ? "true" : "false";
      case 2: return int_expr(1) + " " + kCmp[uniform(0, 5)] + " " + int_expr(1);
      case 3: return "!(" + bool_expr(depth - 1) + ")";
      case 4: return "(" + bool_expr(depth - 1) + " && " + bool_expr(depth - 1) + ")";
      case 5: return "(" + bool_expr(depth - 1) + " || " + bool_expr(depth - 1) + ")";
      default: return "(" + bool_expr(depth - 1) + " ==> " + bool_expr(depth - 1) + ")";
    }
  }

  std::string regex() {
    static const char* kRegex[] = {"a", "b c", "(a | b)*", "a+ c", "()", "c* b"};
    return kRegex[uniform(0, 5)];
  }

  std::string statement(int depth, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const int k = depth <= 0 ? uniform(0, 4) : uniform(0, 7);
    switch (k) {
      case 0: return pad + "_(emit " + std::string(1, static_cast<char>('a' + uniform(0, 2))) + ");\n";
      case 1: return pad + "x = " + int_expr(2) + ";\n";
      case 2: return pad + (uniform(0, 1) ? "y = nondet();\n" : "h = " + bool_expr(2) + ";\n");
      case 3: return pad + "x = helper(" + std::to_string(uniform(1, 4)) + ");\n";
      case 4:
        return pad + "_(spec modifies g requires " + bool_expr(1) + " ensures g' >= g trace " + regex() + " if " +
               bool_expr(1) + ");\n";
      case 5: {
        std::string out = pad + "if (" + bool_expr(2) + ")\n" + block(depth - 1, indent);
        if (uniform(0, 1)) out += pad + "else\n" + block(depth - 1, indent);
        return out;
      }
      case 6:
        return pad + "while (" + bool_expr(1) + ")\n" + pad + "  _(invariant " + bool_expr(1) + ")\n" + pad +
               "  _(trace " + regex() + " if " + bool_expr(1) + ")\n" + block(depth - 1, indent);
      default:
        return pad + "while (" + bool_expr(1) + ")\n" + pad + "  _(trace local " + regex() + ")\n" +
               block(depth - 1, indent);
    }
  }

  std::string block(int depth, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    std::string out = pad + "{\n";
    const int count = uniform(0, 3);
    for (int i = 0; i < count; ++i) out += statement(depth, indent + 1);
    return out + pad + "}\n";
  }

  std::mt19937_64 rng_;
};

TEST(ParserRoundTrip, GeneratedProgramsPrintToAFixpoint) {
  ProgramGenerator gen(67);
  for (int i = 0; i < 300; ++i) {
    const std::string source = gen.program();
    Program p;
    try {
      p = load_program(source);
    } catch (const ProgramError& e) {
      FAIL() << e.what() << "\n" << source;
    }
    const std::string once = print_program(p);
    EXPECT_EQ(print_program(load_program(once)), once) << source;
  }
}

TEST(ModifiedVarsTest, IncludesCalleeFrames) {
  const Program p = load_program(
      "events a;\nint g;\nbool h;\n"
      "void k() _(modifies h);\n"
      "void f() _(modifies g, h) { int x = 1; while (x < 3) { x = x + 1; k(); } g = 2; }\n");
  const auto& body = p.find_procedure("f")->body->body;
  const auto vars = modified_vars(p, *body.at(1));
  EXPECT_EQ(vars, (std::set<std::string>{"h", "x"}));
}

}  // namespace
}  // namespace regtrace
