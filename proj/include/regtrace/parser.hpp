#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "regtrace/ast.hpp"
#include "regtrace/formula.hpp"

namespace regtrace {

enum class DiagnosticKind {
  kSyntaxError,
  kUndeclaredEvent,
  kUndeclaredVariable,
  kDuplicateName,
  kTypeError,
  kUnboundName,
  kModifiesViolation,
};

const char* to_string(DiagnosticKind k);

struct Diagnostic {
  DiagnosticKind kind = DiagnosticKind::kSyntaxError;
  SourceSpan span;
  std::string message;

  std::string to_string() const;
};

class ProgramError : public std::runtime_error {
 public:
  explicit ProgramError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Parses program text. Desugars `u+`, `x = nondet()` (havoc) and `abort()`
/// (a call to a bodiless procedure whose postcondition is false). Throws
/// ProgramError listing every diagnostic with its position.
Program parse_program(std::string_view source);

/// Checks call targets, argument and expression types, assignment targets,
/// and that every global a body writes is covered by its `modifies` clause.
Program resolve(Program program);

/// parse_program followed by resolve.
Program load_program(std::string_view source);

/// Regex surface syntax: juxtaposition for concatenation, `|`, postfix `*`
/// and `+`, `()` for the empty word, `{}` for the empty language. When an
/// alphabet is given, undeclared events are rejected.
Regex parse_regex(std::string_view text, const Alphabet* alphabet = nullptr);

/// Parses a standalone expression.
ExprPtr parse_expr(std::string_view text);

/// Parses an expression and lowers it to a formula, inferring each
/// identifier's sort from its context (integer under arithmetic or
/// ordering, boolean otherwise). `x'` denotes a primed variable.
Formula parse_formula(std::string_view text);

std::string print_program(const Program& program);
std::string print_command(const Command& c, int indent = 0);

/// Variables a command may write: assignment, havoc and call targets, spec
/// statement frames, and the `modifies` sets of called procedures.
std::set<std::string> modified_vars(const Program& program, const Command& c);

}  // namespace regtrace
