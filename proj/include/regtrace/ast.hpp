#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regtrace/regex.hpp"

namespace regtrace {

struct SourceSpan {
  int line = 0;
  int column = 0;
  std::string to_string() const { return std::to_string(line) + ":" + std::to_string(column); }
};

enum class Type { kVoid, kBool, kInt };
const char* to_string(Type t);

enum class UnaryOp { kNot, kNeg };
enum class BinaryOp { kImplies, kOr, kAnd, kEq, kNe, kLt, kLe, kGt, kGe, kAdd, kSub, kMul };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Surface expression. `result` is an ordinary variable reference; `old(x)`
/// refers to x in a procedure's entry state.
struct Expr {
  enum class Kind { kBoolLit, kIntLit, kVar, kOld, kUnary, kBinary };

  Kind kind = Kind::kBoolLit;
  SourceSpan span;
  bool bool_value = false;
  std::int64_t int_value = 0;
  std::string name;  // kVar, kOld
  int prime = 0;     // kVar
  UnaryOp unary = UnaryOp::kNot;
  BinaryOp binary = BinaryOp::kAnd;
  ExprPtr lhs;  // operand of kUnary
  ExprPtr rhs;

  static ExprPtr bool_lit(bool v, SourceSpan span = {});
  static ExprPtr int_lit(std::int64_t v, SourceSpan span = {});
  static ExprPtr var(std::string name, int prime = 0, SourceSpan span = {});
  static ExprPtr old(std::string name, SourceSpan span = {});
  static ExprPtr unary_op(UnaryOp op, ExprPtr operand, SourceSpan span = {});
  static ExprPtr binary_op(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
};

std::string to_string(const Expr& e);

/// One `_(trace u if g)` line. A null guard means `true`.
struct TraceClause {
  Regex regex;
  ExprPtr guard;
  SourceSpan span;
};

struct TraceAnnotation {
  std::vector<TraceClause> clauses;
  /// Loop-local form `_(trace local v)`: each iteration emits a word of v.
  bool local = false;
};

struct Command;
using CommandPtr = std::shared_ptr<const Command>;

struct Command {
  enum class Kind {
    kSpec,     // _(spec modifies x requires G ensures R trace ...)
    kEmit,     // _(emit a)
    kAssign,   // [T] x = e
    kHavoc,    // T x;  |  [T] x = nondet()
    kBlock,    // { ... }
    kIf,
    kWhile,
    kCall,     // [[T] x =] f(args)
    kAbort,    // _(unreachable)
    kAssert,   // _(assert e)
    kReturn,   // return [e]
  };

  Kind kind = Kind::kBlock;
  SourceSpan span;

  // kSpec
  std::vector<std::string> mods;
  ExprPtr guard;     // null = true
  ExprPtr relation;  // null = true; primed names denote post values
  // kSpec, kWhile
  TraceAnnotation trace;

  Event event;  // kEmit

  // kAssign, kHavoc, kCall
  std::string target;
  std::optional<Type> declared;  // set when the statement declares target
  bool via_nondet = false;       // kHavoc written as `= nondet()`

  ExprPtr value;  // kAssign, kReturn, kAssert; test for kIf/kWhile

  std::vector<CommandPtr> body;  // kBlock

  CommandPtr then_branch;  // kIf
  CommandPtr else_branch;  // kIf, may be null

  std::vector<ExprPtr> invariants;  // kWhile
  CommandPtr loop_body;             // kWhile

  std::string callee;  // kCall
  std::vector<ExprPtr> args;
};

struct Param {
  Type type = Type::kInt;
  std::string name;
  SourceSpan span;
};

struct Procedure {
  std::string name;
  Type return_type = Type::kVoid;
  std::vector<Param> params;
  std::vector<ExprPtr> requires_clauses;
  std::vector<ExprPtr> ensures_clauses;
  std::vector<std::string> modifies;
  TraceAnnotation trace;
  CommandPtr body;  // null for bodiless (axiomatic) procedures
  SourceSpan span;
  bool builtin = false;
  /// Parameters and locals (and `result` for non-void procedures).
  std::map<std::string, Type> locals;

  bool has_body() const { return body != nullptr; }
};

struct EventDecl {
  Event event;
  SourceSpan span;
};

struct GlobalVar {
  Type type = Type::kInt;
  std::string name;
  SourceSpan span;
};

struct Constant {
  std::string name;
  std::int64_t value = 0;
  SourceSpan span;
};

struct Program {
  std::vector<EventDecl> events;
  std::vector<Constant> constants;
  std::vector<GlobalVar> globals;
  std::vector<Procedure> procedures;
  /// `main` when present, otherwise the last procedure with a body.
  std::string entry;

  Alphabet alphabet() const;
  const Procedure* find_procedure(const std::string& name) const;
  const GlobalVar* find_global(const std::string& name) const;
  const Constant* find_constant(const std::string& name) const;
  /// Type of a name visible inside `proc` (locals shadow nothing: names are
  /// unique across scopes).
  std::optional<Type> type_of(const Procedure& proc, const std::string& name) const;
};

}  // namespace regtrace
