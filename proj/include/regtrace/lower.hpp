#pragma once

#include <functional>
#include <string>
#include <variant>

#include "regtrace/ast.hpp"
#include "regtrace/formula.hpp"

namespace regtrace {

/// Symbolic value of a program variable: a formula for booleans, a linear
/// term for integers.
using SymValue = std::variant<Formula, LinearTerm>;

/// Resolves a variable reference. `prime` is 1 for `x'`; `old` is set for
/// `old(x)`. Constants are resolved by the lowering itself.
using SymLookup = std::function<SymValue(const std::string& name, int prime, bool old)>;

class LowerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Formula lower_bool(const Expr& e, const Program* program, const SymLookup& lookup);
LinearTerm lower_int(const Expr& e, const Program* program, const SymLookup& lookup);

}  // namespace regtrace
