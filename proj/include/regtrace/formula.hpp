#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace regtrace {

/// A (possibly primed) variable. Prime level 1 denotes the post-state copy.
struct Var {
  std::string name;
  int prime = 0;

  std::string to_string() const { return prime ? name + "'" : name; }

  friend auto operator<=>(const Var&, const Var&) = default;
  friend bool operator==(const Var&, const Var&) = default;
};

using Value = std::variant<bool, std::int64_t>;
/// Ground assignment of unprimed variable names to values.
using GroundState = std::map<std::string, Value>;

std::string value_to_string(const Value& v);

class FormulaError : public std::runtime_error {
 public:
  enum class Code { kAlreadyPrimed, kUnboundVariable, kTypeMismatch, kOverflow };
  FormulaError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

/// Integer linear term  c + sum(k_i * x_i).
class LinearTerm {
 public:
  LinearTerm() = default;
  explicit LinearTerm(std::int64_t constant) : constant_(constant) {}
  static LinearTerm variable(Var v, std::int64_t coefficient = 1);

  const std::map<Var, std::int64_t>& coefficients() const { return coeffs_; }
  std::int64_t constant() const { return constant_; }
  bool is_constant() const { return coeffs_.empty(); }

  LinearTerm& operator+=(const LinearTerm& other);
  LinearTerm& operator-=(const LinearTerm& other);
  LinearTerm& operator*=(std::int64_t k);

  friend LinearTerm operator+(LinearTerm a, const LinearTerm& b) { return a += b; }
  friend LinearTerm operator-(LinearTerm a, const LinearTerm& b) { return a -= b; }
  friend LinearTerm operator*(LinearTerm a, std::int64_t k) { return a *= k; }
  friend LinearTerm operator-(LinearTerm a) { return a *= -1; }

  std::string to_string() const;

  friend auto operator<=>(const LinearTerm&, const LinearTerm&) = default;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;

 private:
  std::map<Var, std::int64_t> coeffs_;
  std::int64_t constant_ = 0;
};

enum class CmpOp { kEq, kNe, kLt, kLe };

/// Quantifier-free formula over boolean variables and linear integer
/// comparisons. Immutable; constructors fold constants.
class Formula {
 public:
  enum class Kind { kTrue, kFalse, kBoolVar, kNot, kAnd, kOr, kImplies, kIff, kCompare };

  Formula();  // true

  Kind kind() const;
  const Var& var() const;                       // kBoolVar
  const std::vector<Formula>& children() const; // kNot/kAnd/kOr/kImplies/kIff
  CmpOp op() const;                             // kCompare
  const LinearTerm& lhs() const;                // kCompare
  const LinearTerm& rhs() const;                // kCompare

  bool is_true() const { return kind() == Kind::kTrue; }
  bool is_false() const { return kind() == Kind::kFalse; }

  std::string to_string() const;

  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);
  friend bool operator==(const Formula& a, const Formula& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::vector<Formula> children);

  friend Formula make_true();
  friend Formula make_false();
  friend Formula make_bool_var(Var v);
  friend Formula make_not(Formula f);
  friend Formula make_and(std::vector<Formula> fs);
  friend Formula make_or(std::vector<Formula> fs);
  friend Formula make_implies(Formula a, Formula b);
  friend Formula make_iff(Formula a, Formula b);
  friend Formula make_compare(CmpOp op, LinearTerm lhs, LinearTerm rhs);

  std::shared_ptr<const Node> node_;
};

Formula make_true();
Formula make_false();
Formula make_bool(bool b);
Formula make_bool_var(Var v);
Formula make_not(Formula f);
Formula make_and(std::vector<Formula> fs);
Formula make_and(Formula a, Formula b);
Formula make_or(std::vector<Formula> fs);
Formula make_or(Formula a, Formula b);
Formula make_implies(Formula a, Formula b);
Formula make_iff(Formula a, Formula b);
Formula make_compare(CmpOp op, LinearTerm lhs, LinearTerm rhs);

struct FreeVars {
  std::set<Var> bools;
  std::set<Var> ints;
};
FreeVars free_vars(const Formula& f);

/// Raises every free variable to prime level 1. Throws kAlreadyPrimed.
Formula prime(const Formula& f);

struct Substitution {
  std::map<Var, Formula> bools;
  std::map<Var, LinearTerm> ints;
};
Formula substitute(const Formula& f, const Substitution& sigma);
LinearTerm substitute(const LinearTerm& t, const Substitution& sigma);

/// Evaluates with unprimed variables read from `pre` and primed ones from
/// `post`. Throws kUnboundVariable or kTypeMismatch.
bool evaluate(const Formula& f, const GroundState& pre, const GroundState& post = {});
std::int64_t evaluate(const LinearTerm& t, const GroundState& pre, const GroundState& post = {});

/// Assignment keyed by variable including prime level.
using Model = std::map<Var, Value>;
bool evaluate(const Formula& f, const Model& model);

}  // namespace regtrace
