#include "regtrace/solver.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

namespace regtrace {

const char* to_string(SatStatus s) {
  switch (s) {
    case SatStatus::kSat: return "sat";
    case SatStatus::kUnsat: return "unsat";
    case SatStatus::kUnknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Validity v) {
  switch (v) {
    case Validity::kValid: return "valid";
    case Validity::kInvalid: return "invalid";
    case Validity::kUnknown: return "unknown";
  }
  return "unknown";
}

EntailResult Solver::entails(const Formula& p, const Formula& q) {
  SatResult r = check_sat(make_and(p, make_not(q)));
  EntailResult out;
  out.diagnostic = std::move(r.diagnostic);
  switch (r.status) {
    case SatStatus::kUnsat:
      out.validity = Validity::kValid;
      break;
    case SatStatus::kSat:
      out.validity = Validity::kInvalid;
      out.counterexample = std::move(r.model);
      break;
    case SatStatus::kUnknown:
      out.validity = Validity::kUnknown;
      break;
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Integer arithmetic helpers

using Coeffs = std::map<Var, std::int64_t>;

std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw FormulaError(FormulaError::Code::kOverflow, "overflow");
  return r;
}

std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw FormulaError(FormulaError::Code::kOverflow, "overflow");
  return r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // b > 0
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
  // b > 0
  std::int64_t q = a / b;
  if ((a % b != 0) && (a > 0)) ++q;
  return q;
}

/// coeffs · x + constant <= 0
struct Constraint {
  Coeffs coeffs;
  std::int64_t constant = 0;
};

Constraint from_term(const LinearTerm& t) {
  Constraint c;
  c.coeffs = t.coefficients();
  c.constant = t.constant();
  return c;
}

Coeffs negate(const Coeffs& a) {
  Coeffs out;
  for (const auto& [v, k] : a) out.emplace(v, -k);
  return out;
}

std::int64_t coefficient_of(const Constraint& c, const Var& x) {
  auto it = c.coeffs.find(x);
  return it == c.coeffs.end() ? 0 : it->second;
}

// Value of everything except x under the model (missing variables read 0).
std::int64_t rest_value(const Constraint& c, const Var& x, const Model& model) {
  std::int64_t acc = c.constant;
  for (const auto& [v, k] : c.coeffs) {
    if (v == x) continue;
    auto it = model.find(v);
    const std::int64_t val = it == model.end() ? 0 : std::get<std::int64_t>(it->second);
    acc = add(acc, mul(k, val));
  }
  return acc;
}

Constraint substitute_value(const Constraint& c, const Var& x, std::int64_t value) {
  Constraint out = c;
  auto it = out.coeffs.find(x);
  if (it == out.coeffs.end()) return out;
  out.constant = add(out.constant, mul(it->second, value));
  out.coeffs.erase(it);
  return out;
}

// Replace x by (sign * (rhs)) where rhs is a linear expression.
Constraint substitute_term(const Constraint& c, const Var& x, const Coeffs& expr, std::int64_t expr_const) {
  auto it = c.coeffs.find(x);
  if (it == c.coeffs.end()) return c;
  const std::int64_t k = it->second;
  Constraint out;
  out.coeffs = c.coeffs;
  out.coeffs.erase(x);
  out.constant = add(c.constant, mul(k, expr_const));
  for (const auto& [v, e] : expr) {
    auto& slot = out.coeffs[v];
    slot = add(slot, mul(k, e));
    if (slot == 0) out.coeffs.erase(v);
  }
  return out;
}

/// Integer feasibility of a conjunction of linear constraints.
class IntegerFeasibility {
 public:
  IntegerFeasibility(std::int64_t& budget, std::int64_t max_enumeration)
      : budget_(budget), max_enumeration_(max_enumeration) {}

  SatStatus solve(std::vector<Constraint> cs, Model& model) {
    if (--budget_ < 0) return SatStatus::kUnknown;
    if (!normalize(cs)) return SatStatus::kUnsat;
    if (cs.empty()) return SatStatus::kSat;

    if (auto eq = find_unit_equality(cs)) return solve_by_substitution(cs, *eq, model);

    std::map<Var, std::pair<int, int>> bounds;  // var -> (#upper, #lower)
    std::map<Var, bool> unit;
    for (const auto& c : cs) {
      for (const auto& [v, k] : c.coeffs) {
        auto& b = bounds[v];
        (k > 0 ? b.first : b.second)++;
        auto [it, inserted] = unit.emplace(v, true);
        if (k != 1 && k != -1) it->second = false;
      }
    }
    std::optional<Var> pick;
    long best = -1;
    bool best_unit = false;
    for (const auto& [v, b] : bounds) {
      const long cost = static_cast<long>(b.first) * b.second;
      const bool is_unit = unit[v];
      if (cost == 0) {
        pick = v;
        best = 0;
        break;
      }
      if (!pick || (is_unit && !best_unit) || (is_unit == best_unit && cost < best)) {
        pick = v;
        best = cost;
        best_unit = is_unit;
      }
    }
    const Var x = *pick;

    std::vector<Constraint> uppers, lowers, rest;
    for (auto& c : cs) {
      const std::int64_t k = coefficient_of(c, x);
      if (k > 0) {
        uppers.push_back(std::move(c));
      } else if (k < 0) {
        lowers.push_back(std::move(c));
      } else {
        rest.push_back(std::move(c));
      }
    }

    if (uppers.empty() || lowers.empty()) {
      SatStatus r = solve(rest, model);
      if (r != SatStatus::kSat) return r;
      return extend(x, uppers, lowers, model) ? SatStatus::kSat : SatStatus::kUnknown;
    }

    std::vector<Constraint> shadow = rest;
    for (const auto& up : uppers) {
      for (const auto& lo : lowers) {
        shadow.push_back(combine(up, lo, x));
      }
    }
    if (shadow.size() > 4000) return SatStatus::kUnknown;
    Model shadow_model = model;
    SatStatus r = solve(shadow, shadow_model);
    if (r == SatStatus::kUnsat) return SatStatus::kUnsat;
    if (r == SatStatus::kSat && extend(x, uppers, lowers, shadow_model)) {
      model = std::move(shadow_model);
      return SatStatus::kSat;
    }
    // The rational shadow is feasible but the chosen point does not lift to
    // an integer x; branch on x over its projected range.
    std::vector<Constraint> all = rest;
    all.insert(all.end(), uppers.begin(), uppers.end());
    all.insert(all.end(), lowers.begin(), lowers.end());
    return enumerate(all, x, model);
  }

 private:
  // Tightens by gcd, merges duplicates, detects contradictions between a
  // constraint and its mirror image. Returns false on contradiction.
  bool normalize(std::vector<Constraint>& cs) {
    std::map<Coeffs, std::int64_t> tightest;
    for (auto& c : cs) {
      if (c.coeffs.empty()) {
        if (c.constant > 0) return false;
        continue;
      }
      std::int64_t g = 0;
      for (const auto& [v, k] : c.coeffs) g = std::gcd(g, k < 0 ? -k : k);
      if (g > 1) {
        for (auto& [v, k] : c.coeffs) k /= g;
        c.constant = ceil_div(c.constant, g);
      }
      auto [it, inserted] = tightest.emplace(c.coeffs, c.constant);
      if (!inserted) it->second = std::max(it->second, c.constant);
    }
    for (const auto& [a, c1] : tightest) {
      auto mirror = tightest.find(negate(a));
      if (mirror == tightest.end()) continue;
      // a·x <= -c1 and a·x >= c2
      if (mirror->second > -c1) return false;
    }
    cs.clear();
    for (auto& [a, c] : tightest) cs.push_back(Constraint{a, c});
    return true;
  }

  struct UnitEquality {
    Constraint eq;  // eq.coeffs · x + eq.constant == 0
    Var var;
  };

  std::optional<UnitEquality> find_unit_equality(const std::vector<Constraint>& cs) {
    std::map<Coeffs, std::int64_t> index;
    for (const auto& c : cs) index.emplace(c.coeffs, c.constant);
    for (const auto& c : cs) {
      auto mirror = index.find(negate(c.coeffs));
      if (mirror == index.end() || mirror->second != -c.constant) continue;
      for (const auto& [v, k] : c.coeffs) {
        if (k == 1 || k == -1) return UnitEquality{c, v};
      }
    }
    return std::nullopt;
  }

  SatStatus solve_by_substitution(const std::vector<Constraint>& cs, const UnitEquality& eq, Model& model) {
    // k*x + rest + c == 0 with k = ±1  =>  x = -k * (rest + c)
    const std::int64_t k = eq.eq.coeffs.at(eq.var);
    Coeffs expr;
    for (const auto& [v, e] : eq.eq.coeffs) {
      if (v != eq.var) expr.emplace(v, mul(-k, e));
    }
    const std::int64_t expr_const = mul(-k, eq.eq.constant);
    std::vector<Constraint> reduced;
    reduced.reserve(cs.size());
    for (const auto& c : cs) reduced.push_back(substitute_term(c, eq.var, expr, expr_const));
    SatStatus r = solve(std::move(reduced), model);
    if (r != SatStatus::kSat) return r;
    std::int64_t value = expr_const;
    for (const auto& [v, e] : expr) {
      auto it = model.find(v);
      if (it == model.end()) it = model.emplace(v, std::int64_t{0}).first;
      value = add(value, mul(e, std::get<std::int64_t>(it->second)));
    }
    model[eq.var] = value;
    return SatStatus::kSat;
  }

  static Constraint combine(const Constraint& up, const Constraint& lo, const Var& x) {
    const std::int64_t a = coefficient_of(up, x);   // > 0
    const std::int64_t b = -coefficient_of(lo, x);  // > 0
    Constraint out;
    out.constant = add(mul(b, up.constant), mul(a, lo.constant));
    for (const auto& [v, k] : up.coeffs) {
      if (v != x) out.coeffs[v] = mul(b, k);
    }
    for (const auto& [v, k] : lo.coeffs) {
      if (v == x) continue;
      auto& slot = out.coeffs[v];
      slot = add(slot, mul(a, k));
      if (slot == 0) out.coeffs.erase(v);
    }
    return out;
  }

  // Picks an integer x satisfying all bounds given the model for the other
  // variables. Unassigned variables are fixed to 0 first.
  static bool extend(const Var& x, const std::vector<Constraint>& uppers, const std::vector<Constraint>& lowers,
                     Model& model) {
    for (const auto* group : {&uppers, &lowers}) {
      for (const auto& c : *group) {
        for (const auto& [v, k] : c.coeffs) {
          if (v != x && !model.count(v)) model.emplace(v, std::int64_t{0});
        }
      }
    }
    std::optional<std::int64_t> lo, hi;
    for (const auto& c : uppers) {
      const std::int64_t a = coefficient_of(c, x);
      const std::int64_t bound = floor_div(-rest_value(c, x, model), a);
      hi = hi ? std::min(*hi, bound) : bound;
    }
    for (const auto& c : lowers) {
      const std::int64_t b = -coefficient_of(c, x);
      const std::int64_t bound = ceil_div(rest_value(c, x, model), b);
      lo = lo ? std::max(*lo, bound) : bound;
    }
    if (lo && hi && *lo > *hi) return false;
    std::int64_t value = 0;
    if (lo && value < *lo) value = *lo;
    if (hi && value > *hi) value = *hi;
    model[x] = value;
    return true;
  }

  // Range of x implied by the system, computed by eliminating every other
  // variable (an over-approximation of the integer projection).
  std::pair<std::optional<std::int64_t>, std::optional<std::int64_t>> project(std::vector<Constraint> cs,
                                                                              const Var& x) {
    for (;;) {
      if (--budget_ < 0) return {std::nullopt, std::nullopt};
      if (!normalize(cs)) return {1, 0};  // empty range
      std::optional<Var> other;
      for (const auto& c : cs) {
        for (const auto& [v, k] : c.coeffs) {
          if (v != x) {
            other = v;
            break;
          }
        }
        if (other) break;
      }
      if (!other) break;
      std::vector<Constraint> uppers, lowers, next;
      for (auto& c : cs) {
        const std::int64_t k = coefficient_of(c, *other);
        if (k > 0) {
          uppers.push_back(std::move(c));
        } else if (k < 0) {
          lowers.push_back(std::move(c));
        } else {
          next.push_back(std::move(c));
        }
      }
      for (const auto& up : uppers) {
        for (const auto& lo : lowers) next.push_back(combine(up, lo, *other));
      }
      if (next.size() > 4000) return {std::nullopt, std::nullopt};
      cs = std::move(next);
    }
    std::optional<std::int64_t> lo, hi;
    for (const auto& c : cs) {
      const std::int64_t a = coefficient_of(c, x);
      if (a > 0) {
        const std::int64_t bound = floor_div(-c.constant, a);
        hi = hi ? std::min(*hi, bound) : bound;
      } else if (a < 0) {
        const std::int64_t bound = ceil_div(c.constant, -a);
        lo = lo ? std::max(*lo, bound) : bound;
      }
    }
    return {lo, hi};
  }

  SatStatus enumerate(const std::vector<Constraint>& cs, const Var& x, Model& model) {
    auto [lo, hi] = project(cs, x);
    if (!lo || !hi) return SatStatus::kUnknown;
    if (*lo > *hi) return SatStatus::kUnsat;
    if (*hi - *lo + 1 > max_enumeration_) return SatStatus::kUnknown;
    bool unknown = false;
    for (std::int64_t v = *lo; v <= *hi; ++v) {
      std::vector<Constraint> fixed;
      fixed.reserve(cs.size());
      for (const auto& c : cs) fixed.push_back(substitute_value(c, x, v));
      Model m = model;
      SatStatus r = solve(std::move(fixed), m);
      if (r == SatStatus::kSat) {
        m[x] = v;
        model = std::move(m);
        return SatStatus::kSat;
      }
      if (r == SatStatus::kUnknown) unknown = true;
    }
    return unknown ? SatStatus::kUnknown : SatStatus::kUnsat;
  }

  std::int64_t& budget_;
  std::int64_t max_enumeration_;
};

// ---------------------------------------------------------------------------
// Negation normal form over boolean literals and linear constraints.

struct Nnf {
  enum class Kind { kTrue, kFalse, kAnd, kOr, kBoolLit, kArith };
  Kind kind = Kind::kTrue;
  Var var;
  bool positive = true;
  Constraint constraint;
  std::vector<Nnf> kids;
};

Nnf leaf(bool value) {
  Nnf n;
  n.kind = value ? Nnf::Kind::kTrue : Nnf::Kind::kFalse;
  return n;
}

Nnf arith(const LinearTerm& t) {  // t <= 0
  Nnf n;
  n.kind = Nnf::Kind::kArith;
  n.constraint = from_term(t);
  return n;
}

Nnf group(Nnf::Kind kind, std::vector<Nnf> kids) {
  Nnf n;
  n.kind = kind;
  n.kids = std::move(kids);
  return n;
}

Nnf to_nnf(const Formula& f, bool positive) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return leaf(positive);
    case K::kFalse:
      return leaf(!positive);
    case K::kBoolVar: {
      Nnf n;
      n.kind = Nnf::Kind::kBoolLit;
      n.var = f.var();
      n.positive = positive;
      return n;
    }
    case K::kNot:
      return to_nnf(f.children()[0], !positive);
    case K::kAnd:
    case K::kOr: {
      std::vector<Nnf> kids;
      for (const auto& c : f.children()) kids.push_back(to_nnf(c, positive));
      const bool conj = (f.kind() == K::kAnd) == positive;
      return group(conj ? Nnf::Kind::kAnd : Nnf::Kind::kOr, std::move(kids));
    }
    case K::kImplies: {
      const auto& a = f.children()[0];
      const auto& b = f.children()[1];
      if (positive) return group(Nnf::Kind::kOr, {to_nnf(a, false), to_nnf(b, true)});
      return group(Nnf::Kind::kAnd, {to_nnf(a, true), to_nnf(b, false)});
    }
    case K::kIff: {
      const auto& a = f.children()[0];
      const auto& b = f.children()[1];
      return group(Nnf::Kind::kOr, {group(Nnf::Kind::kAnd, {to_nnf(a, true), to_nnf(b, positive)}),
                                    group(Nnf::Kind::kAnd, {to_nnf(a, false), to_nnf(b, !positive)})});
    }
    case K::kCompare: {
      const LinearTerm d = f.lhs() - f.rhs();
      const LinearTerm one(1);
      CmpOp op = f.op();
      if (!positive) {
        switch (op) {
          case CmpOp::kEq: op = CmpOp::kNe; break;
          case CmpOp::kNe: op = CmpOp::kEq; break;
          case CmpOp::kLt: return arith(-d);        // d >= 0
          case CmpOp::kLe: return arith(-d + one);  // d > 0
        }
      }
      switch (op) {
        case CmpOp::kEq: return group(Nnf::Kind::kAnd, {arith(d), arith(-d)});
        case CmpOp::kNe: return group(Nnf::Kind::kOr, {arith(d + one), arith(-d + one)});
        case CmpOp::kLt: return arith(d + one);
        case CmpOp::kLe: return arith(d);
      }
    }
  }
  return leaf(true);
}

class BooleanSearch {
 public:
  BooleanSearch(std::int64_t& budget, std::int64_t max_enumeration)
      : budget_(budget), max_enumeration_(max_enumeration) {}

  struct Branch {
    std::vector<const Nnf*> pending;
    std::vector<const Nnf*> deferred;
    std::map<Var, bool> bools;
    std::vector<Constraint> constraints;
  };

  SatStatus run(Branch b, Model& model) {
    if (--budget_ < 0) return SatStatus::kUnknown;
    while (!b.pending.empty()) {
      const Nnf* n = b.pending.back();
      b.pending.pop_back();
      switch (n->kind) {
        case Nnf::Kind::kTrue:
          break;
        case Nnf::Kind::kFalse:
          return SatStatus::kUnsat;
        case Nnf::Kind::kAnd:
          for (const auto& k : n->kids) b.pending.push_back(&k);
          break;
        case Nnf::Kind::kOr:
          b.deferred.push_back(n);
          break;
        case Nnf::Kind::kBoolLit: {
          auto [it, inserted] = b.bools.emplace(n->var, n->positive);
          if (!inserted && it->second != n->positive) return SatStatus::kUnsat;
          break;
        }
        case Nnf::Kind::kArith:
          if (n->constraint.coeffs.empty()) {
            if (n->constraint.constant > 0) return SatStatus::kUnsat;
          } else {
            b.constraints.push_back(n->constraint);
          }
          break;
      }
    }

    Model theory_model;
    IntegerFeasibility lia(budget_, max_enumeration_);
    const SatStatus theory = lia.solve(b.constraints, theory_model);
    if (theory == SatStatus::kUnsat) return SatStatus::kUnsat;

    if (b.deferred.empty()) {
      if (theory != SatStatus::kSat) return theory;
      model = std::move(theory_model);
      for (const auto& [v, val] : b.bools) model[v] = val;
      return SatStatus::kSat;
    }

    const Nnf* split = b.deferred.back();
    b.deferred.pop_back();
    bool unknown = false;
    for (const auto& kid : split->kids) {
      Branch next = b;
      next.pending.push_back(&kid);
      SatStatus r = run(std::move(next), model);
      if (r == SatStatus::kSat) return r;
      if (r == SatStatus::kUnknown) unknown = true;
    }
    return unknown ? SatStatus::kUnknown : SatStatus::kUnsat;
  }

 private:
  std::int64_t& budget_;
  std::int64_t max_enumeration_;
};

}  // namespace

SatResult BuiltinSolver::check_sat(const Formula& f) {
  SatResult result;
  if (f.is_true()) {
    result.status = SatStatus::kSat;
    result.model = Model{};
    return result;
  }
  if (f.is_false()) {
    result.status = SatStatus::kUnsat;
    return result;
  }
  try {
    const Nnf root = to_nnf(f, true);
    std::int64_t budget = options_.node_budget;
    BooleanSearch search(budget, options_.max_enumeration);
    BooleanSearch::Branch start;
    start.pending.push_back(&root);
    Model model;
    result.status = search.run(std::move(start), model);
    if (result.status == SatStatus::kUnknown) {
      result.diagnostic = budget < 0 ? "search budget exhausted" : "integer constraints outside decided fragment";
      return result;
    }
    if (result.status == SatStatus::kSat) {
      const FreeVars fv = free_vars(f);
      for (const auto& v : fv.bools) model.emplace(v, false);
      for (const auto& v : fv.ints) model.emplace(v, std::int64_t{0});
      if (!evaluate(f, model)) {
        result.status = SatStatus::kUnknown;
        result.diagnostic = "model validation failed";
        return result;
      }
      result.model = std::move(model);
    }
  } catch (const FormulaError& e) {
    result.status = SatStatus::kUnknown;
    result.diagnostic = e.what();
  }
  return result;
}

// ---------------------------------------------------------------------------
// SMT-LIB

namespace {

std::string smt_symbol(const Var& v) { return "|" + v.to_string() + "|"; }

std::string smt_int(std::int64_t k) { return k < 0 ? "(- " + std::to_string(-k) + ")" : std::to_string(k); }

std::string smt_term(const LinearTerm& t) {
  std::vector<std::string> parts;
  for (const auto& [v, k] : t.coefficients()) {
    parts.push_back(k == 1 ? smt_symbol(v) : "(* " + smt_int(k) + " " + smt_symbol(v) + ")");
  }
  if (t.constant() != 0 || parts.empty()) parts.push_back(smt_int(t.constant()));
  if (parts.size() == 1) return parts.front();
  std::string out = "(+";
  for (const auto& p : parts) out += " " + p;
  return out + ")";
}

std::string smt_formula(const Formula& f) {
  using K = Formula::Kind;
  auto nary = [&](const char* op) {
    std::string out = std::string("(") + op;
    for (const auto& c : f.children()) out += " " + smt_formula(c);
    return out + ")";
  };
  switch (f.kind()) {
    case K::kTrue: return "true";
    case K::kFalse: return "false";
    case K::kBoolVar: return smt_symbol(f.var());
    case K::kNot: return nary("not");
    case K::kAnd: return nary("and");
    case K::kOr: return nary("or");
    case K::kImplies: return nary("=>");
    case K::kIff: return nary("=");
    case K::kCompare: {
      const std::string l = smt_term(f.lhs());
      const std::string r = smt_term(f.rhs());
      switch (f.op()) {
        case CmpOp::kEq: return "(= " + l + " " + r + ")";
        case CmpOp::kNe: return "(not (= " + l + " " + r + "))";
        case CmpOp::kLt: return "(< " + l + " " + r + ")";
        case CmpOp::kLe: return "(<= " + l + " " + r + ")";
      }
    }
  }
  return "true";
}

}  // namespace

std::string to_smtlib(const Formula& f) {
  std::ostringstream out;
  out << "(set-logic QF_LIA)\n";
  const FreeVars fv = free_vars(f);
  for (const auto& v : fv.bools) out << "(declare-const " << smt_symbol(v) << " Bool)\n";
  for (const auto& v : fv.ints) out << "(declare-const " << smt_symbol(v) << " Int)\n";
  out << "(assert " << smt_formula(f) << ")\n";
  out << "(check-sat)\n";
  return out.str();
}

SatResult SmtLibProcessSolver::check_sat(const Formula& f) {
  std::lock_guard<std::mutex> lock(mutex_);
  SatResult result;
  char path[] = "/tmp/regtrace-smt-XXXXXX";
  const int fd = mkstemp(path);
  if (fd < 0) {
    result.diagnostic = "cannot create temporary file for solver input";
    return result;
  }
  {
    const std::string script = to_smtlib(f);
    const ssize_t written = ::write(fd, script.data(), script.size());
    ::close(fd);
    if (written != static_cast<ssize_t>(script.size())) {
      std::remove(path);
      result.diagnostic = "cannot write solver input";
      return result;
    }
  }
  const std::string cmd = command_ + " < " + path;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) {
    std::remove(path);
    result.diagnostic = "cannot start solver: " + command_;
    return result;
  }
  std::string output;
  char buf[256];
  while (std::fgets(buf, sizeof buf, pipe)) output += buf;
  const int status = ::pclose(pipe);
  std::remove(path);

  std::istringstream lines(output);
  std::string first_line;
  std::getline(lines, first_line);
  std::istringstream tokens(first_line);
  std::string token;
  tokens >> token;
  if (token == "sat") {
    result.status = SatStatus::kSat;
  } else if (token == "unsat") {
    result.status = SatStatus::kUnsat;
  } else if (token == "unknown") {
    result.status = SatStatus::kUnknown;
    result.diagnostic = "solver answered unknown";
  } else {
    result.status = SatStatus::kUnknown;
    result.diagnostic = "solver crash or unrecognized output (exit status " + std::to_string(status) + "): " +
                        first_line;
  }
  return result;
}

SatResult CachingSolver::check_sat(const Formula& f) {
  if (auto it = cache_.find(f); it != cache_.end()) return it->second;
  SatResult r = inner_->check_sat(f);
  cache_.emplace(f, r);
  return r;
}

std::unique_ptr<Solver> make_solver(std::string_view selector) {
  if (selector.empty() || selector == "internal") return std::make_unique<BuiltinSolver>();
  return std::make_unique<SmtLibProcessSolver>(std::string(selector));
}

}  // namespace regtrace
