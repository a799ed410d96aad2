#include "regtrace/lower.hpp"

#include <set>

#include "regtrace/parser.hpp"

namespace regtrace {

namespace {

bool is_int_op(BinaryOp op) {
  return op == BinaryOp::kAdd || op == BinaryOp::kSub || op == BinaryOp::kMul;
}

bool is_order_op(BinaryOp op) {
  return op == BinaryOp::kLt || op == BinaryOp::kLe || op == BinaryOp::kGt || op == BinaryOp::kGe;
}

}  // namespace

LinearTerm lower_int(const Expr& e, const Program* program, const SymLookup& lookup) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
      return LinearTerm(e.int_value);
    case Expr::Kind::kVar:
    case Expr::Kind::kOld: {
      if (program && e.kind == Expr::Kind::kVar && !e.prime) {
        if (const Constant* c = program->find_constant(e.name)) return LinearTerm(c->value);
      }
      SymValue v = lookup(e.name, e.prime, e.kind == Expr::Kind::kOld);
      if (auto* t = std::get_if<LinearTerm>(&v)) return *t;
      throw LowerError("'" + e.name + "' is not an integer");
    }
    case Expr::Kind::kUnary:
      if (e.unary != UnaryOp::kNeg) break;
      return -lower_int(*e.lhs, program, lookup);
    case Expr::Kind::kBinary: {
      if (!is_int_op(e.binary)) break;
      LinearTerm l = lower_int(*e.lhs, program, lookup);
      LinearTerm r = lower_int(*e.rhs, program, lookup);
      if (e.binary == BinaryOp::kAdd) return l + r;
      if (e.binary == BinaryOp::kSub) return l - r;
      if (l.is_constant()) return r * l.constant();
      if (r.is_constant()) return l * r.constant();
      throw LowerError("nonlinear multiplication in " + to_string(e));
    }
    default:
      break;
  }
  throw LowerError("expected an integer expression: " + to_string(e));
}

Formula lower_bool(const Expr& e, const Program* program, const SymLookup& lookup) {
  switch (e.kind) {
    case Expr::Kind::kBoolLit:
      return make_bool(e.bool_value);
    case Expr::Kind::kVar:
    case Expr::Kind::kOld: {
      SymValue v = lookup(e.name, e.prime, e.kind == Expr::Kind::kOld);
      if (auto* f = std::get_if<Formula>(&v)) return *f;
      throw LowerError("'" + e.name + "' is not a boolean");
    }
    case Expr::Kind::kUnary:
      if (e.unary != UnaryOp::kNot) break;
      return make_not(lower_bool(*e.lhs, program, lookup));
    case Expr::Kind::kBinary: {
      const auto rec = [&](const ExprPtr& x) { return lower_bool(*x, program, lookup); };
      const auto num = [&](const ExprPtr& x) { return lower_int(*x, program, lookup); };
      switch (e.binary) {
        case BinaryOp::kImplies: return make_implies(rec(e.lhs), rec(e.rhs));
        case BinaryOp::kOr: return make_or(rec(e.lhs), rec(e.rhs));
        case BinaryOp::kAnd: return make_and(rec(e.lhs), rec(e.rhs));
        case BinaryOp::kLt: return make_compare(CmpOp::kLt, num(e.lhs), num(e.rhs));
        case BinaryOp::kLe: return make_compare(CmpOp::kLe, num(e.lhs), num(e.rhs));
        case BinaryOp::kGt: return make_compare(CmpOp::kLt, num(e.rhs), num(e.lhs));
        case BinaryOp::kGe: return make_compare(CmpOp::kLe, num(e.rhs), num(e.lhs));
        case BinaryOp::kEq:
        case BinaryOp::kNe: {
          // Decide the operand sort by trying the integer reading first.
          std::optional<Formula> out;
          try {
            LinearTerm l = num(e.lhs);
            LinearTerm r = num(e.rhs);
            out = make_compare(e.binary == BinaryOp::kEq ? CmpOp::kEq : CmpOp::kNe, std::move(l), std::move(r));
          } catch (const LowerError&) {
            Formula iff = make_iff(rec(e.lhs), rec(e.rhs));
            out = e.binary == BinaryOp::kEq ? iff : make_not(iff);
          }
          return *out;
        }
        default:
          break;
      }
      break;
    }
    default:
      break;
  }
  throw LowerError("expected a boolean expression: " + to_string(e));
}

namespace {

/// Collects names used in integer position. Equalities propagate the sort
/// from one side to the other until a fixpoint is reached.
class SortInference {
 public:
  std::set<std::string> ints;

  void run(const Expr& e) {
    std::size_t before;
    do {
      before = ints.size();
      visit(e, false);
    } while (ints.size() != before);
  }

 private:
  bool looks_int(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::kIntLit: return true;
      case Expr::Kind::kVar:
      case Expr::Kind::kOld: return ints.count(e.name) > 0;
      case Expr::Kind::kUnary: return e.unary == UnaryOp::kNeg;
      case Expr::Kind::kBinary: return is_int_op(e.binary);
      default: return false;
    }
  }

  void visit(const Expr& e, bool int_position) {
    switch (e.kind) {
      case Expr::Kind::kVar:
      case Expr::Kind::kOld:
        if (int_position) ints.insert(e.name);
        return;
      case Expr::Kind::kUnary:
        visit(*e.lhs, e.unary == UnaryOp::kNeg);
        return;
      case Expr::Kind::kBinary:
        if (is_int_op(e.binary) || is_order_op(e.binary)) {
          visit(*e.lhs, true);
          visit(*e.rhs, true);
        } else if (e.binary == BinaryOp::kEq || e.binary == BinaryOp::kNe) {
          const bool numeric = looks_int(*e.lhs) || looks_int(*e.rhs);
          visit(*e.lhs, numeric);
          visit(*e.rhs, numeric);
        } else {
          visit(*e.lhs, false);
          visit(*e.rhs, false);
        }
        return;
      default:
        return;
    }
  }
};

}  // namespace

Formula parse_formula(std::string_view text) {
  ExprPtr e = parse_expr(text);
  SortInference sorts;
  sorts.run(*e);
  const SymLookup lookup = [&](const std::string& name, int prime, bool) -> SymValue {
    if (sorts.ints.count(name)) return LinearTerm::variable(Var{name, prime});
    return make_bool_var(Var{name, prime});
  };
  try {
    return lower_bool(*e, nullptr, lookup);
  } catch (const LowerError& err) {
    throw ProgramError({{DiagnosticKind::kTypeError, e->span, err.what()}});
  }
}

}  // namespace regtrace
