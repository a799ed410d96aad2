#include "regtrace/formula.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace regtrace {

std::string value_to_string(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::to_string(std::get<std::int64_t>(v));
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw FormulaError(FormulaError::Code::kOverflow, "integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw FormulaError(FormulaError::Code::kOverflow, "integer overflow");
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// LinearTerm

LinearTerm LinearTerm::variable(Var v, std::int64_t coefficient) {
  LinearTerm t;
  if (coefficient != 0) t.coeffs_.emplace(std::move(v), coefficient);
  return t;
}

LinearTerm& LinearTerm::operator+=(const LinearTerm& other) {
  constant_ = checked_add(constant_, other.constant_);
  for (const auto& [v, k] : other.coeffs_) {
    auto [it, inserted] = coeffs_.emplace(v, k);
    if (!inserted) {
      it->second = checked_add(it->second, k);
      if (it->second == 0) coeffs_.erase(it);
    }
  }
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& other) { return *this += other * -1; }

LinearTerm& LinearTerm::operator*=(std::int64_t k) {
  if (k == 0) {
    coeffs_.clear();
    constant_ = 0;
    return *this;
  }
  constant_ = checked_mul(constant_, k);
  for (auto& [v, c] : coeffs_) c = checked_mul(c, k);
  return *this;
}

std::string LinearTerm::to_string() const {
  std::string out;
  for (const auto& [v, k] : coeffs_) {
    std::int64_t mag = k;
    if (out.empty()) {
      if (k < 0) {
        out += "-";
        mag = -k;
      }
    } else {
      out += k < 0 ? " - " : " + ";
      mag = k < 0 ? -k : k;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += v.to_string();
  }
  if (out.empty()) return std::to_string(constant_);
  if (constant_ > 0) out += " + " + std::to_string(constant_);
  if (constant_ < 0) out += " - " + std::to_string(-constant_);
  return out;
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind = Kind::kTrue;
  Var var;
  std::vector<Formula> children;
  CmpOp op = CmpOp::kEq;
  LinearTerm lhs;
  LinearTerm rhs;
};

Formula::Formula() : Formula(make_true()) {}

Formula::Kind Formula::kind() const { return node_->kind; }
const Var& Formula::var() const { return node_->var; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
CmpOp Formula::op() const { return node_->op; }
const LinearTerm& Formula::lhs() const { return node_->lhs; }
const LinearTerm& Formula::rhs() const { return node_->rhs; }

Formula Formula::make(Kind kind, std::vector<Formula> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->children = std::move(children);
  return Formula(std::move(n));
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (a.kind() != b.kind()) return a.kind() <=> b.kind();
  switch (a.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return std::strong_ordering::equal;
    case Formula::Kind::kBoolVar:
      return a.var() <=> b.var();
    case Formula::Kind::kCompare:
      if (auto c = a.op() <=> b.op(); c != 0) return c;
      if (auto c = a.lhs() <=> b.lhs(); c != 0) return c;
      return a.rhs() <=> b.rhs();
    default: {
      const auto& ac = a.children();
      const auto& bc = b.children();
      return std::lexicographical_compare_three_way(ac.begin(), ac.end(), bc.begin(), bc.end());
    }
  }
}

Formula make_true() {
  static const Formula t = [] {
    auto n = std::make_shared<Formula::Node>();
    n->kind = Formula::Kind::kTrue;
    return Formula(std::move(n));
  }();
  return t;
}

Formula make_false() {
  static const Formula f = [] {
    auto n = std::make_shared<Formula::Node>();
    n->kind = Formula::Kind::kFalse;
    return Formula(std::move(n));
  }();
  return f;
}

Formula make_bool(bool b) { return b ? make_true() : make_false(); }

Formula make_bool_var(Var v) {
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::kBoolVar;
  n->var = std::move(v);
  return Formula(std::move(n));
}

Formula make_not(Formula f) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
      return make_false();
    case Formula::Kind::kFalse:
      return make_true();
    case Formula::Kind::kNot:
      return f.children()[0];
    default:
      return Formula::make(Formula::Kind::kNot, {std::move(f)});
  }
}

Formula make_and(std::vector<Formula> fs) {
  std::vector<Formula> parts;
  for (auto& f : fs) {
    if (f.is_true()) continue;
    if (f.is_false()) return make_false();
    if (f.kind() == Formula::Kind::kAnd) {
      for (const auto& c : f.children()) parts.push_back(c);
    } else {
      parts.push_back(std::move(f));
    }
  }
  // Drop syntactic duplicates but keep the first-occurrence order for
  // readable diagnostics.
  std::vector<Formula> unique;
  for (auto& p : parts) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  }
  if (unique.empty()) return make_true();
  if (unique.size() == 1) return unique.front();
  return Formula::make(Formula::Kind::kAnd, std::move(unique));
}

Formula make_and(Formula a, Formula b) { return make_and(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula make_or(std::vector<Formula> fs) {
  std::vector<Formula> parts;
  for (auto& f : fs) {
    if (f.is_false()) continue;
    if (f.is_true()) return make_true();
    if (f.kind() == Formula::Kind::kOr) {
      for (const auto& c : f.children()) parts.push_back(c);
    } else {
      parts.push_back(std::move(f));
    }
  }
  std::vector<Formula> unique;
  for (auto& p : parts) {
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  }
  if (unique.empty()) return make_false();
  if (unique.size() == 1) return unique.front();
  return Formula::make(Formula::Kind::kOr, std::move(unique));
}

Formula make_or(Formula a, Formula b) { return make_or(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula make_implies(Formula a, Formula b) {
  if (a.is_false() || b.is_true()) return make_true();
  if (a.is_true()) return b;
  if (b.is_false()) return make_not(std::move(a));
  return Formula::make(Formula::Kind::kImplies, {std::move(a), std::move(b)});
}

Formula make_iff(Formula a, Formula b) {
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false()) return make_not(std::move(b));
  if (b.is_false()) return make_not(std::move(a));
  if (a == b) return make_true();
  return Formula::make(Formula::Kind::kIff, {std::move(a), std::move(b)});
}

Formula make_compare(CmpOp op, LinearTerm lhs, LinearTerm rhs) {
  LinearTerm diff = lhs - rhs;
  if (diff.is_constant()) {
    const std::int64_t d = diff.constant();
    switch (op) {
      case CmpOp::kEq: return make_bool(d == 0);
      case CmpOp::kNe: return make_bool(d != 0);
      case CmpOp::kLt: return make_bool(d < 0);
      case CmpOp::kLe: return make_bool(d <= 0);
    }
  }
  auto n = std::make_shared<Formula::Node>();
  n->kind = Formula::Kind::kCompare;
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::kImplies: return 1;
    case Formula::Kind::kIff: return 2;
    case Formula::Kind::kOr: return 3;
    case Formula::Kind::kAnd: return 4;
    case Formula::Kind::kCompare: return 5;
    case Formula::Kind::kNot: return 6;
    default: return 7;
  }
}

const char* op_text(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return " == ";
    case CmpOp::kNe: return " != ";
    case CmpOp::kLt: return " < ";
    case CmpOp::kLe: return " <= ";
  }
  return " ? ";
}

void print(const Formula& f, int context, std::string& out) {
  const int prec = precedence(f);
  const bool parens = prec < context || (prec == context && prec <= 2);
  if (parens) out += '(';
  switch (f.kind()) {
    case Formula::Kind::kTrue: out += "true"; break;
    case Formula::Kind::kFalse: out += "false"; break;
    case Formula::Kind::kBoolVar: out += f.var().to_string(); break;
    case Formula::Kind::kNot:
      out += '!';
      print(f.children()[0], 6, out);
      break;
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr: {
      const char* sep = f.kind() == Formula::Kind::kAnd ? " && " : " || ";
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) out += sep;
        print(f.children()[i], prec + 1, out);
      }
      break;
    }
    case Formula::Kind::kImplies:
      print(f.children()[0], prec + 1, out);
      out += " ==> ";
      print(f.children()[1], prec + 1, out);
      break;
    case Formula::Kind::kIff:
      print(f.children()[0], prec + 1, out);
      out += " <==> ";
      print(f.children()[1], prec + 1, out);
      break;
    case Formula::Kind::kCompare:
      out += f.lhs().to_string();
      out += op_text(f.op());
      out += f.rhs().to_string();
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Formula::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables, priming, substitution, evaluation

namespace {

void collect_free(const Formula& f, FreeVars& out) {
  switch (f.kind()) {
    case Formula::Kind::kBoolVar:
      out.bools.insert(f.var());
      return;
    case Formula::Kind::kCompare:
      for (const auto& [v, k] : f.lhs().coefficients()) out.ints.insert(v);
      for (const auto& [v, k] : f.rhs().coefficients()) out.ints.insert(v);
      return;
    default:
      for (const auto& c : f.children()) collect_free(c, out);
  }
}

template <typename VarMap>
Formula rebuild(const Formula& f, const VarMap& map_var,
                const std::function<LinearTerm(const LinearTerm&)>& map_term) {
  switch (f.kind()) {
    case Formula::Kind::kTrue:
    case Formula::Kind::kFalse:
      return f;
    case Formula::Kind::kBoolVar:
      return map_var(f.var());
    case Formula::Kind::kCompare:
      return make_compare(f.op(), map_term(f.lhs()), map_term(f.rhs()));
    case Formula::Kind::kNot:
      return make_not(rebuild(f.children()[0], map_var, map_term));
    case Formula::Kind::kImplies:
      return make_implies(rebuild(f.children()[0], map_var, map_term), rebuild(f.children()[1], map_var, map_term));
    case Formula::Kind::kIff:
      return make_iff(rebuild(f.children()[0], map_var, map_term), rebuild(f.children()[1], map_var, map_term));
    case Formula::Kind::kAnd:
    case Formula::Kind::kOr: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(rebuild(c, map_var, map_term));
      return f.kind() == Formula::Kind::kAnd ? make_and(std::move(parts)) : make_or(std::move(parts));
    }
  }
  return f;
}

}  // namespace

FreeVars free_vars(const Formula& f) {
  FreeVars out;
  collect_free(f, out);
  return out;
}

Formula prime(const Formula& f) {
  auto raise = [](const Var& v) {
    if (v.prime != 0) {
      throw FormulaError(FormulaError::Code::kAlreadyPrimed, "variable already primed: " + v.to_string());
    }
    return Var{v.name, 1};
  };
  return rebuild(
      f, [&](const Var& v) { return make_bool_var(raise(v)); },
      [&](const LinearTerm& t) {
        LinearTerm out(t.constant());
        for (const auto& [v, k] : t.coefficients()) out += LinearTerm::variable(raise(v), k);
        return out;
      });
}

LinearTerm substitute(const LinearTerm& t, const Substitution& sigma) {
  LinearTerm out(t.constant());
  for (const auto& [v, k] : t.coefficients()) {
    if (auto it = sigma.ints.find(v); it != sigma.ints.end()) {
      out += it->second * k;
    } else {
      out += LinearTerm::variable(v, k);
    }
  }
  return out;
}

Formula substitute(const Formula& f, const Substitution& sigma) {
  return rebuild(
      f,
      [&](const Var& v) {
        if (auto it = sigma.bools.find(v); it != sigma.bools.end()) return it->second;
        return make_bool_var(v);
      },
      [&](const LinearTerm& t) { return substitute(t, sigma); });
}

namespace {

template <typename Lookup>
std::int64_t eval_term(const LinearTerm& t, const Lookup& lookup) {
  std::int64_t acc = t.constant();
  for (const auto& [v, k] : t.coefficients()) {
    const Value& val = lookup(v);
    const auto* i = std::get_if<std::int64_t>(&val);
    if (!i) throw FormulaError(FormulaError::Code::kTypeMismatch, "boolean used as integer: " + v.to_string());
    acc = checked_add(acc, checked_mul(k, *i));
  }
  return acc;
}

template <typename Lookup>
bool eval_formula(const Formula& f, const Lookup& lookup) {
  switch (f.kind()) {
    case Formula::Kind::kTrue: return true;
    case Formula::Kind::kFalse: return false;
    case Formula::Kind::kBoolVar: {
      const Value& val = lookup(f.var());
      const auto* b = std::get_if<bool>(&val);
      if (!b) throw FormulaError(FormulaError::Code::kTypeMismatch, "integer used as boolean: " + f.var().to_string());
      return *b;
    }
    case Formula::Kind::kNot: return !eval_formula(f.children()[0], lookup);
    case Formula::Kind::kAnd:
      for (const auto& c : f.children()) {
        if (!eval_formula(c, lookup)) return false;
      }
      return true;
    case Formula::Kind::kOr:
      for (const auto& c : f.children()) {
        if (eval_formula(c, lookup)) return true;
      }
      return false;
    case Formula::Kind::kImplies:
      return !eval_formula(f.children()[0], lookup) || eval_formula(f.children()[1], lookup);
    case Formula::Kind::kIff:
      return eval_formula(f.children()[0], lookup) == eval_formula(f.children()[1], lookup);
    case Formula::Kind::kCompare: {
      const std::int64_t l = eval_term(f.lhs(), lookup);
      const std::int64_t r = eval_term(f.rhs(), lookup);
      switch (f.op()) {
        case CmpOp::kEq: return l == r;
        case CmpOp::kNe: return l != r;
        case CmpOp::kLt: return l < r;
        case CmpOp::kLe: return l <= r;
      }
    }
  }
  return false;
}

struct StateLookup {
  const GroundState& pre;
  const GroundState& post;
  const Value& operator()(const Var& v) const {
    const GroundState& s = v.prime ? post : pre;
    auto it = s.find(v.name);
    if (it == s.end()) throw FormulaError(FormulaError::Code::kUnboundVariable, "unbound variable: " + v.to_string());
    return it->second;
  }
};

}  // namespace

bool evaluate(const Formula& f, const GroundState& pre, const GroundState& post) {
  return eval_formula(f, StateLookup{pre, post});
}

std::int64_t evaluate(const LinearTerm& t, const GroundState& pre, const GroundState& post) {
  return eval_term(t, StateLookup{pre, post});
}

bool evaluate(const Formula& f, const Model& model) {
  return eval_formula(f, [&](const Var& v) -> const Value& {
    auto it = model.find(v);
    if (it == model.end()) throw FormulaError(FormulaError::Code::kUnboundVariable, "unbound variable: " + v.to_string());
    return it->second;
  });
}

}  // namespace regtrace
