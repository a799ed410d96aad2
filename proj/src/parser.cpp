#include "regtrace/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_set>

namespace regtrace {

const char* to_string(Type t) {
  switch (t) {
    case Type::kVoid: return "void";
    case Type::kBool: return "bool";
    case Type::kInt: return "int";
  }
  return "?";
}

const char* to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::kSyntaxError: return "SyntaxError";
    case DiagnosticKind::kUndeclaredEvent: return "UndeclaredEvent";
    case DiagnosticKind::kUndeclaredVariable: return "UndeclaredVariable";
    case DiagnosticKind::kDuplicateName: return "DuplicateName";
    case DiagnosticKind::kTypeError: return "TypeError";
    case DiagnosticKind::kUnboundName: return "UnboundName";
    case DiagnosticKind::kModifiesViolation: return "ModifiesViolation";
  }
  return "?";
}

std::string Diagnostic::to_string() const {
  return span.to_string() + ": " + regtrace::to_string(kind) + ": " + message;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.to_string();
  }
  return out;
}

}  // namespace

ProgramError::ProgramError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// ---------------------------------------------------------------------------
// AST helpers

ExprPtr Expr::bool_lit(bool v, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kBoolLit;
  e->bool_value = v;
  e->span = span;
  return e;
}

ExprPtr Expr::int_lit(std::int64_t v, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kIntLit;
  e->int_value = v;
  e->span = span;
  return e;
}

ExprPtr Expr::var(std::string name, int prime, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kVar;
  e->name = std::move(name);
  e->prime = prime;
  e->span = span;
  return e;
}

ExprPtr Expr::old(std::string name, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kOld;
  e->name = std::move(name);
  e->span = span;
  return e;
}

ExprPtr Expr::unary_op(UnaryOp op, ExprPtr operand, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kUnary;
  e->unary = op;
  e->lhs = std::move(operand);
  e->span = span;
  return e;
}

ExprPtr Expr::binary_op(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::kBinary;
  e->binary = op;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  e->span = span;
  return e;
}

Alphabet Program::alphabet() const {
  Alphabet out;
  for (const auto& e : events) out.insert(e.event);
  return out;
}

const Procedure* Program::find_procedure(const std::string& name) const {
  for (const auto& p : procedures) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const GlobalVar* Program::find_global(const std::string& name) const {
  for (const auto& g : globals) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

const Constant* Program::find_constant(const std::string& name) const {
  for (const auto& c : constants) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::optional<Type> Program::type_of(const Procedure& proc, const std::string& name) const {
  if (auto it = proc.locals.find(name); it != proc.locals.end()) return it->second;
  if (const auto* g = find_global(name)) return g->type;
  if (find_constant(name)) return Type::kInt;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

struct Token {
  enum class Kind { kIdent, kInt, kPunct, kAnnot, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
  std::int64_t value = 0;
  bool primed = false;
  SourceSpan span;
};

struct SyntaxFailure {
  SourceSpan span;
  std::string message;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  static const char* const kPuncts[] = {"<==>", "==>", "==", "!=", "<=", ">=", "&&", "||", "(", ")", "{", "}", ",",
                                        ";",    "=",   "<",  ">",  "+",  "-",  "*",  "!",  "|", ":"};
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      const SourceSpan start{line, col};
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw SyntaxFailure{start, "unterminated comment"};
      advance(2);
      continue;
    }
    Token t;
    t.span = {line, col};
    if (c == '_' && i + 1 < src.size() && src[i + 1] == '(') {
      t.kind = Token::Kind::kAnnot;
      t.text = "_(";
      advance(2);
      out.push_back(std::move(t));
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Token::Kind::kIdent;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      if (i < src.size() && src[i] == '\'') {
        t.primed = true;
        advance(1);
      }
      out.push_back(std::move(t));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::kInt;
      t.text = std::string(src.substr(i, j - i));
      auto [ptr, ec] = std::from_chars(src.data() + i, src.data() + j, t.value);
      if (ec != std::errc()) throw SyntaxFailure{t.span, "integer literal out of range"};
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (const char* p : kPuncts) {
      const std::string_view ps(p);
      if (src.substr(i, ps.size()) == ps) {
        t.kind = Token::Kind::kPunct;
        t.text = std::string(ps);
        advance(ps.size());
        out.push_back(std::move(t));
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxFailure{t.span, std::string("unexpected character '") + c + "'"};
  }
  Token end;
  end.kind = Token::Kind::kEnd;
  end.span = {line, col};
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct NameRef {
  std::string name;
  SourceSpan span;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program parse_program();
  Regex parse_regex_only(const Alphabet* alphabet);
  ExprPtr parse_expr_only();

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool at_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::kPunct && t.text == p;
  }
  bool at_ident(std::string_view word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::kIdent && t.text == word && !t.primed;
  }
  bool at_end() const { return peek().kind == Token::Kind::kEnd; }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxFailure{peek().span, msg}; }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail("expected '" + std::string(p) + "'" + found());
    next();
  }
  void expect_keyword(std::string_view w) {
    if (!at_ident(w)) fail("expected '" + std::string(w) + "'" + found());
    next();
  }
  std::string found() const {
    const Token& t = peek();
    if (t.kind == Token::Kind::kEnd) return " at end of input";
    return " but found '" + t.text + "'";
  }
  std::string expect_ident(const char* what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::kIdent || t.primed || is_reserved(t.text)) fail(std::string("expected ") + what + found());
    return next().text;
  }
  bool optional_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }

  static bool is_reserved(const std::string& s) {
    static const std::unordered_set<std::string> kReserved = {
        "events", "const", "bool", "int", "void", "if", "else", "while", "return", "true", "false", "old"};
    return kReserved.count(s) > 0;
  }

  std::optional<Type> peek_type() const {
    if (at_ident("bool")) return Type::kBool;
    if (at_ident("int")) return Type::kInt;
    if (at_ident("void")) return Type::kVoid;
    return std::nullopt;
  }

  // expressions
  ExprPtr expr();
  ExprPtr implies_expr();
  ExprPtr iff_expr();
  ExprPtr or_expr();
  ExprPtr and_expr();
  ExprPtr eq_expr();
  ExprPtr rel_expr();
  ExprPtr add_expr();
  ExprPtr mul_expr();
  ExprPtr unary_expr();
  ExprPtr primary_expr();

  // regexes
  Regex regex();
  Regex regex_seq();
  Regex regex_postfix();
  Regex regex_atom();
  TraceClause trace_clause();
  bool regex_seq_ends() const;

  // statements
  CommandPtr statement();
  CommandPtr block();
  CommandPtr annotation_statement();
  CommandPtr call_or_assign(std::optional<Type> declared, std::string target, SourceSpan span);
  void declare_local(const std::string& name, Type t, SourceSpan span);

  void top_level_item();
  void procedure(Type ret, std::string name, SourceSpan span);
  void prescan_procedures();
  void note_duplicate(const std::string& name, SourceSpan span);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  Program program_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> user_procedures_;
  std::set<std::string> top_names_;
  bool need_abort_ = false;

  // per-procedure state
  Procedure* proc_ = nullptr;
  std::vector<NameRef> var_refs_;
  std::vector<NameRef> event_refs_;
  const Alphabet* regex_alphabet_ = nullptr;
};

ExprPtr Parser::expr() { return implies_expr(); }

ExprPtr Parser::implies_expr() {
  ExprPtr lhs = iff_expr();
  if (at_punct("==>")) {
    const SourceSpan span = next().span;
    ExprPtr rhs = implies_expr();
    return Expr::binary_op(BinaryOp::kImplies, lhs, rhs, span);
  }
  return lhs;
}

// `a <==> b` is sugar for `a == b` on booleans.
ExprPtr Parser::iff_expr() {
  ExprPtr lhs = or_expr();
  if (at_punct("<==>")) {
    const SourceSpan span = next().span;
    return Expr::binary_op(BinaryOp::kEq, lhs, or_expr(), span);
  }
  return lhs;
}

ExprPtr Parser::or_expr() {
  ExprPtr lhs = and_expr();
  while (at_punct("||")) {
    const SourceSpan span = next().span;
    lhs = Expr::binary_op(BinaryOp::kOr, lhs, and_expr(), span);
  }
  return lhs;
}

ExprPtr Parser::and_expr() {
  ExprPtr lhs = eq_expr();
  while (at_punct("&&")) {
    const SourceSpan span = next().span;
    lhs = Expr::binary_op(BinaryOp::kAnd, lhs, eq_expr(), span);
  }
  return lhs;
}

ExprPtr Parser::eq_expr() {
  ExprPtr lhs = rel_expr();
  if (at_punct("==") || at_punct("!=")) {
    const Token& t = next();
    const BinaryOp op = t.text == "==" ? BinaryOp::kEq : BinaryOp::kNe;
    return Expr::binary_op(op, lhs, rel_expr(), t.span);
  }
  return lhs;
}

ExprPtr Parser::rel_expr() {
  ExprPtr lhs = add_expr();
  static const std::pair<const char*, BinaryOp> kOps[] = {
      {"<", BinaryOp::kLt}, {"<=", BinaryOp::kLe}, {">", BinaryOp::kGt}, {">=", BinaryOp::kGe}};
  for (const auto& [text, op] : kOps) {
    if (at_punct(text)) {
      const SourceSpan span = next().span;
      return Expr::binary_op(op, lhs, add_expr(), span);
    }
  }
  return lhs;
}

ExprPtr Parser::add_expr() {
  ExprPtr lhs = mul_expr();
  while (at_punct("+") || at_punct("-")) {
    const Token& t = next();
    const BinaryOp op = t.text == "+" ? BinaryOp::kAdd : BinaryOp::kSub;
    lhs = Expr::binary_op(op, lhs, mul_expr(), t.span);
  }
  return lhs;
}

ExprPtr Parser::mul_expr() {
  ExprPtr lhs = unary_expr();
  while (at_punct("*")) {
    const SourceSpan span = next().span;
    lhs = Expr::binary_op(BinaryOp::kMul, lhs, unary_expr(), span);
  }
  return lhs;
}

ExprPtr Parser::unary_expr() {
  if (at_punct("!")) {
    const SourceSpan span = next().span;
    return Expr::unary_op(UnaryOp::kNot, unary_expr(), span);
  }
  if (at_punct("-")) {
    const SourceSpan span = next().span;
    return Expr::unary_op(UnaryOp::kNeg, unary_expr(), span);
  }
  return primary_expr();
}

ExprPtr Parser::primary_expr() {
  const Token& t = peek();
  if (t.kind == Token::Kind::kInt) {
    next();
    return Expr::int_lit(t.value, t.span);
  }
  if (at_ident("true") || at_ident("false")) {
    next();
    return Expr::bool_lit(t.text == "true", t.span);
  }
  if (at_ident("old") && at_punct("(", 1)) {
    next();
    next();
    const SourceSpan span = peek().span;
    std::string name = expect_ident("variable name inside old()");
    expect_punct(")");
    var_refs_.push_back({name, span});
    return Expr::old(std::move(name), t.span);
  }
  if (t.kind == Token::Kind::kIdent && !is_reserved(t.text)) {
    next();
    var_refs_.push_back({t.text, t.span});
    return Expr::var(t.text, t.primed ? 1 : 0, t.span);
  }
  if (at_punct("(")) {
    next();
    ExprPtr e = expr();
    expect_punct(")");
    return e;
  }
  fail("expected expression" + found());
}

bool Parser::regex_seq_ends() const {
  return at_end() || at_punct(")") || at_punct("|") || at_ident("if") || at_ident("trace") || at_ident("requires") ||
         at_ident("ensures") || at_ident("modifies");
}

Regex Parser::regex() {
  std::vector<Regex> alts{regex_seq()};
  while (at_punct("|")) {
    next();
    alts.push_back(regex_seq());
  }
  return alts.size() == 1 ? alts.front() : mk_choice(std::move(alts));
}

Regex Parser::regex_seq() {
  std::vector<Regex> parts;
  while (!regex_seq_ends()) parts.push_back(regex_postfix());
  if (parts.empty()) fail("expected regular expression" + found());
  return mk_sequence(parts);
}

Regex Parser::regex_postfix() {
  Regex r = regex_atom();
  for (;;) {
    if (at_punct("*")) {
      next();
      r = mk_star(r);
    } else if (at_punct("+")) {
      next();
      r = mk_plus(r);
    } else {
      return r;
    }
  }
}

Regex Parser::regex_atom() {
  const Token& t = peek();
  if (at_punct("(")) {
    next();
    if (at_punct(")")) {
      next();
      return Regex::epsilon();
    }
    Regex r = regex();
    expect_punct(")");
    return r;
  }
  if (at_punct("{")) {
    next();
    expect_punct("}");
    return Regex::empty();
  }
  if (t.kind == Token::Kind::kIdent && !t.primed && !is_reserved(t.text)) {
    next();
    if (regex_alphabet_ && !regex_alphabet_->count(Event(t.text))) {
      throw SyntaxFailure{t.span, "undeclared event '" + t.text + "'"};
    }
    event_refs_.push_back({t.text, t.span});
    return Regex::symbol(Event(t.text));
  }
  fail("expected event, '(' or '{}'" + found());
}

TraceClause Parser::trace_clause() {
  TraceClause clause;
  clause.span = peek().span;
  clause.regex = regex();
  if (at_ident("if")) {
    next();
    clause.guard = expr();
  }
  return clause;
}

void Parser::note_duplicate(const std::string& name, SourceSpan span) {
  diags_.push_back({DiagnosticKind::kDuplicateName, span, "duplicate name '" + name + "'"});
}

void Parser::declare_local(const std::string& name, Type t, SourceSpan span) {
  if (name == "result" || proc_->locals.count(name) || program_.find_global(name) || program_.find_constant(name)) {
    note_duplicate(name, span);
    return;
  }
  proc_->locals.emplace(name, t);
}

CommandPtr Parser::block() {
  auto c = std::make_shared<Command>();
  c->kind = Command::Kind::kBlock;
  c->span = peek().span;
  expect_punct("{");
  while (!at_punct("}")) {
    if (at_end()) fail("expected '}'" + found());
    c->body.push_back(statement());
  }
  next();
  return c;
}

CommandPtr Parser::call_or_assign(std::optional<Type> declared, std::string target, SourceSpan span) {
  auto c = std::make_shared<Command>();
  c->span = span;
  c->target = std::move(target);
  c->declared = declared;
  if (peek().kind == Token::Kind::kIdent && at_punct("(", 1)) {
    const std::string callee = next().text;
    next();
    if (callee == "nondet" && !user_procedures_.count("nondet")) {
      expect_punct(")");
      c->kind = Command::Kind::kHavoc;
      c->via_nondet = true;
      return c;
    }
    c->kind = Command::Kind::kCall;
    c->callee = callee;
    if (callee == "abort" && !user_procedures_.count("abort")) need_abort_ = true;
    if (!at_punct(")")) {
      c->args.push_back(expr());
      while (optional_punct(",")) c->args.push_back(expr());
    }
    expect_punct(")");
    return c;
  }
  c->kind = Command::Kind::kAssign;
  c->value = expr();
  return c;
}

CommandPtr Parser::annotation_statement() {
  const SourceSpan span = next().span;  // "_("
  auto c = std::make_shared<Command>();
  c->span = span;
  if (at_ident("emit")) {
    next();
    c->kind = Command::Kind::kEmit;
    const Token& t = peek();
    c->event = Event(expect_ident("event name"));
    event_refs_.push_back({t.text, t.span});
  } else if (at_ident("assert")) {
    next();
    c->kind = Command::Kind::kAssert;
    c->value = expr();
  } else if (at_ident("unreachable")) {
    next();
    c->kind = Command::Kind::kAbort;
  } else if (at_ident("spec")) {
    next();
    c->kind = Command::Kind::kSpec;
    while (!at_punct(")")) {
      if (at_ident("modifies")) {
        next();
        const Token& t = peek();
        c->mods.push_back(expect_ident("variable name"));
        var_refs_.push_back({t.text, t.span});
        while (optional_punct(",")) {
          const Token& u = peek();
          c->mods.push_back(expect_ident("variable name"));
          var_refs_.push_back({u.text, u.span});
        }
      } else if (at_ident("requires")) {
        next();
        if (c->guard) fail("duplicate requires clause");
        c->guard = expr();
      } else if (at_ident("ensures")) {
        next();
        if (c->relation) fail("duplicate ensures clause");
        c->relation = expr();
      } else if (at_ident("trace")) {
        next();
        c->trace.clauses.push_back(trace_clause());
      } else {
        fail("expected modifies, requires, ensures or trace" + found());
      }
    }
  } else {
    fail("expected emit, assert, unreachable or spec" + found());
  }
  expect_punct(")");
  optional_punct(";");
  return c;
}

CommandPtr Parser::statement() {
  const Token& t = peek();
  const SourceSpan span = t.span;
  if (at_punct("{")) return block();
  if (t.kind == Token::Kind::kAnnot) return annotation_statement();
  if (at_ident("if")) {
    next();
    auto c = std::make_shared<Command>();
    c->kind = Command::Kind::kIf;
    c->span = span;
    expect_punct("(");
    c->value = expr();
    expect_punct(")");
    c->then_branch = statement();
    if (at_ident("else")) {
      next();
      c->else_branch = statement();
    }
    return c;
  }
  if (at_ident("while")) {
    next();
    auto c = std::make_shared<Command>();
    c->kind = Command::Kind::kWhile;
    c->span = span;
    expect_punct("(");
    c->value = expr();
    expect_punct(")");
    while (peek().kind == Token::Kind::kAnnot) {
      next();
      if (at_ident("invariant")) {
        next();
        c->invariants.push_back(expr());
      } else if (at_ident("trace")) {
        next();
        const bool local = at_ident("local");
        if (local) next();
        if (!c->trace.clauses.empty() && local != c->trace.local) {
          fail("cannot mix local and history trace annotations on one loop");
        }
        c->trace.local = local;
        TraceClause clause = trace_clause();
        if (local && (clause.guard || c->trace.clauses.size() == 1)) {
          throw SyntaxFailure{clause.span, "a local loop trace is a single unconditional expression"};
        }
        c->trace.clauses.push_back(std::move(clause));
      } else {
        fail("expected invariant or trace" + found());
      }
      expect_punct(")");
    }
    c->loop_body = statement();
    return c;
  }
  if (at_ident("return")) {
    next();
    auto c = std::make_shared<Command>();
    c->kind = Command::Kind::kReturn;
    c->span = span;
    if (!at_punct(";")) c->value = expr();
    expect_punct(";");
    return c;
  }
  if (auto type = peek_type()) {
    if (*type == Type::kVoid) fail("local variables cannot be void");
    next();
    const SourceSpan name_span = peek().span;
    std::string name = expect_ident("variable name");
    declare_local(name, *type, name_span);
    CommandPtr c;
    if (optional_punct("=")) {
      c = call_or_assign(type, std::move(name), span);
    } else {
      auto h = std::make_shared<Command>();
      h->kind = Command::Kind::kHavoc;
      h->span = span;
      h->target = std::move(name);
      h->declared = type;
      c = h;
    }
    expect_punct(";");
    return c;
  }
  if (t.kind == Token::Kind::kIdent && !t.primed && !is_reserved(t.text)) {
    if (at_punct("(", 1)) {
      CommandPtr c = call_or_assign(std::nullopt, "", span);
      if (c->kind == Command::Kind::kHavoc) throw SyntaxFailure{span, "nondet() result must be assigned"};
      expect_punct(";");
      return c;
    }
    next();
    var_refs_.push_back({t.text, t.span});
    expect_punct("=");
    CommandPtr c = call_or_assign(std::nullopt, t.text, span);
    expect_punct(";");
    return c;
  }
  fail("expected statement" + found());
}

void Parser::procedure(Type ret, std::string name, SourceSpan span) {
  program_.procedures.emplace_back();
  Procedure& p = program_.procedures.back();
  proc_ = &p;
  var_refs_.clear();
  p.name = std::move(name);
  p.return_type = ret;
  p.span = span;
  expect_punct("(");
  if (at_ident("void") && at_punct(")", 1)) next();
  if (!at_punct(")")) {
    for (;;) {
      auto type = peek_type();
      if (!type || *type == Type::kVoid) fail("expected parameter type" + found());
      next();
      Param prm;
      prm.type = *type;
      prm.span = peek().span;
      prm.name = expect_ident("parameter name");
      declare_local(prm.name, prm.type, prm.span);
      p.params.push_back(prm);
      if (!optional_punct(",")) break;
    }
  }
  expect_punct(")");
  if (ret != Type::kVoid) p.locals.emplace("result", ret);
  while (peek().kind == Token::Kind::kAnnot) {
    next();
    if (at_ident("requires")) {
      next();
      p.requires_clauses.push_back(expr());
    } else if (at_ident("ensures")) {
      next();
      p.ensures_clauses.push_back(expr());
    } else if (at_ident("modifies")) {
      next();
      p.modifies.push_back(expect_ident("variable name"));
      while (optional_punct(",")) p.modifies.push_back(expect_ident("variable name"));
    } else if (at_ident("trace")) {
      next();
      p.trace.clauses.push_back(trace_clause());
    } else {
      fail("expected requires, ensures, modifies or trace" + found());
    }
    expect_punct(")");
  }
  if (at_punct("{")) {
    p.body = block();
  } else {
    expect_punct(";");
  }
  for (const auto& ref : var_refs_) {
    if (!program_.type_of(p, ref.name)) {
      diags_.push_back({DiagnosticKind::kUndeclaredVariable, ref.span, "undeclared variable '" + ref.name + "'"});
    }
  }
  proc_ = nullptr;
}

void Parser::prescan_procedures() {
  int depth = 0;
  for (std::size_t i = 0; i + 2 < toks_.size(); ++i) {
    const Token& t = toks_[i];
    if (t.kind == Token::Kind::kPunct && t.text == "{") ++depth;
    if (t.kind == Token::Kind::kPunct && t.text == "}") --depth;
    if (depth != 0 || t.kind != Token::Kind::kIdent) continue;
    if (t.text != "void" && t.text != "bool" && t.text != "int") continue;
    const Token& n = toks_[i + 1];
    const Token& paren = toks_[i + 2];
    if (n.kind == Token::Kind::kIdent && paren.kind == Token::Kind::kPunct && paren.text == "(") {
      user_procedures_.insert(n.text);
    }
  }
}

void Parser::top_level_item() {
  const SourceSpan span = peek().span;
  if (at_ident("events")) {
    next();
    for (;;) {
      const SourceSpan es = peek().span;
      std::string name = expect_ident("event name");
      if (program_.alphabet().count(Event(name))) {
        note_duplicate(name, es);
      } else {
        program_.events.push_back({Event(std::move(name)), es});
      }
      if (!optional_punct(",")) break;
    }
    expect_punct(";");
    return;
  }
  if (at_ident("const")) {
    next();
    expect_keyword("int");
    const SourceSpan ns = peek().span;
    std::string name = expect_ident("constant name");
    expect_punct("=");
    bool negative = optional_punct("-");
    if (peek().kind != Token::Kind::kInt) fail("expected integer literal" + found());
    std::int64_t value = next().value;
    if (negative) value = -value;
    expect_punct(";");
    if (!top_names_.insert(name).second) {
      note_duplicate(name, ns);
    } else {
      program_.constants.push_back({std::move(name), value, ns});
    }
    return;
  }
  auto type = peek_type();
  if (!type) fail("expected declaration" + found());
  next();
  const SourceSpan ns = peek().span;
  std::string name = expect_ident("name");
  if (at_punct("(")) {
    if (!top_names_.insert(name).second) note_duplicate(name, ns);
    procedure(*type, std::move(name), span);
    return;
  }
  if (*type == Type::kVoid) fail("global variables cannot be void");
  expect_punct(";");
  if (name == "result" || !top_names_.insert(name).second) {
    note_duplicate(name, ns);
  } else {
    program_.globals.push_back({*type, std::move(name), ns});
  }
}

Program Parser::parse_program() {
  prescan_procedures();
  while (!at_end()) top_level_item();
  if (need_abort_) {
    Procedure abort_proc;
    abort_proc.name = "abort";
    abort_proc.builtin = true;
    abort_proc.ensures_clauses.push_back(Expr::bool_lit(false));
    program_.procedures.push_back(std::move(abort_proc));
  }
  const Alphabet alphabet = program_.alphabet();
  for (const auto& ref : event_refs_) {
    if (!alphabet.count(Event(ref.name))) {
      diags_.push_back({DiagnosticKind::kUndeclaredEvent, ref.span, "undeclared event '" + ref.name + "'"});
    }
  }
  for (const auto& p : program_.procedures) {
    if (p.name == "main" && p.has_body()) program_.entry = "main";
  }
  if (program_.entry.empty()) {
    for (const auto& p : program_.procedures) {
      if (p.has_body()) program_.entry = p.name;
    }
  }
  if (!diags_.empty()) {
    std::stable_sort(diags_.begin(), diags_.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.span.line, a.span.column) < std::tie(b.span.line, b.span.column);
    });
    throw ProgramError(diags_);
  }
  return std::move(program_);
}

Regex Parser::parse_regex_only(const Alphabet* alphabet) {
  regex_alphabet_ = alphabet;
  Regex r = regex();
  if (!at_end()) fail("unexpected trailing input" + found());
  return r;
}

ExprPtr Parser::parse_expr_only() {
  ExprPtr e = expr();
  if (!at_end()) fail("unexpected trailing input" + found());
  return e;
}

// ---------------------------------------------------------------------------
// Resolution

bool is_constant_expr(const Program& p, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
      return true;
    case Expr::Kind::kVar:
      return e.prime == 0 && p.find_constant(e.name) != nullptr;
    case Expr::Kind::kUnary:
      return e.unary == UnaryOp::kNeg && is_constant_expr(p, *e.lhs);
    case Expr::Kind::kBinary:
      return (e.binary == BinaryOp::kAdd || e.binary == BinaryOp::kSub || e.binary == BinaryOp::kMul) &&
             is_constant_expr(p, *e.lhs) && is_constant_expr(p, *e.rhs);
    default:
      return false;
  }
}

struct ExprContext {
  bool allow_old = false;
  bool allow_prime = false;
  bool allow_result = false;
};

class Resolver {
 public:
  explicit Resolver(const Program& p) : p_(p) {}

  std::vector<Diagnostic> run() {
    for (const auto& proc : p_.procedures) check_procedure(proc);
    return std::move(diags_);
  }

 private:
  void error(DiagnosticKind k, SourceSpan span, std::string msg) { diags_.push_back({k, span, std::move(msg)}); }

  std::optional<Type> type_of(const Expr& e, const ExprContext& ctx) {
    switch (e.kind) {
      case Expr::Kind::kBoolLit:
        return Type::kBool;
      case Expr::Kind::kIntLit:
        return Type::kInt;
      case Expr::Kind::kVar: {
        if (e.name == "result" && !ctx.allow_result) {
          error(DiagnosticKind::kTypeError, e.span, "'result' is only available in postconditions");
          return std::nullopt;
        }
        if (e.prime && !ctx.allow_prime) {
          error(DiagnosticKind::kTypeError, e.span, "primed variable outside a specification statement");
          return std::nullopt;
        }
        auto t = p_.type_of(*proc_, e.name);
        if (!t) error(DiagnosticKind::kUndeclaredVariable, e.span, "undeclared variable '" + e.name + "'");
        return t;
      }
      case Expr::Kind::kOld: {
        if (!ctx.allow_old) {
          error(DiagnosticKind::kTypeError, e.span, "old() is only available in procedure postconditions");
          return std::nullopt;
        }
        return p_.type_of(*proc_, e.name);
      }
      case Expr::Kind::kUnary: {
        auto t = type_of(*e.lhs, ctx);
        const Type want = e.unary == UnaryOp::kNot ? Type::kBool : Type::kInt;
        if (t && *t != want) {
          error(DiagnosticKind::kTypeError, e.span, std::string("operand must be ") + to_string(want));
          return std::nullopt;
        }
        return want;
      }
      case Expr::Kind::kBinary: {
        auto l = type_of(*e.lhs, ctx);
        auto r = type_of(*e.rhs, ctx);
        if (!l || !r) return std::nullopt;
        switch (e.binary) {
          case BinaryOp::kImplies:
          case BinaryOp::kOr:
          case BinaryOp::kAnd:
            if (*l != Type::kBool || *r != Type::kBool) {
              error(DiagnosticKind::kTypeError, e.span, "logical operator needs bool operands");
              return std::nullopt;
            }
            return Type::kBool;
          case BinaryOp::kEq:
          case BinaryOp::kNe:
            if (*l != *r) {
              error(DiagnosticKind::kTypeError, e.span, "comparison of bool with int");
              return std::nullopt;
            }
            return Type::kBool;
          case BinaryOp::kLt:
          case BinaryOp::kLe:
          case BinaryOp::kGt:
          case BinaryOp::kGe:
            if (*l != Type::kInt || *r != Type::kInt) {
              error(DiagnosticKind::kTypeError, e.span, "ordering needs int operands");
              return std::nullopt;
            }
            return Type::kBool;
          case BinaryOp::kMul:
            if (!is_constant_expr(p_, *e.lhs) && !is_constant_expr(p_, *e.rhs)) {
              error(DiagnosticKind::kTypeError, e.span, "nonlinear multiplication");
              return std::nullopt;
            }
            [[fallthrough]];
          case BinaryOp::kAdd:
          case BinaryOp::kSub:
            if (*l != Type::kInt || *r != Type::kInt) {
              error(DiagnosticKind::kTypeError, e.span, "arithmetic needs int operands");
              return std::nullopt;
            }
            return Type::kInt;
        }
      }
    }
    return std::nullopt;
  }

  void expect_type(const Expr& e, Type want, const ExprContext& ctx, const char* what) {
    auto t = type_of(e, ctx);
    if (t && *t != want) {
      error(DiagnosticKind::kTypeError, e.span, std::string(what) + " must be " + to_string(want));
    }
  }

  void check_trace(const TraceAnnotation& trace, const ExprContext& ctx) {
    for (const auto& clause : trace.clauses) {
      if (clause.guard) expect_type(*clause.guard, Type::kBool, ctx, "trace guard");
    }
  }

  void check_assign_target(const std::string& name, SourceSpan span) {
    if (p_.find_constant(name)) {
      error(DiagnosticKind::kTypeError, span, "cannot assign constant '" + name + "'");
    }
    for (const auto& prm : proc_->params) {
      if (prm.name == name) error(DiagnosticKind::kTypeError, span, "cannot assign parameter '" + name + "'");
    }
    if (name == "result") error(DiagnosticKind::kTypeError, span, "assign 'result' with a return statement");
  }

  void check_command(const Command& c, bool last_in_body) {
    const ExprContext plain;
    switch (c.kind) {
      case Command::Kind::kSpec: {
        ExprContext rel;
        rel.allow_prime = true;
        for (const auto& m : c.mods) check_assign_target(m, c.span);
        if (c.guard) expect_type(*c.guard, Type::kBool, plain, "requires clause");
        if (c.relation) expect_type(*c.relation, Type::kBool, rel, "ensures clause");
        check_trace(c.trace, plain);
        break;
      }
      case Command::Kind::kEmit:
      case Command::Kind::kAbort:
        break;
      case Command::Kind::kAssert:
        expect_type(*c.value, Type::kBool, plain, "assertion");
        break;
      case Command::Kind::kAssign: {
        check_assign_target(c.target, c.span);
        auto target = p_.type_of(*proc_, c.target);
        auto value = type_of(*c.value, plain);
        if (target && value && *target != *value) {
          error(DiagnosticKind::kTypeError, c.span, "cannot assign " + std::string(to_string(*value)) + " to " +
                                                        to_string(*target) + " variable '" + c.target + "'");
        }
        break;
      }
      case Command::Kind::kHavoc:
        check_assign_target(c.target, c.span);
        break;
      case Command::Kind::kBlock:
        for (std::size_t i = 0; i < c.body.size(); ++i) {
          check_command(*c.body[i], last_in_body && i + 1 == c.body.size());
        }
        break;
      case Command::Kind::kIf:
        expect_type(*c.value, Type::kBool, plain, "if test");
        check_command(*c.then_branch, false);
        if (c.else_branch) check_command(*c.else_branch, false);
        break;
      case Command::Kind::kWhile:
        expect_type(*c.value, Type::kBool, plain, "loop test");
        for (const auto& inv : c.invariants) expect_type(*inv, Type::kBool, plain, "loop invariant");
        check_trace(c.trace, plain);
        check_command(*c.loop_body, false);
        break;
      case Command::Kind::kCall: {
        const Procedure* callee = p_.find_procedure(c.callee);
        if (!callee) {
          error(DiagnosticKind::kUnboundName, c.span, "call to undeclared procedure '" + c.callee + "'");
          break;
        }
        if (callee->params.size() != c.args.size()) {
          error(DiagnosticKind::kTypeError, c.span,
                "'" + c.callee + "' expects " + std::to_string(callee->params.size()) + " argument(s)");
        } else {
          for (std::size_t i = 0; i < c.args.size(); ++i) {
            expect_type(*c.args[i], callee->params[i].type, plain, "argument");
          }
        }
        if (!c.target.empty()) {
          check_assign_target(c.target, c.span);
          auto target = p_.type_of(*proc_, c.target);
          if (callee->return_type == Type::kVoid) {
            error(DiagnosticKind::kTypeError, c.span, "'" + c.callee + "' returns no value");
          } else if (target && *target != callee->return_type) {
            error(DiagnosticKind::kTypeError, c.span, "return type mismatch in call to '" + c.callee + "'");
          }
        }
        break;
      }
      case Command::Kind::kReturn:
        if (!last_in_body) error(DiagnosticKind::kTypeError, c.span, "return must be the final statement");
        if (proc_->return_type == Type::kVoid) {
          if (c.value) error(DiagnosticKind::kTypeError, c.span, "void procedure returns a value");
        } else if (!c.value) {
          error(DiagnosticKind::kTypeError, c.span, "missing return value");
        } else {
          expect_type(*c.value, proc_->return_type, plain, "return value");
        }
        break;
    }
  }

  void check_procedure(const Procedure& proc) {
    proc_ = &proc;
    const ExprContext pre;
    ExprContext post;
    post.allow_old = true;
    post.allow_result = true;
    for (const auto& r : proc.requires_clauses) expect_type(*r, Type::kBool, pre, "precondition");
    for (const auto& e : proc.ensures_clauses) expect_type(*e, Type::kBool, post, "postcondition");
    check_trace(proc.trace, pre);
    for (const auto& m : proc.modifies) {
      if (!p_.find_global(m)) {
        error(DiagnosticKind::kUnboundName, proc.span, "'" + m + "' in modifies clause is not a global variable");
      }
    }
    if (proc.body) {
      check_command(*proc.body, true);
      const std::set<std::string> written = modified_vars(p_, *proc.body);
      for (const auto& w : written) {
        if (!p_.find_global(w)) continue;
        if (std::find(proc.modifies.begin(), proc.modifies.end(), w) == proc.modifies.end()) {
          error(DiagnosticKind::kModifiesViolation, proc.span,
                "'" + proc.name + "' writes global '" + w + "' missing from its modifies clause");
        }
      }
    }
    proc_ = nullptr;
  }

  const Program& p_;
  const Procedure* proc_ = nullptr;
  std::vector<Diagnostic> diags_;
};

// ---------------------------------------------------------------------------
// Printing

int expr_prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kBinary:
      switch (e.binary) {
        case BinaryOp::kImplies: return 1;
        case BinaryOp::kOr: return 2;
        case BinaryOp::kAnd: return 3;
        case BinaryOp::kEq:
        case BinaryOp::kNe: return 4;
        case BinaryOp::kLt:
        case BinaryOp::kLe:
        case BinaryOp::kGt:
        case BinaryOp::kGe: return 5;
        case BinaryOp::kAdd:
        case BinaryOp::kSub: return 6;
        case BinaryOp::kMul: return 7;
      }
      return 0;
    case Expr::Kind::kUnary:
      return 8;
    default:
      return 9;
  }
}

const char* binary_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::kImplies: return " ==> ";
    case BinaryOp::kOr: return " || ";
    case BinaryOp::kAnd: return " && ";
    case BinaryOp::kEq: return " == ";
    case BinaryOp::kNe: return " != ";
    case BinaryOp::kLt: return " < ";
    case BinaryOp::kLe: return " <= ";
    case BinaryOp::kGt: return " > ";
    case BinaryOp::kGe: return " >= ";
    case BinaryOp::kAdd: return " + ";
    case BinaryOp::kSub: return " - ";
    case BinaryOp::kMul: return " * ";
  }
  return " ? ";
}

void print_expr(const Expr& e, std::string& out) {
  auto child = [&](const Expr& c, bool parens) {
    if (parens) out += '(';
    print_expr(c, out);
    if (parens) out += ')';
  };
  switch (e.kind) {
    case Expr::Kind::kBoolLit:
      out += e.bool_value ? "true" : "false";
      return;
    case Expr::Kind::kIntLit:
      out += std::to_string(e.int_value);
      return;
    case Expr::Kind::kVar:
      out += e.name;
      if (e.prime) out += '\'';
      return;
    case Expr::Kind::kOld:
      out += "old(" + e.name + ")";
      return;
    case Expr::Kind::kUnary:
      out += e.unary == UnaryOp::kNot ? "!" : "-";
      child(*e.lhs, expr_prec(*e.lhs) < 8);
      return;
    case Expr::Kind::kBinary: {
      const int p = expr_prec(e);
      const int lp = expr_prec(*e.lhs);
      const int rp = expr_prec(*e.rhs);
      const bool right_assoc = e.binary == BinaryOp::kImplies;
      const bool non_assoc = p == 4 || p == 5;
      child(*e.lhs, lp < p || (lp == p && (right_assoc || non_assoc)));
      out += binary_text(e.binary);
      child(*e.rhs, rp < p || (rp == p && !right_assoc));
      return;
    }
  }
}

std::string clause_text(const TraceClause& c) {
  std::string out = c.regex.to_string();
  if (c.guard) out += " if " + to_string(*c.guard);
  return out;
}

void print_command_into(const Command& c, int indent, std::string& out);

void print_block_or_stmt(const Command& c, int indent, std::string& out) { print_command_into(c, indent, out); }

void print_command_into(const Command& c, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  switch (c.kind) {
    case Command::Kind::kBlock:
      out += pad + "{\n";
      for (const auto& s : c.body) print_command_into(*s, indent + 1, out);
      out += pad + "}\n";
      return;
    case Command::Kind::kEmit:
      out += pad + "_(emit " + c.event.name() + ");\n";
      return;
    case Command::Kind::kAbort:
      out += pad + "_(unreachable);\n";
      return;
    case Command::Kind::kAssert:
      out += pad + "_(assert " + to_string(*c.value) + ");\n";
      return;
    case Command::Kind::kSpec: {
      out += pad + "_(spec";
      if (!c.mods.empty()) {
        out += " modifies ";
        for (std::size_t i = 0; i < c.mods.size(); ++i) out += (i ? ", " : "") + c.mods[i];
      }
      if (c.guard) out += " requires " + to_string(*c.guard);
      if (c.relation) out += " ensures " + to_string(*c.relation);
      for (const auto& cl : c.trace.clauses) out += " trace " + clause_text(cl);
      out += ");\n";
      return;
    }
    case Command::Kind::kAssign:
    case Command::Kind::kHavoc:
    case Command::Kind::kCall: {
      out += pad;
      if (c.declared) out += std::string(to_string(*c.declared)) + " ";
      if (!c.target.empty()) out += c.target;
      if (c.kind == Command::Kind::kAssign) {
        out += " = " + to_string(*c.value);
      } else if (c.kind == Command::Kind::kHavoc) {
        if (c.via_nondet) out += " = nondet()";
      } else {
        if (!c.target.empty()) out += " = ";
        out += c.callee + "(";
        for (std::size_t i = 0; i < c.args.size(); ++i) out += (i ? ", " : "") + to_string(*c.args[i]);
        out += ")";
      }
      out += ";\n";
      return;
    }
    case Command::Kind::kReturn:
      out += pad + "return";
      if (c.value) out += " " + to_string(*c.value);
      out += ";\n";
      return;
    case Command::Kind::kIf:
      out += pad + "if (" + to_string(*c.value) + ")\n";
      print_block_or_stmt(*c.then_branch, c.then_branch->kind == Command::Kind::kBlock ? indent : indent + 1, out);
      if (c.else_branch && c.else_branch->kind == Command::Kind::kIf) {
        std::string chained;
        print_command_into(*c.else_branch, indent, chained);
        out += pad + "else " + chained.substr(pad.size());
      } else if (c.else_branch) {
        out += pad + "else\n";
        print_block_or_stmt(*c.else_branch, c.else_branch->kind == Command::Kind::kBlock ? indent : indent + 1, out);
      }
      return;
    case Command::Kind::kWhile:
      out += pad + "while (" + to_string(*c.value) + ")\n";
      for (const auto& inv : c.invariants) out += pad + "  _(invariant " + to_string(*inv) + ")\n";
      for (const auto& cl : c.trace.clauses) {
        out += pad + "  _(trace " + std::string(c.trace.local ? "local " : "") + clause_text(cl) + ")\n";
      }
      print_block_or_stmt(*c.loop_body, c.loop_body->kind == Command::Kind::kBlock ? indent : indent + 1, out);
      return;
  }
}

void collect_modified(const Program& p, const Command& c, std::set<std::string>& out) {
  switch (c.kind) {
    case Command::Kind::kSpec:
      out.insert(c.mods.begin(), c.mods.end());
      return;
    case Command::Kind::kAssign:
    case Command::Kind::kHavoc:
      out.insert(c.target);
      return;
    case Command::Kind::kCall:
      if (!c.target.empty()) out.insert(c.target);
      if (const Procedure* callee = p.find_procedure(c.callee)) {
        out.insert(callee->modifies.begin(), callee->modifies.end());
      }
      return;
    case Command::Kind::kReturn:
      if (c.value) out.insert("result");
      return;
    case Command::Kind::kBlock:
      for (const auto& s : c.body) collect_modified(p, *s, out);
      return;
    case Command::Kind::kIf:
      collect_modified(p, *c.then_branch, out);
      if (c.else_branch) collect_modified(p, *c.else_branch, out);
      return;
    case Command::Kind::kWhile:
      collect_modified(p, *c.loop_body, out);
      return;
    default:
      return;
  }
}

std::vector<Token> lex_or_throw(std::string_view text) {
  try {
    return lex(text);
  } catch (const SyntaxFailure& f) {
    throw ProgramError({{DiagnosticKind::kSyntaxError, f.span, f.message}});
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print_expr(e, out);
  return out;
}

std::string print_command(const Command& c, int indent) {
  std::string out;
  print_command_into(c, indent, out);
  return out;
}

std::set<std::string> modified_vars(const Program& program, const Command& c) {
  std::set<std::string> out;
  collect_modified(program, c, out);
  return out;
}

std::string print_program(const Program& p) {
  std::string out;
  if (!p.events.empty()) {
    out += "events ";
    for (std::size_t i = 0; i < p.events.size(); ++i) out += (i ? ", " : "") + p.events[i].event.name();
    out += ";\n";
  }
  for (const auto& c : p.constants) out += "const int " + c.name + " = " + std::to_string(c.value) + ";\n";
  for (const auto& g : p.globals) out += std::string(to_string(g.type)) + " " + g.name + ";\n";
  for (const auto& proc : p.procedures) {
    if (proc.builtin) continue;
    out += "\n" + std::string(to_string(proc.return_type)) + " " + proc.name + "(";
    for (std::size_t i = 0; i < proc.params.size(); ++i) {
      out += (i ? ", " : "") + std::string(to_string(proc.params[i].type)) + " " + proc.params[i].name;
    }
    out += ")\n";
    for (const auto& r : proc.requires_clauses) out += "  _(requires " + to_string(*r) + ")\n";
    if (!proc.modifies.empty()) {
      out += "  _(modifies ";
      for (std::size_t i = 0; i < proc.modifies.size(); ++i) out += (i ? ", " : "") + proc.modifies[i];
      out += ")\n";
    }
    for (const auto& e : proc.ensures_clauses) out += "  _(ensures " + to_string(*e) + ")\n";
    for (const auto& cl : proc.trace.clauses) out += "  _(trace " + clause_text(cl) + ")\n";
    if (proc.body) {
      out += print_command(*proc.body, 0);
    } else {
      out += ";\n";
    }
  }
  return out;
}

Program parse_program(std::string_view source) {
  Parser parser(lex_or_throw(source));
  try {
    return parser.parse_program();
  } catch (const SyntaxFailure& f) {
    throw ProgramError({{DiagnosticKind::kSyntaxError, f.span, f.message}});
  }
}

Program resolve(Program program) {
  std::vector<Diagnostic> diags = Resolver(program).run();
  if (!diags.empty()) throw ProgramError(std::move(diags));
  return program;
}

Program load_program(std::string_view source) { return resolve(parse_program(source)); }

Regex parse_regex(std::string_view text, const Alphabet* alphabet) {
  Parser parser(lex_or_throw(text));
  try {
    return parser.parse_regex_only(alphabet);
  } catch (const SyntaxFailure& f) {
    const DiagnosticKind kind = f.message.rfind("undeclared event", 0) == 0 ? DiagnosticKind::kUndeclaredEvent
                                                                            : DiagnosticKind::kSyntaxError;
    throw ProgramError({{kind, f.span, f.message}});
  }
}

ExprPtr parse_expr(std::string_view text) {
  Parser parser(lex_or_throw(text));
  try {
    return parser.parse_expr_only();
  } catch (const SyntaxFailure& f) {
    throw ProgramError({{DiagnosticKind::kSyntaxError, f.span, f.message}});
  }
}

}  // namespace regtrace
