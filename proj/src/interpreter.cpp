#include "regtrace/interpreter.hpp"

#include <functional>
#include <map>
#include <set>

namespace regtrace {

namespace {
constexpr int kMaxRestarts = 4096;
constexpr std::size_t kRedraws = 16;
}  // namespace

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kStopped: return "stopped";
    case Outcome::kAborted: return "aborted";
    case Outcome::kFuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

namespace {

// Bounded draws computed by hand so that runs replay identically on every
// standard library implementation.
template <typename G>
std::uint64_t draw_below(G& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

template <typename G>
std::int64_t draw_between(G& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(draw_below(rng, static_cast<std::uint64_t>(hi - lo) + 1));
}

template <typename G>
bool draw_coin(G& rng) {
  return (rng() >> 63) != 0;
}

template <typename G>
Trace random_word(const Regex& u, G& rng, std::size_t soft_limit) {
  Trace w;
  Regex cur = u;
  for (;;) {
    if (w.size() >= soft_limit) {
      if (auto rest = shortest_word(cur)) w.insert(w.end(), rest->begin(), rest->end());
      return w;
    }
    const std::set<Event> heads = first(cur);
    if (heads.empty() || (cur.nullable() && draw_below(rng, 3) == 0)) return w;
    auto it = heads.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(draw_below(rng, heads.size())));
    w.push_back(*it);
    cur = derive(*it, cur);
  }
}

/// Random draws of one run, replayable up to a chosen point. When a run
/// diverges, the run is repeated with the draws before the most recent
/// choices kept and the rest drawn afresh.
class ChoiceSource {
 public:
  explicit ChoiceSource(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t operator()() {
    const std::uint64_t v = pos_ < forced_.size() ? forced_[pos_] : rng_();
    ++pos_;
    drawn_.push_back(v);
    return v;
  }

  /// Marks the start of one logical choice.
  void mark() { marks_.push_back(drawn_.size()); }

  std::size_t choices() const { return marks_.size(); }

  /// Keeps the draws made before the k-th most recent choice.
  void backtrack(std::size_t k) {
    const std::size_t keep = k <= marks_.size() ? marks_[marks_.size() - k] : 0;
    forced_.assign(drawn_.begin(), drawn_.begin() + static_cast<std::ptrdiff_t>(keep));
    drawn_.clear();
    marks_.clear();
    pos_ = 0;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::uint64_t> forced_;
  std::vector<std::uint64_t> drawn_;
  std::vector<std::size_t> marks_;
  std::size_t pos_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct AbortSignal {
  std::string note;
};
struct OutOfFuel {
  std::string note;
};
struct Diverged {
  std::string note;
};

using Lookup = std::function<Value(const std::string& name, int prime, bool old)>;

template <typename Op>
std::int64_t checked(Op op, std::int64_t a, std::int64_t b) {
  std::int64_t out = 0;
  if (op(a, b, &out)) throw OutOfFuel{"integer overflow"};
  return out;
}

bool add_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_add_overflow(a, b, r); }
bool sub_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_sub_overflow(a, b, r); }
bool mul_ovf(std::int64_t a, std::int64_t b, std::int64_t* r) { return __builtin_mul_overflow(a, b, r); }

Value eval(const Program& p, const Expr& e, const Lookup& lookup) {
  switch (e.kind) {
    case Expr::Kind::kBoolLit:
      return e.bool_value;
    case Expr::Kind::kIntLit:
      return e.int_value;
    case Expr::Kind::kVar:
      if (!e.prime) {
        if (const Constant* c = p.find_constant(e.name)) return c->value;
      }
      return lookup(e.name, e.prime, false);
    case Expr::Kind::kOld:
      return lookup(e.name, 0, true);
    case Expr::Kind::kUnary: {
      const Value v = eval(p, *e.lhs, lookup);
      if (e.unary == UnaryOp::kNot) return !std::get<bool>(v);
      return checked(sub_ovf, 0, std::get<std::int64_t>(v));
    }
    case Expr::Kind::kBinary: {
      if (e.binary == BinaryOp::kAnd || e.binary == BinaryOp::kOr || e.binary == BinaryOp::kImplies) {
        const bool l = std::get<bool>(eval(p, *e.lhs, lookup));
        if (e.binary == BinaryOp::kAnd && !l) return false;
        if (e.binary == BinaryOp::kOr && l) return true;
        if (e.binary == BinaryOp::kImplies && !l) return true;
        return std::get<bool>(eval(p, *e.rhs, lookup));
      }
      const Value l = eval(p, *e.lhs, lookup);
      const Value r = eval(p, *e.rhs, lookup);
      if (e.binary == BinaryOp::kEq) return l == r;
      if (e.binary == BinaryOp::kNe) return l != r;
      const std::int64_t a = std::get<std::int64_t>(l);
      const std::int64_t b = std::get<std::int64_t>(r);
      switch (e.binary) {
        case BinaryOp::kLt: return a < b;
        case BinaryOp::kLe: return a <= b;
        case BinaryOp::kGt: return a > b;
        case BinaryOp::kGe: return a >= b;
        case BinaryOp::kAdd: return checked(add_ovf, a, b);
        case BinaryOp::kSub: return checked(sub_ovf, a, b);
        case BinaryOp::kMul: return checked(mul_ovf, a, b);
        default: break;
      }
      break;
    }
  }
  throw std::logic_error("ill-typed expression " + to_string(e));
}

bool eval_bool(const Program& p, const ExprPtr& e, const Lookup& lookup) {
  return !e || std::get<bool>(eval(p, *e, lookup));
}

void collect_literals(const Expr& e, std::set<std::int64_t>& out) {
  if (e.kind == Expr::Kind::kIntLit) out.insert(e.int_value);
  if (e.lhs) collect_literals(*e.lhs, out);
  if (e.rhs) collect_literals(*e.rhs, out);
}

void collect_literals(const Command& c, std::set<std::int64_t>& out) {
  for (const ExprPtr* e : {&c.guard, &c.relation, &c.value}) {
    if (*e) collect_literals(**e, out);
  }
  for (const auto& a : c.args) collect_literals(*a, out);
  for (const auto& i : c.invariants) collect_literals(*i, out);
  for (const auto& cl : c.trace.clauses) {
    if (cl.guard) collect_literals(*cl.guard, out);
  }
  for (const auto& s : c.body) collect_literals(*s, out);
  for (const CommandPtr* s : {&c.then_branch, &c.else_branch, &c.loop_body}) {
    if (*s) collect_literals(**s, out);
  }
}

/// Integers worth trying first: program literals and constants, their
/// neighbours, and zero.
std::vector<std::int64_t> interesting_ints(const Program& p) {
  std::set<std::int64_t> base{0};
  for (const auto& c : p.constants) base.insert(c.value);
  for (const auto& proc : p.procedures) {
    for (const auto& e : proc.requires_clauses) collect_literals(*e, base);
    for (const auto& e : proc.ensures_clauses) collect_literals(*e, base);
    for (const auto& cl : proc.trace.clauses) {
      if (cl.guard) collect_literals(*cl.guard, base);
    }
    if (proc.body) collect_literals(*proc.body, base);
  }
  std::set<std::int64_t> out;
  for (std::int64_t v : base) {
    for (std::int64_t d : {-1, 0, 1}) {
      const std::int64_t w = v + d;
      if (w >= kSampleMin && w <= kSampleMax) out.insert(w);
    }
  }
  return {out.begin(), out.end()};
}

/// `target == e` conjuncts usable to propose a value for target.
struct Hint {
  std::string target;
  ExprPtr value;
};

void collect_hints(const ExprPtr& e, const std::set<std::string>& targets, int target_prime,
                   std::vector<Hint>& out) {
  if (!e || e->kind != Expr::Kind::kBinary) return;
  if (e->binary == BinaryOp::kAnd) {
    collect_hints(e->lhs, targets, target_prime, out);
    collect_hints(e->rhs, targets, target_prime, out);
    return;
  }
  if (e->binary != BinaryOp::kEq) return;
  auto is_target = [&](const ExprPtr& x) {
    return x->kind == Expr::Kind::kVar && x->prime == target_prime && targets.count(x->name);
  };
  if (is_target(e->lhs)) out.push_back({e->lhs->name, e->rhs});
  if (is_target(e->rhs)) out.push_back({e->rhs->name, e->lhs});
}

class Machine {
 public:
  Machine(const Program& p, const std::vector<std::int64_t>& pool, ChoiceSource& src, std::int64_t fuel)
      : p_(p), src_(src), fuel_(fuel), pool_(pool) {}

  struct Frame {
    const Procedure* proc = nullptr;
    GroundState locals;
    std::optional<Value> result;
  };

  /// Draws without marking; callers mark where a redraw should restart.
  Value sample(Type t) {
    if (t == Type::kBool) return draw_coin(src_);
    if (!pool_.empty() && draw_below(src_, 4) != 0) return pool_[draw_below(src_, pool_.size())];
    return draw_between(src_, kSampleMin, kSampleMax);
  }

  GroundState& globals() { return globals_; }
  Trace& trace() { return trace_; }

  Frame invoke(const Procedure& proc, GroundState args) {
    burn("call to " + proc.name);
    Frame f;
    f.proc = &proc;
    f.locals = std::move(args);
    if (proc.body) {
      exec(*proc.body, f);
      return f;
    }
    // Bodiless: behave as the contract's specification statement.
    const Lookup pre = frame_lookup(f);
    for (const auto& r : proc.requires_clauses) {
      if (!eval_bool(p_, r, pre)) throw AbortSignal{"precondition of " + proc.name + " violated"};
    }
    for (const auto& e : proc.ensures_clauses) {
      if (e->kind == Expr::Kind::kBoolLit && !e->bool_value) throw Diverged{proc.name + " does not return"};
    }
    const Regex emitted = enabled_trace(proc.trace, pre);
    const GroundState old_globals = globals_;
    const GroundState old_locals = f.locals;
    std::set<std::string> targets(proc.modifies.begin(), proc.modifies.end());
    if (proc.return_type != Type::kVoid) targets.insert("result");
    std::vector<Hint> hints;
    for (const auto& e : proc.ensures_clauses) collect_hints(e, targets, 0, hints);
    const Lookup old = [&](const std::string& name, int, bool) -> Value {
      if (auto it = old_locals.find(name); it != old_locals.end()) return it->second;
      return get(old_globals, name);
    };
    src_.mark();
    for (int attempt = 0;; ++attempt) {
      if (attempt == kRelationRetries) throw OutOfFuel{"no outcome of " + proc.name + " satisfies its postcondition"};
      for (const auto& m : proc.modifies) globals_[m] = sample(type_of_global(m));
      if (proc.return_type != Type::kVoid) f.result = sample(proc.return_type);
      const Lookup post = [&](const std::string& name, int, bool is_old) -> Value {
        if (is_old) return old(name, 0, true);
        if (name == "result") return *f.result;
        return frame_lookup(f)(name, 0, false);
      };
      if (attempt % 2 == 0) {
        for (const auto& h : hints) {
          try {
            Value v = eval(p_, *h.value, post);
            if (h.target == "result") {
              f.result = v;
            } else {
              globals_[h.target] = v;
            }
          } catch (const std::exception&) {
          }
        }
      }
      bool ok = true;
      for (const auto& e : proc.ensures_clauses) ok = ok && eval_bool(p_, e, post);
      if (ok) break;
    }
    append(emitted);
    return f;
  }

 private:
  static constexpr int kRelationRetries = 256;

  void burn(const std::string& what) {
    if (--fuel_ < 0) throw OutOfFuel{"fuel exhausted at " + what};
  }

  Type type_of_global(const std::string& name) const {
    const GlobalVar* g = p_.find_global(name);
    return g ? g->type : Type::kInt;
  }

  static Value get(const GroundState& s, const std::string& name) {
    auto it = s.find(name);
    if (it == s.end()) throw AbortSignal{"read of unassigned variable '" + name + "'"};
    return it->second;
  }

  Lookup frame_lookup(Frame& f) {
    return [this, &f](const std::string& name, int, bool) -> Value {
      if (name == "result" && f.result) return *f.result;
      if (auto it = f.locals.find(name); it != f.locals.end()) return it->second;
      return get(globals_, name);
    };
  }

  void store(Frame& f, const std::string& name, Value v) {
    if (f.proc->locals.count(name)) {
      f.locals[name] = v;
    } else {
      globals_[name] = v;
    }
  }

  Type type_in(const Frame& f, const std::string& name) const {
    return p_.type_of(*f.proc, name).value_or(Type::kInt);
  }

  Regex enabled_trace(const TraceAnnotation& t, const Lookup& pre) {
    std::vector<Regex> enabled;
    for (const auto& cl : t.clauses) {
      if (eval_bool(p_, cl.guard, pre)) enabled.push_back(cl.regex);
    }
    return enabled.empty() ? Regex::epsilon() : mk_choice(std::move(enabled));
  }

  void append(const Regex& u) {
    if (u.is_empty()) throw OutOfFuel{"empty trace language"};
    Trace w = random_word(u, src_, 8);
    trace_.insert(trace_.end(), w.begin(), w.end());
  }

  void exec(const Command& c, Frame& f) {
    switch (c.kind) {
      case Command::Kind::kEmit:
        trace_.push_back(c.event);
        return;
      case Command::Kind::kAssign:
        store(f, c.target, eval(p_, *c.value, frame_lookup(f)));
        return;
      case Command::Kind::kHavoc:
        src_.mark();
        store(f, c.target, sample(type_in(f, c.target)));
        return;
      case Command::Kind::kBlock:
        for (const auto& s : c.body) exec(*s, f);
        return;
      case Command::Kind::kIf:
        if (eval_bool(p_, c.value, frame_lookup(f))) {
          exec(*c.then_branch, f);
        } else if (c.else_branch) {
          exec(*c.else_branch, f);
        }
        return;
      case Command::Kind::kWhile:
        while (eval_bool(p_, c.value, frame_lookup(f))) {
          burn("loop iteration");
          exec(*c.loop_body, f);
        }
        return;
      case Command::Kind::kAssert:
        if (!eval_bool(p_, c.value, frame_lookup(f))) throw AbortSignal{"assertion failed at " + c.span.to_string()};
        return;
      case Command::Kind::kAbort:
        throw AbortSignal{"unreachable statement reached at " + c.span.to_string()};
      case Command::Kind::kReturn:
        if (c.value) f.result = eval(p_, *c.value, frame_lookup(f));
        return;
      case Command::Kind::kSpec:
        exec_spec(c, f);
        return;
      case Command::Kind::kCall: {
        const Procedure* callee = p_.find_procedure(c.callee);
        if (!callee) throw std::logic_error("unresolved call to " + c.callee);
        GroundState args;
        for (std::size_t i = 0; i < c.args.size(); ++i) {
          args[callee->params[i].name] = eval(p_, *c.args[i], frame_lookup(f));
        }
        if (callee->body) {
          Frame probe;
          probe.proc = callee;
          probe.locals = args;
          for (const auto& r : callee->requires_clauses) {
            if (!eval_bool(p_, r, frame_lookup(probe))) {
              throw AbortSignal{"precondition of " + callee->name + " violated at " + c.span.to_string()};
            }
          }
        }
        Frame done = invoke(*callee, std::move(args));
        if (!c.target.empty()) store(f, c.target, *done.result);
        return;
      }
    }
  }

  void exec_spec(const Command& c, Frame& f) {
    const Lookup pre = frame_lookup(f);
    if (!eval_bool(p_, c.guard, pre)) throw AbortSignal{"specification guard fails at " + c.span.to_string()};
    const Regex emitted = enabled_trace(c.trace, pre);
    GroundState before;
    for (const auto& m : c.mods) before[m] = pre(m, 0, false);
    const std::set<std::string> targets(c.mods.begin(), c.mods.end());
    std::vector<Hint> hints;
    collect_hints(c.relation, targets, 1, hints);
    GroundState after;
    src_.mark();
    const Lookup rel = [&](const std::string& name, int prime, bool) -> Value {
      if (prime) {
        if (auto it = after.find(name); it != after.end()) return it->second;
      } else if (auto it = before.find(name); it != before.end()) {
        return it->second;
      }
      return pre(name, 0, false);
    };
    for (int attempt = 0;; ++attempt) {
      if (attempt == kRelationRetries) {
        throw OutOfFuel{"no outcome satisfies the specification statement at " + c.span.to_string()};
      }
      after.clear();
      for (const auto& m : c.mods) after[m] = sample(type_in(f, m));
      if (attempt % 2 == 0) {
        for (const auto& h : hints) {
          try {
            after[h.target] = eval(p_, *h.value, rel);
          } catch (const std::exception&) {
          }
        }
      }
      if (eval_bool(p_, c.relation, rel)) break;
    }
    for (const auto& [name, v] : after) store(f, name, v);
    append(emitted);
  }

  const Program& p_;
  ChoiceSource& src_;
  std::int64_t fuel_;
  const std::vector<std::int64_t>& pool_;
  GroundState globals_;
  Trace trace_;
};

}  // namespace

Trace sample_word(const Regex& u, std::mt19937_64& rng, std::size_t soft_limit) {
  return random_word(u, rng, soft_limit);
}

RunResult run(const Program& program, const std::string& entry, const GroundState& s0, std::uint64_t seed,
              std::int64_t fuel) {
  const Procedure* proc = program.find_procedure(entry);
  if (!proc) throw std::invalid_argument("no procedure named '" + entry + "'");
  GroundState globals;
  GroundState args;
  for (const auto& g : program.globals) {
    auto it = s0.find(g.name);
    if (it == s0.end()) throw std::invalid_argument("initial state does not bind '" + g.name + "'");
    globals[g.name] = it->second;
  }
  for (const auto& prm : proc->params) {
    auto it = s0.find(prm.name);
    if (it == s0.end()) throw std::invalid_argument("initial state does not bind '" + prm.name + "'");
    args[prm.name] = it->second;
  }
  const std::vector<std::int64_t> pool = interesting_ints(program);
  ChoiceSource src(seed);
  // Redraws of the n-th choice since an earlier choice last changed. A choice
  // redrawn kRedraws times without escaping divergence gives way to the one
  // before it.
  std::map<std::size_t, std::size_t> redraws;
  for (int restart = 0;; ++restart) {
    Machine m(program, pool, src, fuel);
    m.globals() = globals;
    RunResult out;
    try {
      Machine::Frame f = m.invoke(*proc, args);
      out.outcome = Outcome::kStopped;
      out.final_state = m.globals();
      for (const auto& [k, v] : f.locals) out.final_state[k] = v;
      out.result = f.result;
    } catch (const AbortSignal& a) {
      out.outcome = Outcome::kAborted;
      out.note = a.note;
    } catch (const OutOfFuel& o) {
      out.outcome = Outcome::kFuelExhausted;
      out.note = o.note;
    } catch (const Diverged& d) {
      if (restart < kMaxRestarts) {
        const std::size_t n = src.choices();
        std::size_t j = n;
        while (j > 1 && redraws[j] >= kRedraws) --j;
        ++redraws[j];
        redraws.erase(redraws.upper_bound(j), redraws.end());
        src.backtrack(n - j + 1);
        continue;
      }
      out.outcome = Outcome::kFuelExhausted;
      out.note = d.note;
    }
    out.trace = m.trace();
    return out;
  }
}

OracleReport check_triple_random(const Program& program, const std::string& entry, const OracleOptions& options) {
  const Procedure* proc = program.find_procedure(entry);
  if (!proc) throw std::invalid_argument("no procedure named '" + entry + "'");
  OracleReport report;
  report.procedure = entry;
  const std::vector<std::int64_t> pool = interesting_ints(program);
  for (std::size_t i = 0; i < options.runs; ++i) {
    const std::uint64_t run_seed = splitmix64(options.seed + i);
    ChoiceSource draws(run_seed);
    Machine sampler(program, pool, draws, 1);
    GroundState pre;
    bool found = false;
    for (std::size_t attempt = 0; attempt < options.max_rejections && !found; ++attempt) {
      for (const auto& g : program.globals) pre[g.name] = sampler.sample(g.type);
      for (const auto& prm : proc->params) pre[prm.name] = sampler.sample(prm.type);
      const Lookup lookup = [&](const std::string& name, int, bool) { return pre.at(name); };
      found = true;
      for (const auto& r : proc->requires_clauses) found = found && eval_bool(program, r, lookup);
    }
    if (!found) throw NoSatisfyingState("no pre-state of " + entry + " satisfies its precondition");

    const RunResult r = run(program, entry, pre, splitmix64(run_seed), options.fuel);
    ++report.runs;
    auto violation = [&](std::string reason) {
      report.violations.push_back({i, run_seed, pre, r.trace, std::move(reason)});
    };
    if (r.outcome == Outcome::kFuelExhausted) {
      ++report.fuel_exhausted;
      continue;
    }
    if (r.outcome == Outcome::kAborted) {
      ++report.aborted;
      violation("aborted: " + r.note);
      continue;
    }
    ++report.stopped;
    const Lookup post = [&](const std::string& name, int, bool old) -> Value {
      if (old) return pre.at(name);
      if (name == "result") return r.result.value();
      return r.final_state.at(name);
    };
    for (const auto& e : proc->ensures_clauses) {
      if (!eval_bool(program, e, post)) {
        violation("postcondition " + to_string(*e) + " fails");
        break;
      }
    }
    const Lookup at_pre = [&](const std::string& name, int, bool) { return pre.at(name); };
    std::vector<Regex> enabled;
    for (const auto& cl : proc->trace.clauses) {
      if (eval_bool(program, cl.guard, at_pre)) enabled.push_back(cl.regex);
    }
    const Regex allowed = enabled.empty() ? Regex::epsilon() : mk_choice(std::move(enabled));
    if (!member(r.trace, allowed)) {
      violation("trace " + trace_to_string(r.trace) + " not in " + allowed.to_string());
    }
  }
  return report;
}

}  // namespace regtrace
