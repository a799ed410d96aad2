#include "regtrace/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "regtrace/parser.hpp"

namespace regtrace {

const char* to_string(ObligationKind k) {
  switch (k) {
    case ObligationKind::kEntailment: return "Entailment";
    case ObligationKind::kTraceInclusion: return "TraceInclusion";
    case ObligationKind::kGuardCheck: return "GuardCheck";
    case ObligationKind::kInvariantPreservation: return "InvariantPreservation";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kHolds: return "holds";
    case Verdict::kFails: return "fails";
    case Verdict::kUnknown: return "unknown";
  }
  return "?";
}

const char* to_string(ProcedureStatus s) {
  switch (s) {
    case ProcedureStatus::kVerified: return "verified";
    case ProcedureStatus::kFailed: return "failed";
    case ProcedureStatus::kAssumed: return "assumed";
  }
  return "?";
}

std::vector<const Obligation*> ProcedureReport::failed() const {
  std::vector<const Obligation*> out;
  for (const auto& o : obligations) {
    if (o.verdict != Verdict::kHolds) out.push_back(&o);
  }
  return out;
}

bool VerdictReport::verified() const {
  return std::none_of(procedures.begin(), procedures.end(),
                      [](const ProcedureReport& p) { return p.status == ProcedureStatus::kFailed; });
}

const ProcedureReport* VerdictReport::find(const std::string& name) const {
  for (const auto& p : procedures) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

namespace {

struct PathLimit {};

SymValue symbol(const std::string& name, Type type) {
  if (type == Type::kBool) return make_bool_var(Var{name, 0});
  return LinearTerm::variable(Var{name, 0});
}

Formula lower_all(const std::vector<ExprPtr>& es, const Program& p, const SymLookup& lookup) {
  std::vector<Formula> out;
  for (const auto& e : es) out.push_back(lower_bool(*e, &p, lookup));
  return make_and(std::move(out));
}

}  // namespace

ProcedureVerifier::ProcedureVerifier(const Program& program, const Procedure& proc, Solver& solver,
                                     const VerifyOptions& options)
    : program_(program), proc_(proc), solver_(solver), options_(options) {
  for (const auto& g : program_.globals) entry_store_[g.name] = symbol(g.name, g.type);
  for (const auto& prm : proc_.params) entry_store_[prm.name] = symbol(prm.name, prm.type);
}

SymValue ProcedureVerifier::fresh(const std::string& name, Type type) {
  const int k = ++fresh_counter_[name];
  return symbol(name + "#" + std::to_string(k), type);
}

Type ProcedureVerifier::type_of(const std::string& name) const {
  if (name == "result") return proc_.return_type;
  return program_.type_of(proc_, name).value_or(Type::kInt);
}

SymLookup ProcedureVerifier::lookup_in(const SymStore& store) const {
  return [&store](const std::string& name, int, bool) -> SymValue {
    auto it = store.find(name);
    if (it == store.end()) throw LowerError("read of unassigned variable '" + name + "'");
    return it->second;
  };
}

bool ProcedureVerifier::feasible(const Formula& f) { return solver_.check_sat(f).status != SatStatus::kUnsat; }

TraceSpec ProcedureVerifier::lower_trace(const TraceAnnotation& t, const SymLookup& lookup) const {
  TraceSpec out;
  for (const auto& cl : t.clauses) {
    out.options.push_back(TraceOption{cl.regex, cl.guard ? lower_bool(*cl.guard, &program_, lookup) : make_true()});
  }
  return out;
}

SymState ProcedureVerifier::initial_state() {
  SymState s;
  s.store = entry_store_;
  s.path.push_back(lower_all(proc_.requires_clauses, program_, lookup_in(entry_store_)));
  return s;
}

void ProcedureVerifier::entail(ObligationKind kind, const std::string& role, SourceSpan span,
                               const Formula& context, const Formula& goal) {
  Obligation o;
  o.kind = kind;
  o.role = role;
  o.span = span;
  o.procedure = proc_.name;
  o.context = context;
  o.goal = goal;
  const EntailResult r = solver_.entails(context, goal);
  switch (r.validity) {
    case Validity::kValid:
      o.verdict = Verdict::kHolds;
      break;
    case Validity::kInvalid:
      o.verdict = Verdict::kFails;
      o.model = r.counterexample;
      break;
    case Validity::kUnknown:
      o.verdict = Verdict::kUnknown;
      o.diagnostic = r.diagnostic;
      break;
  }
  obligations_.push_back(std::move(o));
}

void ProcedureVerifier::include(ObligationKind kind, const std::string& role, SourceSpan span,
                                const Formula& context, const Regex& prefix, const TraceSpec& right) {
  for (auto& c : inclusion_obligations(context, TraceSpec::plain(prefix), Regex::epsilon(), complete(right), solver_)) {
    Obligation o;
    o.kind = kind;
    o.role = role;
    o.span = span;
    o.procedure = proc_.name;
    o.context = c.condition;
    o.lhs = c.lhs;
    o.rhs = c.rhs;
    o.verdict = c.holds ? Verdict::kHolds : (c.diagnostic.empty() ? Verdict::kFails : Verdict::kUnknown);
    o.witness = std::move(c.witness);
    o.diagnostic = std::move(c.diagnostic);
    obligations_.push_back(std::move(o));
  }
}

std::vector<SymState> ProcedureVerifier::split_cases(SymState s, const TraceSpec& completed) {
  std::vector<SymState> out;
  for (const auto& o : completed.options) {
    if (o.regex.is_empty()) continue;
    SymState next = s;
    next.path.push_back(o.guard);
    if (!feasible(next.path_formula())) continue;
    next.prefix = mk_concat(s.prefix, o.regex);
    out.push_back(std::move(next));
  }
  return out;
}

std::vector<SymState> ProcedureVerifier::exec_block(const std::vector<CommandPtr>& body, std::size_t from,
                                                    SymState s) {
  std::vector<SymState> states{std::move(s)};
  for (std::size_t i = from; i < body.size(); ++i) {
    std::vector<SymState> next;
    for (auto& st : states) {
      for (auto& r : exec(*body[i], std::move(st))) next.push_back(std::move(r));
    }
    if (next.size() > options_.max_paths) throw PathLimit{};
    states = std::move(next);
  }
  return states;
}

std::vector<SymState> ProcedureVerifier::exec(const Command& c, SymState s) {
  switch (c.kind) {
    case Command::Kind::kEmit:
      s.prefix = mk_concat(s.prefix, Regex::symbol(c.event));
      return {std::move(s)};
    case Command::Kind::kAssign: {
      const SymLookup lookup = lookup_in(s.store);
      SymValue v = type_of(c.target) == Type::kBool ? SymValue(lower_bool(*c.value, &program_, lookup))
                                                    : SymValue(lower_int(*c.value, &program_, lookup));
      s.store[c.target] = std::move(v);
      return {std::move(s)};
    }
    case Command::Kind::kHavoc:
      s.store[c.target] = fresh(c.target, type_of(c.target));
      return {std::move(s)};
    case Command::Kind::kBlock:
      return exec_block(c.body, 0, std::move(s));
    case Command::Kind::kIf: {
      const Formula test = lower_bool(*c.value, &program_, lookup_in(s.store));
      std::vector<SymState> out;
      SymState then_state = s;
      then_state.path.push_back(test);
      if (feasible(then_state.path_formula())) {
        for (auto& r : exec(*c.then_branch, std::move(then_state))) out.push_back(std::move(r));
      }
      SymState else_state = std::move(s);
      else_state.path.push_back(make_not(test));
      if (feasible(else_state.path_formula())) {
        if (c.else_branch) {
          for (auto& r : exec(*c.else_branch, std::move(else_state))) out.push_back(std::move(r));
        } else {
          out.push_back(std::move(else_state));
        }
      }
      return out;
    }
    case Command::Kind::kWhile:
      return exec_while(c, std::move(s));
    case Command::Kind::kCall:
      return exec_call(c, std::move(s));
    case Command::Kind::kSpec:
      return exec_spec_stmt(c, std::move(s));
    case Command::Kind::kAssert: {
      const Formula goal = lower_bool(*c.value, &program_, lookup_in(s.store));
      entail(ObligationKind::kEntailment, "assertion", c.span, s.path_formula(), goal);
      s.path.push_back(goal);
      return {std::move(s)};
    }
    case Command::Kind::kAbort:
      entail(ObligationKind::kGuardCheck, "unreachable", c.span, s.path_formula(), make_false());
      return {};
    case Command::Kind::kReturn:
      if (c.value) {
        const SymLookup lookup = lookup_in(s.store);
        s.store["result"] = proc_.return_type == Type::kBool ? SymValue(lower_bool(*c.value, &program_, lookup))
                                                              : SymValue(lower_int(*c.value, &program_, lookup));
      }
      return {std::move(s)};
  }
  return {};
}

std::vector<SymState> ProcedureVerifier::exec_spec_stmt(const Command& c, SymState s) {
  const SymStore pre = s.store;
  const SymLookup at_pre = lookup_in(pre);
  const Formula guard = c.guard ? lower_bool(*c.guard, &program_, at_pre) : make_true();
  entail(ObligationKind::kGuardCheck, "specification statement guard", c.span, s.path_formula(), guard);
  s.path.push_back(guard);
  const TraceSpec trace = complete(lower_trace(c.trace, at_pre));

  for (const auto& m : c.mods) s.store[m] = fresh(m, type_of(m));
  const SymStore& post = s.store;
  const SymLookup rel = [&](const std::string& name, int prime, bool old) -> SymValue {
    return prime ? lookup_in(post)(name, 0, old) : at_pre(name, 0, old);
  };
  if (c.relation) s.path.push_back(lower_bool(*c.relation, &program_, rel));
  return split_cases(std::move(s), trace);
}

std::vector<SymState> ProcedureVerifier::exec_call(const Command& c, SymState s) {
  const Procedure* callee = program_.find_procedure(c.callee);
  if (!callee) throw LowerError("call to undeclared procedure '" + c.callee + "'");

  // Callee view of the pre-state: globals plus parameters bound to arguments.
  SymStore pre;
  for (const auto& g : program_.globals) {
    if (auto it = s.store.find(g.name); it != s.store.end()) pre.emplace(g.name, it->second);
  }
  const SymLookup caller = lookup_in(s.store);
  for (std::size_t i = 0; i < callee->params.size(); ++i) {
    const Param& prm = callee->params[i];
    pre[prm.name] = prm.type == Type::kBool ? SymValue(lower_bool(*c.args[i], &program_, caller))
                                            : SymValue(lower_int(*c.args[i], &program_, caller));
  }
  const SymLookup at_pre = lookup_in(pre);
  const Formula requires_formula = lower_all(callee->requires_clauses, program_, at_pre);
  entail(ObligationKind::kGuardCheck, "precondition of " + callee->name, c.span, s.path_formula(), requires_formula);
  s.path.push_back(requires_formula);
  const TraceSpec trace = complete(lower_trace(callee->trace, at_pre));

  SymStore post = pre;
  for (const auto& m : callee->modifies) {
    const GlobalVar* g = program_.find_global(m);
    SymValue v = fresh(m, g ? g->type : Type::kInt);
    post[m] = v;
    s.store[m] = v;
  }
  if (callee->return_type != Type::kVoid) post["result"] = fresh(callee->name + ".result", callee->return_type);
  const SymLookup at_post = [&](const std::string& name, int, bool old) -> SymValue {
    return old ? at_pre(name, 0, false) : lookup_in(post)(name, 0, false);
  };
  s.path.push_back(lower_all(callee->ensures_clauses, program_, at_post));
  if (!c.target.empty()) s.store[c.target] = post.at("result");
  return split_cases(std::move(s), trace);
}

std::vector<SymState> ProcedureVerifier::exec_while(const Command& c, SymState s) {
  std::set<std::string> mods;
  for (const auto& m : modified_vars(program_, *c.loop_body)) {
    if (program_.type_of(proc_, m)) mods.insert(m);
  }
  const bool local = c.trace.local || c.trace.clauses.empty();
  const Regex step = c.trace.clauses.empty() ? Regex::epsilon() : c.trace.clauses.front().regex;
  const Regex iterations = mk_star(step);

  // Establishment.
  const Formula entry_context = s.path_formula();
  entail(ObligationKind::kEntailment, "loop invariant on entry", c.span, entry_context,
         lower_all(c.invariants, program_, lookup_in(s.store)));
  if (!local) {
    include(ObligationKind::kTraceInclusion, "trace invariant on entry", c.span, entry_context, s.prefix,
            lower_trace(c.trace, lookup_in(s.store)));
  }

  // Arbitrary iteration: havoc what the body writes, assume invariant and test.
  SymState head = s;
  for (const auto& m : mods) head.store[m] = fresh(m, type_of(m));
  const SymLookup at_head = lookup_in(head.store);
  head.path.push_back(lower_all(c.invariants, program_, at_head));
  const Formula test = lower_bool(*c.value, &program_, at_head);
  // Local mode checks each iteration on its own: the body, started from the
  // empty trace, must emit a word of the step expression.
  const TraceSpec head_trace =
      local ? TraceSpec::plain(Regex::epsilon()) : complete(lower_trace(c.trace, at_head));

  SymState body_entry = head;
  body_entry.path.push_back(test);
  if (feasible(body_entry.path_formula())) {
    for (const auto& opt : head_trace.options) {
      SymState st = body_entry;
      st.path.push_back(opt.guard);
      if (!feasible(st.path_formula())) continue;
      st.prefix = opt.regex;
      for (auto& end : exec(*c.loop_body, std::move(st))) {
        const SymLookup at_end = lookup_in(end.store);
        const Formula ctx = end.path_formula();
        entail(ObligationKind::kInvariantPreservation, "loop invariant preserved", c.span, ctx,
               lower_all(c.invariants, program_, at_end));
        const TraceSpec target = local ? TraceSpec::plain(step) : lower_trace(c.trace, at_end);
        include(ObligationKind::kTraceInclusion, "trace invariant preserved", c.span, ctx, end.prefix, target);
      }
    }
  }

  // Exit.
  SymState exit_state = std::move(head);
  exit_state.path.push_back(make_not(test));
  if (!feasible(exit_state.path_formula())) {
    warnings_.push_back({"VacuousSpec", c.span, proc_.name, "the loop exit is unreachable under its invariant"});
    return {};
  }
  if (local) {
    exit_state.prefix = mk_concat(s.prefix, iterations);
    return {std::move(exit_state)};
  }
  exit_state.prefix = Regex::epsilon();
  std::vector<SymState> out = split_cases(std::move(exit_state), head_trace);
  const bool only_default = std::all_of(out.begin(), out.end(), [&](const SymState& st) {
    return st.path.back() == head_trace.options.back().guard;
  });
  if (out.empty() || only_default) {
    warnings_.push_back({"VacuousSpec", c.span, proc_.name,
                         "no trace invariant case is reachable at loop exit; only the empty trace remains"});
  }
  return out;
}

void ProcedureVerifier::finalize_path(const SymState& s) {
  ++paths_;
  SymStore final_store = s.store;
  if (proc_.return_type != Type::kVoid && !final_store.count("result")) {
    final_store["result"] = fresh("result", proc_.return_type);
  }
  const SymLookup at_entry = lookup_in(entry_store_);
  const SymLookup at_final = [&](const std::string& name, int, bool old) -> SymValue {
    return old ? at_entry(name, 0, false) : lookup_in(final_store)(name, 0, false);
  };
  const Formula ctx = s.path_formula();
  if (!proc_.ensures_clauses.empty()) {
    entail(ObligationKind::kEntailment, "postcondition", proc_.span, ctx,
           lower_all(proc_.ensures_clauses, program_, at_final));
  }
  include(ObligationKind::kTraceInclusion, "procedure trace", proc_.span, ctx, s.prefix,
          lower_trace(proc_.trace, at_entry));
}

void ProcedureVerifier::run() {
  SymState start = initial_state();
  if (!feasible(start.path_formula())) {
    warnings_.push_back({"VacuousSpec", proc_.span, proc_.name, "the precondition is unsatisfiable"});
    return;
  }
  for (const auto& end : exec(*proc_.body, std::move(start))) finalize_path(end);
}

ProcedureReport verify_procedure(const Program& program, const Procedure& proc, Solver& solver,
                                 const VerifyOptions& options) {
  ProcedureReport report;
  report.name = proc.name;
  report.span = proc.span;
  if (!proc.has_body()) {
    report.status = ProcedureStatus::kAssumed;
    return report;
  }
  ProcedureVerifier v(program, proc, solver, options);
  try {
    v.run();
    report.obligations = v.obligations();
  } catch (const LowerError& e) {
    report.obligations = v.obligations();
    Obligation o;
    o.role = "symbolic execution";
    o.span = proc.span;
    o.procedure = proc.name;
    o.verdict = Verdict::kUnknown;
    o.diagnostic = e.what();
    report.obligations.push_back(std::move(o));
  } catch (const PathLimit&) {
    report.obligations = v.obligations();
    Obligation o;
    o.role = "symbolic execution";
    o.span = proc.span;
    o.procedure = proc.name;
    o.verdict = Verdict::kUnknown;
    o.diagnostic = "path limit exceeded";
    report.obligations.push_back(std::move(o));
  }
  report.warnings = v.warnings();
  report.paths = v.paths();
  report.status = report.failed().empty() ? ProcedureStatus::kVerified : ProcedureStatus::kFailed;
  return report;
}

VerdictReport verify_program(const Program& program, const SolverFactory& make_solver,
                             const VerifyOptions& options) {
  std::vector<const Procedure*> todo;
  for (const auto& p : program.procedures) {
    if (!p.builtin) todo.push_back(&p);
  }
  VerdictReport report;
  report.procedures.resize(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::unique_ptr<Solver> solver = std::make_unique<CachingSolver>(make_solver());
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      report.procedures[i] = verify_procedure(program, *todo[i], *solver, options);
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(todo.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < jobs; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return report;
}

}  // namespace regtrace
