#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "regtrace/ast.hpp"
#include "regtrace/formula.hpp"
#include "regtrace/lower.hpp"
#include "regtrace/regex.hpp"
#include "regtrace/solver.hpp"
#include "regtrace/trace_spec.hpp"

namespace regtrace {

enum class ObligationKind { kEntailment, kTraceInclusion, kGuardCheck, kInvariantPreservation };
enum class Verdict { kHolds, kFails, kUnknown };

const char* to_string(ObligationKind k);
const char* to_string(Verdict v);

struct Obligation {
  ObligationKind kind = ObligationKind::kEntailment;
  /// What the obligation establishes, e.g. "postcondition" or
  /// "trace invariant preserved".
  std::string role;
  SourceSpan span;
  std::string procedure;
  /// Path constraint (and case condition for inclusions).
  Formula context;
  /// Goal of an entailment; unused for inclusions.
  std::optional<Formula> goal;
  std::optional<Regex> lhs;
  std::optional<Regex> rhs;
  Verdict verdict = Verdict::kUnknown;
  std::optional<Trace> witness;
  std::optional<Model> model;
  std::string diagnostic;
};

struct Warning {
  std::string kind;  // "VacuousSpec"
  SourceSpan span;
  std::string procedure;
  std::string message;
};

enum class ProcedureStatus { kVerified, kFailed, kAssumed };
const char* to_string(ProcedureStatus s);

struct ProcedureReport {
  std::string name;
  SourceSpan span;
  ProcedureStatus status = ProcedureStatus::kAssumed;
  std::vector<Obligation> obligations;
  std::vector<Warning> warnings;
  std::size_t paths = 0;

  std::vector<const Obligation*> failed() const;
};

struct VerdictReport {
  std::string program;
  std::vector<ProcedureReport> procedures;

  bool verified() const;
  const ProcedureReport* find(const std::string& name) const;
};

struct VerifyOptions {
  /// Worker threads for verifying procedures concurrently.
  unsigned jobs = 1;
  /// Symbolic paths explored per procedure before giving up.
  std::size_t max_paths = 200000;
};

using SolverFactory = std::function<std::unique_ptr<Solver>()>;

/// Verifies every procedure with a body against its own contract; bodiless
/// procedures are assumed. Each worker owns one solver from the factory.
VerdictReport verify_program(const Program& program, const SolverFactory& make_solver,
                             const VerifyOptions& options = {});

ProcedureReport verify_procedure(const Program& program, const Procedure& proc, Solver& solver,
                                 const VerifyOptions& options = {});

using SymStore = std::map<std::string, SymValue>;

/// Symbolic state: variable store, path constraint and the plain trace
/// emitted so far.
struct SymState {
  SymStore store;
  std::vector<Formula> path;
  Regex prefix = Regex::epsilon();

  Formula path_formula() const { return make_and(path); }
};

/// Forward symbolic executor for one procedure. Obligations accumulate in
/// `obligations()`; each exec function returns the successor states.
class ProcedureVerifier {
 public:
  ProcedureVerifier(const Program& program, const Procedure& proc, Solver& solver, const VerifyOptions& options = {});

  /// Entry state: globals and parameters bound to their own names, path set
  /// to the precondition, empty prefix.
  SymState initial_state();

  std::vector<SymState> exec(const Command& c, SymState s);
  std::vector<SymState> exec_spec_stmt(const Command& c, SymState s);
  std::vector<SymState> exec_call(const Command& c, SymState s);
  std::vector<SymState> exec_while(const Command& c, SymState s);
  void finalize_path(const SymState& s);

  /// Runs the whole body and finalizes every path.
  void run();

  const std::vector<Obligation>& obligations() const { return obligations_; }
  const std::vector<Warning>& warnings() const { return warnings_; }
  std::size_t paths() const { return paths_; }

  /// Lowers a trace annotation; guards are read through `lookup`.
  TraceSpec lower_trace(const TraceAnnotation& t, const SymLookup& lookup) const;

 private:
  SymValue fresh(const std::string& name, Type type);
  SymLookup lookup_in(const SymStore& store) const;
  Type type_of(const std::string& name) const;
  bool feasible(const Formula& f);
  std::vector<SymState> split_cases(SymState s, const TraceSpec& completed);
  void entail(ObligationKind kind, const std::string& role, SourceSpan span, const Formula& context,
              const Formula& goal);
  void include(ObligationKind kind, const std::string& role, SourceSpan span, const Formula& context,
               const Regex& prefix, const TraceSpec& right);
  std::vector<SymState> exec_block(const std::vector<CommandPtr>& body, std::size_t from, SymState s);

  const Program& program_;
  const Procedure& proc_;
  Solver& solver_;
  VerifyOptions options_;
  SymStore entry_store_;
  std::map<std::string, int> fresh_counter_;
  std::vector<Obligation> obligations_;
  std::vector<Warning> warnings_;
  std::size_t paths_ = 0;
};

}  // namespace regtrace
