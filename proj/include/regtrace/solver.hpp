#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "regtrace/formula.hpp"

namespace regtrace {

enum class SatStatus { kSat, kUnsat, kUnknown };
enum class Validity { kValid, kInvalid, kUnknown };

const char* to_string(SatStatus s);
const char* to_string(Validity v);

struct SatResult {
  SatStatus status = SatStatus::kUnknown;
  /// Satisfying assignment (built-in backend only).
  std::optional<Model> model;
  std::string diagnostic;
};

struct EntailResult {
  Validity validity = Validity::kUnknown;
  /// Counter-model for kInvalid when the backend provides one.
  std::optional<Model> counterexample;
  std::string diagnostic;
};

/// Satisfiability service for quantifier-free formulas over booleans and
/// linear integer arithmetic. kSat and kUnsat answers are never wrong;
/// kUnknown is always permitted and callers treat it as "not proven".
class Solver {
 public:
  virtual ~Solver() = default;
  virtual SatResult check_sat(const Formula& f) = 0;
  virtual std::string name() const = 0;

  /// entails(P, Q) := P && !Q is unsatisfiable.
  EntailResult entails(const Formula& p, const Formula& q);
};

struct BuiltinSolverOptions {
  /// Search nodes (boolean branches plus integer branch-and-bound steps)
  /// before giving up with kUnknown.
  std::int64_t node_budget = 200000;
  /// Largest interval enumerated when branching on a single integer variable.
  std::int64_t max_enumeration = 512;
};

/// Case-splitting search over the boolean structure with an integer
/// feasibility check (bound tightening, unit-equality substitution,
/// Fourier-Motzkin projection, bounded branching). Every kSat answer is
/// re-checked against the input formula.
class BuiltinSolver final : public Solver {
 public:
  explicit BuiltinSolver(BuiltinSolverOptions options = {}) : options_(options) {}
  SatResult check_sat(const Formula& f) override;
  std::string name() const override { return "internal"; }

 private:
  BuiltinSolverOptions options_;
};

/// SMT-LIB v2 script: declare-const per free variable, one assert, check-sat.
std::string to_smtlib(const Formula& f);

/// Runs an external SMT solver command, feeding the script on stdin and
/// reading the first token of the first output line. Crashes and
/// unrecognized output surface as kUnknown with a diagnostic.
class SmtLibProcessSolver final : public Solver {
 public:
  explicit SmtLibProcessSolver(std::string command) : command_(std::move(command)) {}
  SatResult check_sat(const Formula& f) override;
  std::string name() const override { return command_; }

 private:
  std::string command_;
  std::mutex mutex_;
};

/// Memoizes another solver by formula structure.
class CachingSolver final : public Solver {
 public:
  explicit CachingSolver(std::unique_ptr<Solver> inner) : inner_(std::move(inner)) {}
  SatResult check_sat(const Formula& f) override;
  std::string name() const override { return inner_->name(); }

 private:
  std::unique_ptr<Solver> inner_;
  std::map<Formula, SatResult> cache_;
};

/// "internal" selects the built-in backend; anything else is an external
/// command line.
std::unique_ptr<Solver> make_solver(std::string_view selector);

}  // namespace regtrace
