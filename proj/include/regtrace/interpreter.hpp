#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "regtrace/ast.hpp"
#include "regtrace/formula.hpp"
#include "regtrace/regex.hpp"

namespace regtrace {

/// Integers are drawn from this range whenever the interpreter has to pick
/// a value (havoc, specification statements, sampled pre-states).
inline constexpr std::int64_t kSampleMin = -128;
inline constexpr std::int64_t kSampleMax = 127;

enum class Outcome { kStopped, kAborted, kFuelExhausted };
const char* to_string(Outcome o);

struct RunResult {
  Outcome outcome = Outcome::kStopped;
  /// Globals and entry-procedure locals at the end of the run.
  GroundState final_state;
  Trace trace;
  std::optional<Value> result;
  /// Why the run aborted or ran out of fuel.
  std::string note;
};

/// Runs `entry` from s0, which binds the globals and the entry parameters.
/// Nondeterminism is resolved by a generator seeded with `seed`; `fuel`
/// bounds loop iterations plus calls. Calling a procedure whose
/// postcondition is `false` diverges; such runs are replayed with the most
/// recent choices redrawn, and count as out of fuel once retries run out.
RunResult run(const Program& program, const std::string& entry, const GroundState& s0, std::uint64_t seed,
              std::int64_t fuel);

struct Violation {
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  GroundState pre_state;
  Trace trace;
  std::string reason;
};

struct OracleReport {
  std::string procedure;
  std::size_t runs = 0;
  std::size_t stopped = 0;
  std::size_t aborted = 0;
  std::size_t fuel_exhausted = 0;
  std::vector<Violation> violations;
};

class NoSatisfyingState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  std::size_t runs = 1000;
  std::uint64_t seed = 1;
  std::int64_t fuel = 1000;
  /// Pre-state candidates tried per run before giving up.
  std::size_t max_rejections = 20000;
};

/// Samples pre-states satisfying the entry precondition, runs the program
/// and checks every stopped run against the postcondition and the completed
/// trace specification evaluated in the pre-state. Aborted runs are
/// violations; runs that exhaust their fuel are only counted.
OracleReport check_triple_random(const Program& program, const std::string& entry, const OracleOptions& options);

/// Draws a word of L(u) by a random walk over derivatives, preferring to
/// stop once the word is at least `soft_limit` long. Requires L(u) nonempty.
Trace sample_word(const Regex& u, std::mt19937_64& rng, std::size_t soft_limit = 8);

}  // namespace regtrace
