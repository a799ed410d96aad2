#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regtrace/formula.hpp"
#include "regtrace/regex.hpp"
#include "regtrace/solver.hpp"

namespace regtrace {

struct TraceOption {
  Regex regex;
  Formula guard;
};

/// Guarded choice  u1 if g1 | ... | un if gn . Evaluating it in a state
/// yields the choice of all options whose guard holds there.
struct TraceSpec {
  std::vector<TraceOption> options;

  /// The plain expression u, read as "u if true".
  static TraceSpec plain(Regex u) { return TraceSpec{{TraceOption{std::move(u), make_true()}}}; }

  std::string to_string() const;
};

Regex eval_at(const TraceSpec& spec, const GroundState& state, const GroundState& post = {});

/// Appends the option  () if !(g1 || ... || gn) .
TraceSpec complete(const TraceSpec& spec);

/// Prefixes every option with the state-independent expression w.
TraceSpec frame_prefix(const Regex& w, const TraceSpec& spec);

/// Applies f to every guard.
template <typename F>
TraceSpec map_guards(const TraceSpec& spec, F&& f) {
  TraceSpec out;
  for (const auto& o : spec.options) out.options.push_back(TraceOption{o.regex, f(o.guard)});
  return out;
}

/// One case of  context => (U · emitted ⊑ V): the states where both the
/// i-th left option and the j-th right option are enabled.
struct InclusionCase {
  std::size_t left_index = 0;
  std::size_t right_index = 0;
  /// context && left guard && right guard
  Formula condition;
  Regex lhs;  // u_i · emitted
  /// v_j together with every other right option whose guard is entailed in
  /// this case.
  Regex rhs;
  std::vector<std::size_t> rhs_indices;
  bool holds = false;
  std::optional<Trace> witness;
  std::string diagnostic;
};

/// Splits  context => (U · emitted ⊑ V)  into per-case regex inclusions and
/// decides each. `right` must already be completed. Cases whose condition
/// the solver refutes are skipped; cases the solver cannot decide fail with
/// a diagnostic. The conjunction of all returned cases implies the original
/// obligation.
std::vector<InclusionCase> inclusion_obligations(const Formula& context, const TraceSpec& left, const Regex& emitted,
                                                 const TraceSpec& right, Solver& solver);

}  // namespace regtrace
