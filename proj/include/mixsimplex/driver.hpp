#pragma once

// End-to-end decision: the pure rational simplex, and the mixed strategy
// that warm-starts it from the binary64 solver's final basis.

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/float_lp.hpp"
#include "mixsimplex/forced_pivot.hpp"
#include "mixsimplex/simplex.hpp"
#include "mixsimplex/verdict.hpp"
#include "mixsimplex/witness.hpp"

namespace mixsimplex {

enum class Mode { Rational, Mixed };

inline std::string_view to_string(Mode m) { return m == Mode::Rational ? "rational" : "mixed"; }

struct RunStats {
  Mode mode = Mode::Rational;
  std::size_t float_iterations = 0;
  std::size_t forced_pivots = 0;
  /// Pivots performed by the exact check loop (all pivots in rational mode).
  std::size_t extra_rational_pivots = 0;
  std::uint64_t promoted_value_count = 0;
  double wall_time = 0.0;  // seconds
  /// Mixed mode only: outcome of the float phase and of the basis transfer.
  std::optional<FloatStatus> float_status;
  std::optional<ForcedPivotStatus> forced_status;
  bool trivially_unsat = false;  // decided by the initial row scan
};

struct DriverOptions {
  FloatOptions float_options;
  SolverOptions solver_options{.track_aux = false};
  ForcedPivotOptions forced_pivot_options;
  /// Check every verdict with the independent checkers; a failure raises
  /// ContractViolation.
  bool verify = true;
};

/// Replaces the binary64 solver (tests inject failing or adversarial ones).
using FloatPhase = std::function<FloatOutcome(const FloatProblem&)>;

struct Decision {
  Verdict verdict;
  RunStats stats;
};

namespace detail {

inline bool hint_is_well_formed(const BasisHint& h, const SolverState& s) {
  if (h.target_basic.size() != s.basic_count() || h.sides.size() != s.num_vars()) return false;
  std::vector<char> seen(s.num_vars(), 0);
  for (VarId v : h.target_basic) {
    if (index(v) >= s.num_vars() || seen[index(v)]) return false;
    seen[index(v)] = 1;
  }
  return true;
}

inline void verify_or_throw(const Verdict& v, const Problem& p) {
  bool ok = v.sat() ? verify_sat(v.point, p.constraints) : verify_unsat(v.certificate, p.constraints);
  if (!ok) throw ContractViolation("decide: verdict failed independent verification");
}

}  // namespace detail

inline Decision decide(const Problem& p, Mode mode, const DriverOptions& opts = {},
                       const FloatPhase& float_phase = {}) {
  auto start = std::chrono::steady_clock::now();
  std::uint64_t promoted_before = promoted_value_count();
  RunStats stats;
  stats.mode = mode;

  SolverState s = SolverState::init(p, opts.solver_options);
  if (mode == Mode::Mixed) {
    if (s.find_trivially_unsat_row()) {
      stats.trivially_unsat = true;
    } else {
      FloatProblem fp = lower_problem(p);
      FloatOutcome fo = float_phase ? float_phase(fp) : solve_float(fp, opts.float_options);
      stats.float_iterations = fo.iterations;
      if (fo.status != FloatStatus::Failed && !detail::hint_is_well_formed(fo.hint, s))
        fo.status = FloatStatus::Failed;
      stats.float_status = fo.status;
      if (fo.status != FloatStatus::Failed) {
        ForcedPivotResult fr = forced_pivot(s, fo.hint, opts.forced_pivot_options);
        stats.forced_pivots = fr.pivots;
        stats.forced_status = fr.status;
        apply_hint_values(s, fo.hint);
      }
    }
  }

  std::size_t before = s.pivots();
  Decision d{s.check(), stats};
  d.stats.extra_rational_pivots = s.pivots() - before;
  if (opts.verify) detail::verify_or_throw(d.verdict, p);
  d.stats.promoted_value_count = promoted_value_count() - promoted_before;
  d.stats.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return d;
}

enum class FastResult { LikelySat, UnsatCertified, Unknown };

struct FastDecision {
  FastResult result = FastResult::Unknown;
  /// Set when the exact pipeline ran (InfeasibleGuess from the float phase).
  std::optional<Verdict> verdict;
};

/// Float-only probe: a feasible guess is reported unverified, an infeasible
/// guess is confirmed by the exact pipeline before being reported.
inline FastDecision fast_check(const Problem& p, const DriverOptions& opts = {},
                               const FloatPhase& float_phase = {}) {
  FloatProblem fp = lower_problem(p);
  FloatOutcome fo = float_phase ? float_phase(fp) : solve_float(fp, opts.float_options);
  switch (fo.status) {
    case FloatStatus::Failed: return {FastResult::Unknown, std::nullopt};
    case FloatStatus::FeasibleGuess: return {FastResult::LikelySat, std::nullopt};
    case FloatStatus::InfeasibleGuess: break;
  }
  Decision d = decide(p, Mode::Mixed, opts, [&](const FloatProblem&) { return fo; });
  FastResult r = d.verdict.sat() ? FastResult::LikelySat : FastResult::UnsatCertified;
  return {r, std::move(d.verdict)};
}

}  // namespace mixsimplex
