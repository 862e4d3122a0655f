#pragma once

// Transfer of a basis found elsewhere (typically by the floating-point
// solver) into the exact tableau: pivot until the basic set equals the
// target, then place the nonbasic variables on the hinted bounds.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "mixsimplex/simplex.hpp"

namespace mixsimplex {

enum class NonbasicSide { AtLower, AtUpper, Unknown };

struct BasisHint {
  std::vector<VarId> target_basic;
  /// One entry per variable; entries of target-basic variables are ignored.
  std::vector<NonbasicSide> sides;
};

enum class ForcedPivotStatus {
  Reached,      // basic set equals the target
  Unreachable,  // target partition is not a basis of the equality system
  EarlyUnsat,   // a row became trivially unsatisfiable; see conflict_row
};

struct ForcedPivotResult {
  ForcedPivotStatus status = ForcedPivotStatus::Reached;
  std::size_t pivots = 0;
  std::size_t sweeps = 0;
  std::optional<VarId> conflict_row;

  [[nodiscard]] bool reached() const { return status == ForcedPivotStatus::Reached; }
};

struct ForcedPivotOptions {
  /// Stop as soon as the input tableau, or a row touched by a pivot, is
  /// trivially unsatisfiable.
  bool detect_trivial_unsat = true;
  /// Visit leaving candidates by ascending row size.
  bool order_leaving_by_row_size = true;
  /// Prefer entering candidates that occur in fewest rows.
  bool order_entering_by_occurrences = true;
};

inline ForcedPivotResult forced_pivot(SolverState& s, const BasisHint& hint,
                                      const ForcedPivotOptions& opts = {}) {
  const std::size_t n = s.num_vars();
  if (hint.target_basic.size() != s.basic_count())
    throw ContractViolation("forced_pivot: target size differs from the number of basic variables");
  std::vector<char> in_target(n, 0);
  for (VarId v : hint.target_basic) {
    if (index(v) >= n || in_target[index(v)])
      throw ContractViolation("forced_pivot: invalid target basic set");
    in_target[index(v)] = 1;
  }

  ForcedPivotResult result;
  if (opts.detect_trivial_unsat) {
    if (auto b = s.find_trivially_unsat_row()) {
      result.status = ForcedPivotStatus::EarlyUnsat;
      result.conflict_row = b;
      return result;
    }
  }

  std::vector<VarId> leaving;
  std::vector<std::size_t> occurrences(n, 0);
  for (VarId b : s.basic_vars()) {
    if (!in_target[index(b)]) leaving.push_back(b);
    for (const auto& e : s.int_row(b)) ++occurrences[index(e.var)];
  }
  if (opts.order_leaving_by_row_size)
    std::stable_sort(leaving.begin(), leaving.end(), [&](VarId a, VarId b) {
      return s.int_row(a).size() < s.int_row(b).size();
    });

  // Entering preference: rank by occurrence count, then VarId.
  std::vector<std::size_t> rank(n, std::numeric_limits<std::size_t>::max());
  {
    std::vector<VarId> entering;
    for (std::size_t v = 0; v < n; ++v)
      if (in_target[v] && !s.is_basic(var_id(v))) entering.push_back(var_id(v));
    if (opts.order_entering_by_occurrences)
      std::stable_sort(entering.begin(), entering.end(), [&](VarId a, VarId b) {
        return occurrences[index(a)] < occurrences[index(b)];
      });
    for (std::size_t i = 0; i < entering.size(); ++i) rank[index(entering[i])] = i;
  }

  bool progressed = true;
  while (progressed) {
    progressed = false;
    ++result.sweeps;
    for (VarId b : leaving) {
      if (!s.is_basic(b)) continue;
      std::optional<VarId> entering;
      for (const auto& e : s.int_row(b)) {
        if (!in_target[index(e.var)]) continue;
        if (!entering || rank[index(e.var)] < rank[index(*entering)]) entering = e.var;
      }
      if (!entering) continue;

      std::vector<VarId> touched;
      if (opts.detect_trivial_unsat)
        for (VarId other : s.basic_vars())
          if (other != b && s.int_row(other).find(*entering)) touched.push_back(other);
      s.pivot(b, *entering);
      ++result.pivots;
      progressed = true;
      if (opts.detect_trivial_unsat) {
        touched.push_back(*entering);
        for (VarId r : touched) {
          if (s.trivial_row_unsat(r)) {
            result.status = ForcedPivotStatus::EarlyUnsat;
            result.conflict_row = r;
            return result;
          }
        }
      }
    }
  }

  for (VarId v : hint.target_basic)
    if (!s.is_basic(v)) {
      result.status = ForcedPivotStatus::Unreachable;
      return result;
    }
  return result;
}

/// Places each nonbasic variable on its hinted bound when that bound is
/// finite; every other nonbasic keeps its value, clamped into its box.
inline void apply_hint_values(SolverState& s, const BasisHint& hint) {
  for (std::size_t v = 0; v < s.num_vars(); ++v) {
    VarId x = var_id(v);
    if (s.is_basic(x)) continue;
    NonbasicSide side = v < hint.sides.size() ? hint.sides[v] : NonbasicSide::Unknown;
    const auto& lo = s.bound(x, Side::Lower);
    const auto& up = s.bound(x, Side::Upper);
    DeltaRat target;
    if (side == NonbasicSide::AtLower && lo)
      target = lo->value;
    else if (side == NonbasicSide::AtUpper && up)
      target = up->value;
    else
      target = s.clamped(x, s.value(x));
    s.set_nonbasic_value(x, target);
  }
}

}  // namespace mixsimplex
