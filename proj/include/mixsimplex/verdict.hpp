#pragma once

#include <map>
#include <vector>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/rat.hpp"

namespace mixsimplex {

/// Multiplier per original constraint. Inequality multipliers are
/// nonnegative; equality multipliers may carry either sign.
using Certificate = std::map<ConstraintId, Rat>;

struct Verdict {
  enum class Kind { Sat, Unsat };

  Kind kind = Kind::Sat;
  std::vector<Rat> point;    // Sat: value per structural variable
  Certificate certificate;   // Unsat

  [[nodiscard]] bool sat() const { return kind == Kind::Sat; }

  static Verdict make_sat(std::vector<Rat> point) {
    return Verdict{Kind::Sat, std::move(point), {}};
  }
  static Verdict make_unsat(Certificate c) { return Verdict{Kind::Unsat, {}, std::move(c)}; }
};

/// Rescales multipliers to coprime integers (positive scale) and drops zeros.
inline Certificate normalized(Certificate c) {
  std::erase_if(c, [](const auto& kv) { return kv.second.is_zero(); });
  if (c.empty()) return c;
  Rat den_lcm(1);
  for (const auto& [id, m] : c) den_lcm = integer_lcm(den_lcm, m.denominator());
  Rat num_gcd(0);
  for (const auto& [id, m] : c) num_gcd = integer_gcd(num_gcd, (m * den_lcm).abs());
  Rat scale = den_lcm / num_gcd;
  for (auto& [id, m] : c) m *= scale;
  return c;
}

}  // namespace mixsimplex
