#pragma once

// Seeded random dense instances. Each constraint is
//   c_1 x1 + ... + c_n xn <= r
// with c_j and r uniform integers in [-range, range]; zero coefficients are
// omitted and an all-zero left-hand side is redrawn. The engine is
// std::mt19937_64 (bit-exact by the standard) and integers are drawn by
// rejection sampling, so a seed yields the same file on every platform.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "mixsimplex/rat.hpp"

namespace mixsimplex {

struct GeneratorSpec {
  std::size_t constraints = 100;
  std::size_t vars = 50;
  std::int64_t range = 100;
  std::uint64_t seed = 0;
};

/// Uniform integer in [lo, hi] from a 64-bit engine.
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % span);
}

inline std::string generate(const GeneratorSpec& spec) {
  if (spec.constraints == 0 || spec.vars == 0 || spec.range <= 0)
    throw ContractViolation("generate: sizes and range must be positive");
  std::mt19937_64 rng(spec.seed);
  std::ostringstream out;
  out << "# random dense instance: " << spec.constraints << " constraints, " << spec.vars
      << " variables, coefficients in [-" << spec.range << "," << spec.range << "], seed "
      << spec.seed << "\n";
  for (std::size_t i = 0; i < spec.constraints; ++i) {
    std::string line;
    while (line.empty()) {
      for (std::size_t j = 0; j < spec.vars; ++j) {
        std::int64_t c = uniform_int(rng, -spec.range, spec.range);
        if (c == 0) continue;
        if (!line.empty()) line += ' ';
        line += std::to_string(c) + " x" + std::to_string(j + 1);
      }
    }
    std::int64_t rhs = uniform_int(rng, -spec.range, spec.range);
    out << line << " <= " << rhs << "\n";
  }
  return out.str();
}

}  // namespace mixsimplex
