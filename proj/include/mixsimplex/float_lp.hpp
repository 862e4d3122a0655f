#pragma once

// Untrusted binary64 bounded-variable simplex. Its only product is a basis
// hint (basic set plus nonbasic sides) for the exact solver; nothing it
// returns is relied upon for correctness.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/forced_pivot.hpp"

namespace mixsimplex {

enum class FloatAlgorithm {
  /// Minimizes the sum of infeasibilities with primal bounded-variable steps.
  PrimalPhase1,
  /// Repairs one violated basic variable per pivot, stopping on a row whose
  /// nonbasics are all pinned (the exact check loop, run in binary64).
  BoundedDual,
};

struct FloatOptions {
  double feasibility_tol = 1e-9;
  double pivot_tol = 1e-10;
  /// 0 selects 20 * (rows + columns).
  std::size_t iteration_cap = 0;
  FloatAlgorithm algorithm = FloatAlgorithm::BoundedDual;
};

enum class FloatStatus { FeasibleGuess, InfeasibleGuess, Failed };

struct FloatProblem {
  std::size_t num_vars = 0;
  std::size_t num_structural = 0;
  /// rows[i] defines slack_vars[i] over structural variables.
  std::vector<VarId> slack_vars;
  std::vector<std::vector<std::pair<VarId, double>>> rows;
  std::vector<double> lower;  // -inf when absent
  std::vector<double> upper;  // +inf when absent
};

struct FloatOutcome {
  FloatStatus status = FloatStatus::Failed;
  BasisHint hint;  // empty when Failed
  std::size_t iterations = 0;
};

/// Rounds coefficients and bounds to nearest binary64 and drops the
/// infinitesimal parts of strict bounds.
inline FloatProblem lower_problem(const Problem& p) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  FloatProblem fp;
  fp.num_vars = p.num_vars();
  fp.num_structural = p.num_structural;
  for (const auto& eq : p.equalities) {
    fp.slack_vars.push_back(eq.var);
    std::vector<std::pair<VarId, double>> row;
    for (const auto& e : eq.row) {
      double d = e.coef.to_double();
      if (d != 0.0) row.emplace_back(e.var, d);
    }
    fp.rows.push_back(std::move(row));
  }
  fp.lower.assign(fp.num_vars, -inf);
  fp.upper.assign(fp.num_vars, inf);
  for (std::size_t v = 0; v < fp.num_vars; ++v) {
    if (auto a = p.tightest(var_id(v), Side::Lower)) fp.lower[v] = round_to_binary64(a->value);
    if (auto a = p.tightest(var_id(v), Side::Upper)) fp.upper[v] = round_to_binary64(a->value);
  }
  return fp;
}

namespace detail {

class FloatSimplex {
 public:
  FloatSimplex(const FloatProblem& fp, const FloatOptions& opts)
      : fp_(fp), opts_(opts), m_(fp.rows.size()), n_(fp.num_vars),
        tab_(m_ * n_, 0.0), basis_(fp.slack_vars), row_of_(n_, kNone), x_(n_, 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      row_of_[index(basis_[i])] = i;
      for (const auto& [v, a] : fp.rows[i]) at(i, index(v)) = a;
    }
    for (std::size_t v = 0; v < n_; ++v)
      if (row_of_[v] == kNone) x_[v] = initial_value(v);
    recompute_basics();
    cap_ = opts.iteration_cap ? opts.iteration_cap : 20 * (m_ + n_);
    bland_after_ = 50 + 2 * (m_ + n_);
  }

  /// Moves to a previously found basis; nonbasics go to their hinted sides.
  void warm_start(const BasisHint& hint) {
    if (hint.target_basic.size() != m_ || hint.sides.size() != n_) return;
    std::vector<char> target(n_, 0);
    for (VarId v : hint.target_basic) target[index(v)] = 1;
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (std::size_t i = 0; i < m_; ++i) {
        if (target[index(basis_[i])]) continue;
        std::size_t best = kNone;
        for (std::size_t j = 0; j < n_; ++j)
          if (target[j] && row_of_[j] == kNone && std::abs(at(i, j)) > opts_.pivot_tol &&
              (best == kNone || std::abs(at(i, j)) > std::abs(at(i, best))))
            best = j;
        if (best != kNone) {
          pivot(i, best);
          progressed = true;
        }
      }
    }
    for (std::size_t v = 0; v < n_; ++v) {
      if (row_of_[v] != kNone) continue;
      if (hint.sides[v] == NonbasicSide::AtLower && std::isfinite(fp_.lower[v]))
        x_[v] = fp_.lower[v];
      else if (hint.sides[v] == NonbasicSide::AtUpper && std::isfinite(fp_.upper[v]))
        x_[v] = fp_.upper[v];
    }
    recompute_basics();
  }

  FloatOutcome run() {
    FloatStatus status;
    if (has_empty_box())
      status = FloatStatus::InfeasibleGuess;
    else
      status = opts_.algorithm == FloatAlgorithm::PrimalPhase1 ? run_primal() : run_dual();
    FloatOutcome out;
    out.iterations = iterations_;
    for (double v : x_)
      if (!std::isfinite(v)) status = FloatStatus::Failed;
    out.status = status;
    if (status != FloatStatus::Failed) out.hint = hint();
    return out;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  double& at(std::size_t i, std::size_t j) { return tab_[i * n_ + j]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return tab_[i * n_ + j]; }

  [[nodiscard]] double initial_value(std::size_t v) const {
    if (std::isfinite(fp_.lower[v])) return fp_.lower[v];
    if (std::isfinite(fp_.upper[v])) return fp_.upper[v];
    return 0.0;
  }

  [[nodiscard]] double tol(double bound) const {
    if (!std::isfinite(bound)) return 0.0;
    return opts_.feasibility_tol * std::max(1.0, std::abs(bound));
  }
  [[nodiscard]] bool below_lower(std::size_t v) const {
    return x_[v] < fp_.lower[v] - tol(fp_.lower[v]);
  }
  [[nodiscard]] bool above_upper(std::size_t v) const {
    return x_[v] > fp_.upper[v] + tol(fp_.upper[v]);
  }
  [[nodiscard]] bool can_increase(std::size_t v) const {
    return x_[v] < fp_.upper[v] - tol(fp_.upper[v]);
  }
  [[nodiscard]] bool can_decrease(std::size_t v) const {
    return x_[v] > fp_.lower[v] + tol(fp_.lower[v]);
  }

  [[nodiscard]] bool has_empty_box() const {
    for (std::size_t v = 0; v < n_; ++v)
      if (fp_.lower[v] > fp_.upper[v] + tol(fp_.upper[v])) return true;
    return false;
  }

  void recompute_basics() {
    for (std::size_t i = 0; i < m_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n_; ++j)
        if (row_of_[j] == kNone) s += at(i, j) * x_[j];
      x_[index(basis_[i])] = s;
    }
  }

  // Basic of row i leaves, nonbasic j enters. Values are unchanged.
  void pivot(std::size_t i, std::size_t j) {
    std::size_t r = index(basis_[i]);
    double a = at(i, j);
    double* row = &tab_[i * n_];
    double p = -1.0 / a;
    for (std::size_t k = 0; k < n_; ++k) row[k] *= p;
    row[j] = 0.0;
    row[r] = 1.0 / a;
    for (std::size_t i2 = 0; i2 < m_; ++i2) {
      if (i2 == i) continue;
      double* other = &tab_[i2 * n_];
      double c = other[j];
      if (c == 0.0) continue;
      other[j] = 0.0;
      for (std::size_t k = 0; k < n_; ++k) other[k] += c * row[k];
    }
    row_of_[r] = kNone;
    row_of_[j] = i;
    basis_[i] = var_id(j);
  }

  void move_nonbasic(std::size_t j, double value) {
    double delta = value - x_[j];
    if (delta == 0.0) return;
    for (std::size_t i = 0; i < m_; ++i) x_[index(basis_[i])] += at(i, j) * delta;
    x_[j] = value;
  }

  bool next_iteration() {
    ++iterations_;
    if (iterations_ % 64 == 0) recompute_basics();
    return iterations_ <= cap_;
  }

  FloatStatus run_dual() {
    for (;;) {
      bool bland = iterations_ >= bland_after_;
      std::size_t leave = kNone;
      double worst = 0.0;
      bool below = false;
      for (std::size_t i = 0; i < m_; ++i) {
        std::size_t r = index(basis_[i]);
        double viol = 0.0;
        bool b = false;
        if (below_lower(r)) {
          viol = fp_.lower[r] - x_[r];
          b = true;
        } else if (above_upper(r)) {
          viol = x_[r] - fp_.upper[r];
        } else {
          continue;
        }
        bool take = leave == kNone ||
                    (bland ? r < index(basis_[leave]) : viol > worst);
        if (take) {
          leave = i;
          worst = viol;
          below = b;
        }
      }
      if (leave == kNone) return FloatStatus::FeasibleGuess;
      if (!next_iteration()) return FloatStatus::Failed;

      std::size_t enter = kNone;
      bool tiny_only = false;
      for (std::size_t j = 0; j < n_; ++j) {
        if (row_of_[j] != kNone) continue;
        double t = at(leave, j);
        if (t == 0.0) continue;
        bool increase = (t > 0) == below;
        if (!(increase ? can_increase(j) : can_decrease(j))) continue;
        if (std::abs(t) <= opts_.pivot_tol) {
          tiny_only = true;
          continue;
        }
        if (enter == kNone) {
          enter = j;
          if (bland) break;
        } else if (std::abs(t) > std::abs(at(leave, enter))) {
          enter = j;
        }
      }
      if (enter == kNone) return tiny_only ? FloatStatus::Failed : FloatStatus::InfeasibleGuess;

      std::size_t r = index(basis_[leave]);
      double target = below ? fp_.lower[r] : fp_.upper[r];
      pivot(leave, enter);
      move_nonbasic(r, target);
    }
  }

  FloatStatus run_primal() {
    std::vector<int> g(m_);
    std::vector<double> d(n_);
    for (;;) {
      bool bland = iterations_ >= bland_after_;
      bool infeasible = false;
      for (std::size_t i = 0; i < m_; ++i) {
        std::size_t r = index(basis_[i]);
        g[i] = above_upper(r) ? 1 : (below_lower(r) ? -1 : 0);
        infeasible |= g[i] != 0;
      }
      if (!infeasible) return FloatStatus::FeasibleGuess;

      std::fill(d.begin(), d.end(), 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (g[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j) d[j] += g[i] * at(i, j);
      }
      std::size_t enter = kNone;
      for (std::size_t j = 0; j < n_; ++j) {
        if (row_of_[j] != kNone) continue;
        bool improving = (d[j] < -opts_.pivot_tol && can_increase(j)) ||
                         (d[j] > opts_.pivot_tol && can_decrease(j));
        if (!improving) continue;
        if (enter == kNone) {
          enter = j;
          if (bland) break;
        } else if (std::abs(d[j]) > std::abs(d[enter])) {
          enter = j;
        }
      }
      if (enter == kNone) return FloatStatus::InfeasibleGuess;
      if (!next_iteration()) return FloatStatus::Failed;

      double dir = d[enter] < 0 ? 1.0 : -1.0;
      double step = fp_.upper[enter] - fp_.lower[enter];  // bound flip
      if (!std::isfinite(step)) step = std::numeric_limits<double>::infinity();
      std::size_t leave = kNone;
      double leave_bound = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        double t = at(i, enter);
        if (std::abs(t) <= opts_.pivot_tol) continue;
        std::size_t r = index(basis_[i]);
        double rate = t * dir;
        double bound;
        if (g[i] == 0)
          bound = rate > 0 ? fp_.upper[r] : fp_.lower[r];
        else if (g[i] > 0 && rate < 0)
          bound = fp_.upper[r];
        else if (g[i] < 0 && rate > 0)
          bound = fp_.lower[r];
        else
          continue;
        if (!std::isfinite(bound)) continue;
        double theta = std::max(0.0, (bound - x_[r]) / rate);
        bool better = theta < step ||
                      (leave != kNone && theta == step &&
                       (bland ? r < index(basis_[leave])
                              : std::abs(t) > std::abs(at(leave, enter))));
        if (better) {
          step = theta;
          leave = i;
          leave_bound = bound;
        }
      }
      if (!std::isfinite(step)) return FloatStatus::Failed;
      if (leave == kNone) {
        move_nonbasic(enter, dir > 0 ? fp_.upper[enter] : fp_.lower[enter]);
        continue;
      }
      std::size_t r = index(basis_[leave]);
      move_nonbasic(enter, x_[enter] + dir * step);
      pivot(leave, enter);
      move_nonbasic(r, leave_bound);
    }
  }

  [[nodiscard]] BasisHint hint() const {
    BasisHint h;
    h.target_basic = basis_;
    std::sort(h.target_basic.begin(), h.target_basic.end());
    h.sides.assign(n_, NonbasicSide::Unknown);
    for (std::size_t v = 0; v < n_; ++v) {
      if (row_of_[v] != kNone) continue;
      bool lo = std::isfinite(fp_.lower[v]) && std::abs(x_[v] - fp_.lower[v]) <= tol(fp_.lower[v]);
      bool up = std::isfinite(fp_.upper[v]) && std::abs(x_[v] - fp_.upper[v]) <= tol(fp_.upper[v]);
      if (lo)
        h.sides[v] = NonbasicSide::AtLower;
      else if (up)
        h.sides[v] = NonbasicSide::AtUpper;
    }
    return h;
  }

  const FloatProblem& fp_;
  FloatOptions opts_;
  std::size_t m_, n_;
  std::vector<double> tab_;
  std::vector<VarId> basis_;
  std::vector<std::size_t> row_of_;
  std::vector<double> x_;
  std::size_t iterations_ = 0;
  std::size_t cap_ = 0;
  std::size_t bland_after_ = 0;
};

}  // namespace detail

/// Runs the binary64 simplex. A prior outcome with a matching shape is used
/// as the starting basis.
inline FloatOutcome solve_float(const FloatProblem& fp, const FloatOptions& opts = {},
                                const FloatOutcome* warm = nullptr) {
  detail::FloatSimplex solver(fp, opts);
  if (warm && warm->status != FloatStatus::Failed) solver.warm_start(warm->hint);
  return solver.run();
}

}  // namespace mixsimplex
