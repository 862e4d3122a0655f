#pragma once

// Exact bounded-variable simplex over δ-rationals in the style used by SMT
// theory solvers: a tableau of basic variables expressed over nonbasic ones,
// a current assignment, per-variable bounds with retraction, and Farkas
// certificates read off conflicting rows.
//
// The tableau is stored fraction-free: integer rows over one common positive
// denominator, updated by exact division (Bareiss). Rational rows are
// available through row().

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/delta.hpp"
#include "mixsimplex/int_row.hpp"
#include "mixsimplex/sparse_row.hpp"
#include "mixsimplex/verdict.hpp"

namespace mixsimplex {

struct SolverOptions {
  /// Maintain the auxiliary tableau expressing each row as a combination of
  /// the original equalities. Only needed for the invariant checks.
  bool track_aux = true;
};

/// A candidate literal `var >= value` (Side::Lower) or `var <= value`
/// (Side::Upper) for theory propagation.
struct PropagationCandidate {
  VarId var;
  Side side;
  DeltaRat value;
};

struct Propagation {
  std::size_t candidate;  // index into the candidate list
  bool entailed;          // false: the literal is refuted
  std::optional<VarId> row;  // basic variable of the explaining row, if any
};

class SolverState {
 public:
  struct ActiveBound {
    DeltaRat value;
    BoundTag tag;
  };

  /// Basic variables are the slacks, structural variables are nonbasic and
  /// clamped into their bounds (0 when unbounded). With `with_bounds` false
  /// no bound is asserted; use assert_bound / assert_atom afterwards.
  /// Slack rows must have integer coefficients.
  static SolverState init(const Problem& p, SolverOptions opts = {}, bool with_bounds = true) {
    SolverState s;
    s.opts_ = opts;
    s.num_structural_ = p.num_structural;
    std::size_t n = p.num_vars();
    s.rows_.resize(n);
    s.aux_.resize(n);
    s.basic_.assign(n, 0);
    s.value_.resize(n);
    s.bounds_.resize(n);
    s.definitions_ = p.equalities;
    for (const auto& eq : p.equalities) {
      s.rows_[index(eq.var)] = IntRow::from_integral(eq.row);
      s.basic_[index(eq.var)] = 1;
      ++s.basic_count_;
      if (opts.track_aux) s.aux_[index(eq.var)] = SparseRow({RowEntry{eq.var, Rat(1)}});
    }
    if (with_bounds) {
      for (std::size_t v = 0; v < n; ++v)
        for (Side side : {Side::Lower, Side::Upper})
          if (auto a = p.tightest(var_id(v), side))
            s.bounds_[v][slot(side)] = ActiveBound{a->value, a->tag};
      for (std::size_t v = 0; v < n; ++v)
        if (!s.basic_[v]) s.value_[v] = s.clamped(var_id(v), DeltaRat());
    }
    s.recompute_basic_values();
    return s;
  }

  // ---- queries ---------------------------------------------------------

  [[nodiscard]] std::size_t num_vars() const { return value_.size(); }
  [[nodiscard]] std::size_t num_structural() const { return num_structural_; }
  [[nodiscard]] std::size_t basic_count() const { return basic_count_; }
  [[nodiscard]] bool is_basic(VarId v) const { return basic_[index(v)] != 0; }
  /// b's row as rationals (empty for nonbasic b).
  [[nodiscard]] SparseRow row(VarId b) const { return rows_[index(b)].over(denom_); }
  /// b's row as integers over denominator().
  [[nodiscard]] const IntRow& int_row(VarId b) const { return rows_[index(b)]; }
  [[nodiscard]] const Int& denominator() const { return denom_; }
  [[nodiscard]] const SparseRow& aux(VarId b) const { return aux_[index(b)]; }
  [[nodiscard]] const DeltaRat& value(VarId v) const { return value_[index(v)]; }
  [[nodiscard]] std::size_t pivots() const { return pivots_; }
  [[nodiscard]] const SolverOptions& options() const { return opts_; }

  [[nodiscard]] std::vector<VarId> basic_vars() const {
    std::vector<VarId> out;
    out.reserve(basic_count_);
    for (std::size_t v = 0; v < basic_.size(); ++v)
      if (basic_[v]) out.push_back(var_id(v));
    return out;
  }

  [[nodiscard]] const std::optional<ActiveBound>& bound(VarId v, Side side) const {
    return bounds_[index(v)][slot(side)];
  }
  [[nodiscard]] ExtBound lower(VarId v) const {
    const auto& b = bound(v, Side::Lower);
    return b ? ExtBound(b->value) : ExtBound::minus_infinity();
  }
  [[nodiscard]] ExtBound upper(VarId v) const {
    const auto& b = bound(v, Side::Upper);
    return b ? ExtBound(b->value) : ExtBound::plus_infinity();
  }

  // ---- tableau mutation ------------------------------------------------

  /// Exchanges basic b and nonbasic n. Requires t[b][n] != 0. The solution
  /// subspace and the current assignment are unchanged.
  void pivot(VarId b, VarId n) {
    if (!is_basic(b) || is_basic(n)) throw ContractViolation("pivot: bad basic/nonbasic pair");
    IntRow rb = std::move(rows_[index(b)]);
    rows_[index(b)] = IntRow();
    const Int* found = rb.find(n);
    if (!found) throw ContractViolation("pivot: zero pivot element");
    Int p = *found;
    bool flip = p.sign() < 0;

    // p n = D b - sum_{k != n} r_k k, then divide everything by |p|.
    IntRow rn;
    for (const auto& e : rb) {
      if (e.var == n) continue;
      rn.raw().push_back(IntEntry{e.var, e.coef});
      if (!flip) mpz_neg(rn.raw().back().coef.get(), e.coef.get());
    }
    insert_sorted(rn, b, denom_, flip);

    SparseRow an;
    if (opts_.track_aux) {
      // n = (D/p) b - ..., so the aux row of n is aux_b scaled by -D/p.
      an = std::move(aux_[index(b)]);
      aux_[index(b)] = SparseRow();
      an.scale(-(Rat::from_mpz(denom_.get(), p.get())));
    }
    basic_[index(b)] = 0;

    Int tmp;
    bool same_scale = !flip && p == denom_;
    for (std::size_t v = 0; v < rows_.size(); ++v) {
      if (!basic_[v]) continue;
      IntRow& ri = rows_[v];
      const Int* cptr = ri.find(n);
      if (!cptr) {
        if (same_scale) continue;
        for (auto& e : ri.raw()) {
          mpz_mul(tmp.get(), p.get(), e.coef.get());
          mpz_divexact(e.coef.get(), tmp.get(), denom_.get());
          if (flip) mpz_neg(e.coef.get(), e.coef.get());
        }
        continue;
      }
      Int c = *cptr;
      if (opts_.track_aux) aux_[v].add_scaled(Rat::from_mpz(c.get(), denom_.get()), an);
      eliminate(ri, rb, n, p, c, tmp);
      if (flip)
        for (auto& e : ri.raw()) mpz_neg(e.coef.get(), e.coef.get());
      insert_sorted(ri, b, c, flip);
    }
    mpz_abs(denom_.get(), p.get());
    rows_[index(n)] = std::move(rn);
    if (opts_.track_aux) aux_[index(n)] = std::move(an);
    basic_[index(n)] = 1;
    ++pivots_;
  }

  /// Moves nonbasic n to v (which must lie within n's bounds) and shifts
  /// the basic variables accordingly.
  void update_nonbasic(VarId n, const DeltaRat& v) {
    if (is_basic(n)) throw ContractViolation("update_nonbasic: variable is basic");
    if (lower(n) > ExtBound(v) || ExtBound(v) > upper(n))
      throw ContractViolation("update_nonbasic: value outside bounds");
    shift_nonbasic(n, v);
  }

  // ---- bounds ----------------------------------------------------------

  /// Tightens one side of var's box. Returns a certificate if the box became
  /// empty; row conflicts are left for check().
  std::optional<Certificate> assert_bound(VarId var, Side side, const DeltaRat& value,
                                          const BoundTag& tag) {
    auto& cur = bounds_[index(var)][slot(side)];
    bool tighter = !cur || (side == Side::Upper ? value < cur->value : value > cur->value);
    if (tighter) {
      trail_.push_back(TrailEntry{var, side, cur});
      cur = ActiveBound{value, tag};
    }
    if (auto c = empty_box_certificate(var)) return c;
    if (tighter && !is_basic(var)) {
      const DeltaRat& x = value_[index(var)];
      if (side == Side::Upper ? x > value : x < value) shift_nonbasic(var, value);
    }
    return std::nullopt;
  }
  std::optional<Certificate> assert_atom(const BoundAtom& a) {
    return assert_bound(a.var, a.side, a.value, a.tag);
  }

  /// Current retraction depth, usable as a mark for retract_to.
  [[nodiscard]] std::size_t depth() const { return trail_.size(); }

  /// Restores the bounds in force at `mark`. The basis is kept.
  void retract_to(std::size_t mark) {
    if (mark > trail_.size()) throw ContractViolation("retract_to: mark beyond current depth");
    while (trail_.size() > mark) {
      TrailEntry e = std::move(trail_.back());
      trail_.pop_back();
      bounds_[index(e.var)][slot(e.side)] = std::move(e.previous);
    }
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (basic_[v]) continue;
      DeltaRat c = clamped(var_id(v), value_[v]);
      if (c != value_[v]) shift_nonbasic(var_id(v), c);
    }
  }

  // ---- deciding --------------------------------------------------------

  /// Interval of the right-hand side of b's row under the nonbasic bounds.
  [[nodiscard]] std::pair<ExtBound, ExtBound> row_interval(VarId b) const {
    return {row_extreme(b, /*maximize=*/false), row_extreme(b, /*maximize=*/true)};
  }

  /// Which bound of basic b is out of reach of its row's interval, if any.
  [[nodiscard]] std::optional<Side> row_conflict(VarId b) const {
    if (!is_basic(b)) throw ContractViolation("row_conflict: variable is not basic");
    if (bound(b, Side::Upper) && row_extreme(b, false) > upper(b)) return Side::Upper;
    if (bound(b, Side::Lower) && row_extreme(b, true) < lower(b)) return Side::Lower;
    return std::nullopt;
  }

  /// True iff interval evaluation of b's row misses b's box.
  [[nodiscard]] bool trivial_row_unsat(VarId b) const { return row_conflict(b).has_value(); }

  /// First basic variable (by index) whose row is trivially unsatisfiable.
  [[nodiscard]] std::optional<VarId> find_trivially_unsat_row() const {
    for (std::size_t v = 0; v < basic_.size(); ++v)
      if (basic_[v] && trivial_row_unsat(var_id(v))) return var_id(v);
    return std::nullopt;
  }

  /// Farkas multipliers over original constraints from a trivially
  /// unsatisfiable row, rescaled to coprime integers.
  [[nodiscard]] Certificate farkas_from_row(VarId b) const {
    auto side = row_conflict(b);
    if (!side) throw ContractViolation("farkas_from_row: row is not conflicting");
    if (opts_.track_aux && !aux_invariant_holds(b))
      throw ContractViolation("farkas_from_row: auxiliary tableau out of sync");
    // Upper conflict: b <= u_b with every nonbasic at the end minimizing the
    // row; lower conflict symmetric.
    // Multipliers are scaled by the common denominator.
    bool upper_conflict = *side == Side::Upper;
    Certificate c;
    add_bound_multiplier(c, b, *side, denom_.to_rat());
    for (const auto& [n, t] : rows_[index(b)]) {
      bool use_lower = (t.sign() > 0) == upper_conflict;
      add_bound_multiplier(c, n, use_lower ? Side::Lower : Side::Upper, t.to_rat().abs());
    }
    return normalized(std::move(c));
  }

  /// Runs the Bland's-rule check loop. Returns Sat with a rational point
  /// over the structural variables, or Unsat with a Farkas certificate.
  Verdict check() {
    for (std::size_t v = 0; v < value_.size(); ++v)
      if (auto c = empty_box_certificate(var_id(v))) return Verdict::make_unsat(std::move(*c));
    if (auto b = find_trivially_unsat_row()) return Verdict::make_unsat(farkas_from_row(*b));

    for (;;) {
      std::optional<VarId> violated;
      bool below = false;
      for (std::size_t v = 0; v < value_.size(); ++v) {
        if (!basic_[v]) continue;
        VarId b = var_id(v);
        ExtBound x(value_[v]);
        if (x < lower(b)) {
          violated = b;
          below = true;
          break;
        }
        if (x > upper(b)) {
          violated = b;
          below = false;
          break;
        }
      }
      if (!violated) return Verdict::make_sat(materialize());

      VarId b = *violated;
      std::optional<VarId> entering;
      for (const auto& [n, t] : rows_[index(b)]) {
        bool increase = (t.sign() > 0) == below;
        ExtBound x(value_[index(n)]);
        if (increase ? x < upper(n) : x > lower(n)) {
          entering = n;
          break;
        }
      }
      if (!entering) return Verdict::make_unsat(farkas_from_row(b));

      DeltaRat target = below ? bound(b, Side::Lower)->value : bound(b, Side::Upper)->value;
      pivot(b, *entering);
      shift_nonbasic(b, target);
    }
  }

  /// Interval reasoning over the current tableau: each candidate on a basic
  /// variable is checked against its row's interval, each candidate on a
  /// nonbasic variable against its own bounds.
  [[nodiscard]] std::vector<Propagation> theory_propagate(
      const std::vector<PropagationCandidate>& candidates) const {
    std::vector<Propagation> out;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const auto& cand = candidates[i];
      ExtBound lo, hi;
      std::optional<VarId> row;
      if (is_basic(cand.var)) {
        std::tie(lo, hi) = row_interval(cand.var);
        row = cand.var;
      } else {
        lo = lower(cand.var);
        hi = upper(cand.var);
      }
      ExtBound v(cand.value);
      if (cand.side == Side::Lower) {
        if (lo >= v) out.push_back({i, true, row});
        else if (hi < v) out.push_back({i, false, row});
      } else {
        if (hi <= v) out.push_back({i, true, row});
        else if (lo > v) out.push_back({i, false, row});
      }
    }
    return out;
  }

  // ---- invariants ------------------------------------------------------

  /// Rows mention only nonbasic variables, nonbasic values are in bounds,
  /// basic values agree with their rows, and (when tracked) every row is
  /// the aux-weighted combination of the original equalities.
  [[nodiscard]] bool invariants_hold() const {
    std::size_t count = 0;
    for (std::size_t v = 0; v < value_.size(); ++v) {
      VarId x = var_id(v);
      if (!basic_[v]) {
        if (!rows_[v].empty()) return false;
        ExtBound val(value_[v]);
        if (lower(x) <= upper(x) && (val < lower(x) || val > upper(x))) return false;
        continue;
      }
      ++count;
      DeltaRat sum;
      for (const auto& [n, t] : rows_[v]) {
        if (basic_[index(n)]) return false;
        sum += t.to_rat() * value_[index(n)];
      }
      if (sum != denom_.to_rat() * value_[v]) return false;
      if (opts_.track_aux && !aux_invariant_holds(x)) return false;
    }
    return count == basic_count_;
  }

  /// b - sum_n t[b][n] n equals sum_k aux[b][k] * (s_k - def_k).
  [[nodiscard]] bool aux_invariant_holds(VarId b) const {
    if (!opts_.track_aux) return true;
    SparseRow lhs({RowEntry{b, Rat(1)}});
    lhs.add_scaled(Rat(-1), row(b));
    SparseRow rhs;
    for (const auto& [slack, w] : aux_[index(b)]) {
      const SlackDefinition* def = nullptr;
      for (const auto& d : definitions_)
        if (d.var == slack) def = &d;
      if (!def) return false;
      rhs.add_scaled(w, SparseRow({RowEntry{slack, Rat(1)}}));
      rhs.add_scaled(-w, def->row);
    }
    return lhs == rhs;
  }

  /// The current assignment split as u + εv (real parts, eps parts).
  [[nodiscard]] std::pair<std::vector<Rat>, std::vector<Rat>> delta_point() const {
    std::vector<Rat> u, v;
    for (std::size_t i = 0; i < num_structural_; ++i) {
      u.push_back(value_[i].real);
      v.push_back(value_[i].eps);
    }
    return {std::move(u), std::move(v)};
  }

  /// Sets nonbasic n to v without bound checks (used when transferring a
  /// hint, where the caller guarantees v is a bound of n).
  void set_nonbasic_value(VarId n, const DeltaRat& v) {
    if (is_basic(n)) throw ContractViolation("set_nonbasic_value: variable is basic");
    shift_nonbasic(n, v);
  }

  /// Clamp of v into var's box (lower wins if the box is empty).
  [[nodiscard]] DeltaRat clamped(VarId var, DeltaRat v) const {
    const auto& up = bound(var, Side::Upper);
    const auto& lo = bound(var, Side::Lower);
    if (up && v > up->value) v = up->value;
    if (lo && v < lo->value) v = lo->value;
    return v;
  }

  void recompute_basic_values() {
    Rat inv = denom_.to_rat().inverse();
    for (std::size_t v = 0; v < value_.size(); ++v) {
      if (!basic_[v]) continue;
      DeltaRat sum;
      for (const auto& [n, t] : rows_[v]) sum += t.to_rat() * value_[index(n)];
      value_[v] = inv * sum;
    }
  }

 private:
  struct TrailEntry {
    VarId var;
    Side side;
    std::optional<ActiveBound> previous;
  };

  static constexpr std::size_t slot(Side s) { return s == Side::Lower ? 0 : 1; }

  void shift_nonbasic(VarId n, const DeltaRat& v) {
    DeltaRat delta = v - value_[index(n)];
    if (delta.is_zero()) return;
    DeltaRat step = denom_.to_rat().inverse() * delta;
    for (std::size_t b = 0; b < rows_.size(); ++b) {
      if (!basic_[b]) continue;
      if (const Int* t = rows_[b].find(n)) value_[b] += t->to_rat() * step;
    }
    value_[index(n)] = v;
  }

  // Minimum (maximize = false) or maximum of b's row over the nonbasic box.
  [[nodiscard]] ExtBound row_extreme(VarId b, bool maximize) const {
    const IntRow& r = rows_[index(b)];
    for (const auto& [n, t] : r) {
      bool use_upper = (t.sign() > 0) == maximize;
      if (!bound(n, use_upper ? Side::Upper : Side::Lower))
        return maximize ? ExtBound::plus_infinity() : ExtBound::minus_infinity();
    }
    DeltaRat sum;
    for (const auto& [n, t] : r) {
      bool use_upper = (t.sign() > 0) == maximize;
      sum += t.to_rat() * bound(n, use_upper ? Side::Upper : Side::Lower)->value;
    }
    return ExtBound(denom_.to_rat().inverse() * sum);
  }

  // r (without entry n) becomes (p r - c rb) / D, entries absent from a side
  // count as zero.
  void eliminate(IntRow& r, const IntRow& rb, VarId n, const Int& p, const Int& c, Int& tmp) const {
    std::vector<IntEntry> out;
    out.reserve(r.size() + rb.size());
    auto a = r.raw().begin(), ae = r.raw().end();
    auto q = rb.begin(), qe = rb.end();
    while (a != ae || q != qe) {
      if (a != ae && a->var == n) {
        ++a;
        continue;
      }
      if (q != qe && q->var == n) {
        ++q;
        continue;
      }
      if (q == qe || (a != ae && a->var < q->var)) {
        mpz_mul(tmp.get(), p.get(), a->coef.get());
        mpz_divexact(a->coef.get(), tmp.get(), denom_.get());
        out.push_back(std::move(*a++));
      } else if (a == ae || q->var < a->var) {
        IntEntry e{q->var, Int()};
        mpz_mul(tmp.get(), c.get(), q->coef.get());
        mpz_neg(tmp.get(), tmp.get());
        mpz_divexact(e.coef.get(), tmp.get(), denom_.get());
        out.push_back(std::move(e));
        ++q;
      } else {
        mpz_mul(tmp.get(), p.get(), a->coef.get());
        mpz_submul(tmp.get(), c.get(), q->coef.get());
        if (mpz_sgn(tmp.get()) != 0) {
          mpz_divexact(a->coef.get(), tmp.get(), denom_.get());
          out.push_back(std::move(*a));
        }
        ++a;
        ++q;
      }
    }
    r.raw() = std::move(out);
  }

  static void insert_sorted(IntRow& r, VarId v, const Int& value, bool negate) {
    auto& es = r.raw();
    auto it = std::lower_bound(es.begin(), es.end(), v,
                               [](const IntEntry& e, VarId x) { return e.var < x; });
    it = es.insert(it, IntEntry{v, value});
    if (negate) mpz_neg(it->coef.get(), it->coef.get());
  }

  void add_bound_multiplier(Certificate& c, VarId v, Side side, const Rat& lambda) const {
    const auto& b = bound(v, side);
    if (!b) throw ContractViolation("farkas: missing bound on a blocking variable");
    c[b->tag.constraint] += lambda * b->tag.factor;
  }

  [[nodiscard]] std::optional<Certificate> empty_box_certificate(VarId v) const {
    const auto& lo = bound(v, Side::Lower);
    const auto& up = bound(v, Side::Upper);
    if (!lo || !up || lo->value <= up->value) return std::nullopt;
    Certificate c;
    c[lo->tag.constraint] += lo->tag.factor;
    c[up->tag.constraint] += up->tag.factor;
    return normalized(std::move(c));
  }

  // Rational point u + (t/2) v where (0, t) is the admissible interval of the
  // half-line through the δ-assignment (t = 1 when unbounded).
  [[nodiscard]] std::vector<Rat> materialize() const {
    std::optional<Rat> t0;
    auto limit = [&](const Rat& room, const Rat& speed) {
      // room > 0 is the real distance to a bound, speed > 0 the rate
      Rat t = room / speed;
      if (!t0 || t < *t0) t0 = std::move(t);
    };
    for (std::size_t v = 0; v < value_.size(); ++v) {
      const DeltaRat& x = value_[v];
      if (x.eps.is_zero()) continue;
      const auto& up = bounds_[v][1];
      const auto& lo = bounds_[v][0];
      if (up && x.eps.sign() > 0 && x.real < up->value.real) limit(up->value.real - x.real, x.eps);
      if (lo && x.eps.sign() < 0 && x.real > lo->value.real) limit(x.real - lo->value.real, -x.eps);
    }
    Rat t = t0 ? *t0 / Rat(2) : Rat(1, 2);
    std::vector<Rat> point;
    point.reserve(num_structural_);
    for (std::size_t i = 0; i < num_structural_; ++i)
      point.push_back(value_[i].real + t * value_[i].eps);
    return point;
  }

  SolverOptions opts_;
  std::size_t num_structural_ = 0;
  std::size_t basic_count_ = 0;
  std::size_t pivots_ = 0;
  std::vector<IntRow> rows_;
  Int denom_{1};
  std::vector<SparseRow> aux_;
  std::vector<char> basic_;
  std::vector<DeltaRat> value_;
  std::vector<std::array<std::optional<ActiveBound>, 2>> bounds_;
  std::vector<TrailEntry> trail_;
  std::vector<SlackDefinition> definitions_;
};

}  // namespace mixsimplex
