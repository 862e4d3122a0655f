#pragma once

// Integer rows for the fraction-free tableau. A row holds integer
// coefficients; the tableau divides all of them by one shared positive
// denominator.

#include <gmp.h>

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mixsimplex/sparse_row.hpp"

namespace mixsimplex {

/// Owning GMP integer.
class Int {
 public:
  Int() { mpz_init(z_); }
  explicit Int(long v) { mpz_init_set_si(z_, v); }
  Int(const Int& o) { mpz_init_set(z_, o.z_); }
  Int(Int&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  Int& operator=(const Int& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  Int& operator=(Int&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~Int() { mpz_clear(z_); }

  [[nodiscard]] mpz_ptr get() noexcept { return z_; }
  [[nodiscard]] mpz_srcptr get() const noexcept { return z_; }
  [[nodiscard]] int sign() const noexcept { return mpz_sgn(z_); }
  [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
  [[nodiscard]] Rat to_rat() const { return Rat::from_mpz(z_); }

  friend bool operator==(const Int& a, const Int& b) { return mpz_cmp(a.z_, b.z_) == 0; }

 private:
  mpz_t z_;
};

struct IntEntry {
  VarId var;
  Int coef;
};

/// Sparse integer vector ordered by VarId, without explicit zeros.
class IntRow {
 public:
  IntRow() = default;

  /// Integer row from a rational one; every coefficient must be integral.
  static IntRow from_integral(const SparseRow& r) {
    IntRow out;
    out.entries_.reserve(r.size());
    for (const auto& e : r) {
      if (!e.coef.is_integer()) throw ContractViolation("IntRow: non-integer coefficient");
      IntEntry x{e.var, Int()};
      e.coef.numerator_into(x.coef.get());
      out.entries_.push_back(std::move(x));
    }
    return out;
  }

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() const noexcept { return entries_.end(); }
  [[nodiscard]] auto begin() noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() noexcept { return entries_.end(); }

  [[nodiscard]] const Int* find(VarId v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const IntEntry& e, VarId x) { return e.var < x; });
    return it != entries_.end() && it->var == v ? &it->coef : nullptr;
  }

  /// The row divided by `den`, as rationals.
  [[nodiscard]] SparseRow over(const Int& den) const {
    std::vector<RowEntry> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(RowEntry{e.var, Rat::from_mpz(e.coef.get(), den.get())});
    return SparseRow(std::move(out));
  }

  std::vector<IntEntry>& raw() noexcept { return entries_; }

 private:
  std::vector<IntEntry> entries_;
};

}  // namespace mixsimplex
