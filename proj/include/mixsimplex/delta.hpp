#pragma once

// Values of the form real + eps*ε where ε is a positive infinitesimal, and
// bounds over them extended with +-infinity.

#include <compare>
#include <ostream>
#include <string>

#include "mixsimplex/rat.hpp"

namespace mixsimplex {

struct DeltaRat {
  Rat real;
  Rat eps;

  DeltaRat() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  DeltaRat(Rat r) : real(std::move(r)) {}
  DeltaRat(Rat r, Rat e) : real(std::move(r)), eps(std::move(e)) {}

  [[nodiscard]] bool is_zero() const { return real.is_zero() && eps.is_zero(); }

  DeltaRat operator-() const { return {-real, -eps}; }
  friend DeltaRat operator+(const DeltaRat& a, const DeltaRat& b) {
    return {a.real + b.real, a.eps + b.eps};
  }
  friend DeltaRat operator-(const DeltaRat& a, const DeltaRat& b) {
    return {a.real - b.real, a.eps - b.eps};
  }
  friend DeltaRat operator*(const Rat& k, const DeltaRat& a) { return {k * a.real, k * a.eps}; }
  friend DeltaRat operator*(const DeltaRat& a, const Rat& k) { return k * a; }
  DeltaRat& operator+=(const DeltaRat& o) {
    real += o.real;
    eps += o.eps;
    return *this;
  }

  friend bool operator==(const DeltaRat&, const DeltaRat&) = default;
  friend std::strong_ordering operator<=>(const DeltaRat& a, const DeltaRat& b) {
    if (auto c = a.real <=> b.real; c != 0) return c;
    return a.eps <=> b.eps;
  }

  [[nodiscard]] std::string str() const {
    if (eps.is_zero()) return real.str();
    return real.str() + (eps.sign() > 0 ? "+" : "") + eps.str() + "e";
  }
  friend std::ostream& operator<<(std::ostream& os, const DeltaRat& d) { return os << d.str(); }
};

/// Lexicographic comparison on (real, eps).
inline std::strong_ordering delta_cmp(const DeltaRat& x, const DeltaRat& y) { return x <=> y; }

/// Drops the infinitesimal and rounds the real part to nearest binary64.
inline double round_to_binary64(const DeltaRat& x) { return x.real.to_double(); }

/// A DeltaRat extended with -infinity and +infinity.
class ExtBound {
 public:
  enum class Kind { MinusInfinity, Finite, PlusInfinity };

  ExtBound() = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  ExtBound(DeltaRat v) : kind_(Kind::Finite), value_(std::move(v)) {}

  static ExtBound minus_infinity() { return ExtBound(Kind::MinusInfinity); }
  static ExtBound plus_infinity() { return ExtBound(Kind::PlusInfinity); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
  [[nodiscard]] const DeltaRat& value() const {
    if (!is_finite()) throw ContractViolation("ExtBound: value of an infinite bound");
    return value_;
  }

  /// Sum of two endpoints. Adding opposite infinities is undefined.
  friend ExtBound operator+(const ExtBound& a, const ExtBound& b) {
    if (a.is_finite() && b.is_finite()) return ExtBound(a.value_ + b.value_);
    if (!a.is_finite() && !b.is_finite() && a.kind_ != b.kind_)
      throw ContractViolation("ExtBound: -inf + +inf");
    return ExtBound(a.is_finite() ? b.kind_ : a.kind_);
  }
  /// Scaling; a negative factor swaps the infinities. k must be nonzero.
  friend ExtBound operator*(const Rat& k, const ExtBound& a) {
    if (k.is_zero()) throw ContractViolation("ExtBound: scaling by zero");
    if (a.is_finite()) return ExtBound(k * a.value_);
    if (k.sign() > 0) return a;
    return ExtBound(a.kind_ == Kind::PlusInfinity ? Kind::MinusInfinity : Kind::PlusInfinity);
  }

  friend bool operator==(const ExtBound& a, const ExtBound& b) {
    if (a.kind_ != b.kind_) return false;
    return !a.is_finite() || a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExtBound& a, const ExtBound& b) {
    if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
    if (!a.is_finite()) return std::strong_ordering::equal;
    return a.value_ <=> b.value_;
  }

  [[nodiscard]] std::string str() const {
    switch (kind_) {
      case Kind::MinusInfinity: return "-inf";
      case Kind::PlusInfinity: return "+inf";
      case Kind::Finite: break;
    }
    return value_.str();
  }

 private:
  explicit ExtBound(Kind k) : kind_(k) {}
  static int rank(Kind k) {
    return k == Kind::MinusInfinity ? 0 : (k == Kind::Finite ? 1 : 2);
  }

  Kind kind_ = Kind::MinusInfinity;
  DeltaRat value_;
};

}  // namespace mixsimplex
