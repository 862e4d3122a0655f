#pragma once

// Exact rationals with two storage tiers.
//
// A value lives either on the small tier (a pair of 32-bit words, numerator
// and denominator each bounded by INT32_MAX in magnitude) or on the big tier
// (a GMP mpq_t). Every arithmetic result is reduced and placed on the small
// tier whenever it fits; otherwise it is promoted. The tier is not
// observable through values, comparisons or printing.

#include <gmp.h>

#include <compare>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mixsimplex {

/// Raised when a documented precondition is violated. Never part of the
/// normal control flow; callers treat it as an internal error.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {
inline thread_local std::uint64_t big_tier_results = 0;
inline thread_local bool force_big_tier = false;
}  // namespace detail

/// Number of arithmetic results that needed the big tier on this thread.
inline std::uint64_t promoted_value_count() noexcept {
  return detail::big_tier_results;
}
inline void reset_promoted_value_count() noexcept {
  detail::big_tier_results = 0;
}

/// While alive, every Rat produced on this thread is stored on the big tier.
/// Used to check that results do not depend on the tier.
class ForceBigTier {
 public:
  ForceBigTier() noexcept : saved_(detail::force_big_tier) {
    detail::force_big_tier = true;
  }
  ~ForceBigTier() { detail::force_big_tier = saved_; }
  ForceBigTier(const ForceBigTier&) = delete;
  ForceBigTier& operator=(const ForceBigTier&) = delete;

 private:
  bool saved_;
};

class Rat {
 public:
  static constexpr std::int64_t kSmallMax = std::numeric_limits<std::int32_t>::max();

  Rat() noexcept = default;
  // NOLINTNEXTLINE(google-explicit-constructor)
  Rat(std::int64_t n) { set_reduced(n, 1); }
  Rat(std::int64_t num, std::int64_t den) {
    if (den == 0) throw ContractViolation("Rat: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    auto g = std::gcd(num, den);
    set_reduced(num / g, den / g);
  }

  Rat(const Rat& o) : num_(o.num_), den_(o.den_), big_(o.big_) {
    if (big_) {
      mpq_init(q_);
      mpq_set(q_, o.q_);
    }
  }
  Rat(Rat&& o) noexcept : num_(o.num_), den_(o.den_), big_(o.big_) {
    if (big_) steal(o);
  }
  Rat& operator=(const Rat& o) {
    if (this == &o) return *this;
    if (o.big_) {
      if (!big_) mpq_init(q_);
      mpq_set(q_, o.q_);
      big_ = true;
    } else {
      drop_big();
      num_ = o.num_;
      den_ = o.den_;
    }
    return *this;
  }
  Rat& operator=(Rat&& o) noexcept {
    if (this == &o) return *this;
    drop_big();
    num_ = o.num_;
    den_ = o.den_;
    big_ = o.big_;
    if (big_) steal(o);
    return *this;
  }
  ~Rat() { drop_big(); }

  /// Parses `[+-]digits[/digits]`. Returns nullopt on malformed input or a
  /// zero denominator.
  static std::optional<Rat> parse(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
      negative = body.front() == '-';
      body.remove_prefix(1);
    }
    auto slash = body.find('/');
    std::string_view num_digits = body.substr(0, slash);
    std::string_view den_digits =
        slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    auto all_digits = [](std::string_view s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    if (!all_digits(num_digits) || !all_digits(den_digits)) return std::nullopt;

    mpq_t q;
    mpq_init(q);
    std::string n(num_digits), d(den_digits);
    mpz_set_str(mpq_numref(q), n.c_str(), 10);
    mpz_set_str(mpq_denref(q), d.c_str(), 10);
    if (mpz_sgn(mpq_denref(q)) == 0) {
      mpq_clear(q);
      return std::nullopt;
    }
    mpq_canonicalize(q);
    if (negative) mpq_neg(q, q);
    Rat r;
    r.adopt(q);
    return r;
  }

  /// num/den for GMP integers, den != 0.
  static Rat from_mpz(mpz_srcptr num, mpz_srcptr den) {
    if (mpz_sgn(den) == 0) throw ContractViolation("Rat: zero denominator");
    mpq_t q;
    mpq_init(q);
    mpz_set(mpq_numref(q), num);
    mpz_set(mpq_denref(q), den);
    mpq_canonicalize(q);
    Rat r;
    r.adopt(q);
    return r;
  }
  static Rat from_mpz(mpz_srcptr num) {
    if (mpz_fits_slong_p(num)) return Rat(static_cast<std::int64_t>(mpz_get_si(num)));
    mpq_t q;
    mpq_init(q);
    mpz_set(mpq_numref(q), num);
    Rat r;
    r.adopt(q);
    return r;
  }
  void numerator_into(mpz_ptr out) const {
    if (big_) mpz_set(out, mpq_numref(q_));
    else mpz_set_si(out, num_);
  }
  void denominator_into(mpz_ptr out) const {
    if (big_) mpz_set(out, mpq_denref(q_));
    else mpz_set_si(out, den_);
  }

  [[nodiscard]] bool is_big() const noexcept { return big_; }
  [[nodiscard]] int sign() const noexcept {
    if (big_) return mpq_sgn(q_);
    return (num_ > 0) - (num_ < 0);
  }
  [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
  [[nodiscard]] bool is_integer() const noexcept {
    return big_ ? mpz_cmp_ui(mpq_denref(q_), 1) == 0 : den_ == 1;
  }

  [[nodiscard]] Rat numerator() const {
    if (!big_) return Rat(num_);
    Rat r;
    mpq_t q;
    mpq_init(q);
    mpz_set(mpq_numref(q), mpq_numref(q_));
    r.adopt(q);
    return r;
  }
  [[nodiscard]] Rat denominator() const {
    if (!big_) return Rat(den_);
    Rat r;
    mpq_t q;
    mpq_init(q);
    mpz_set(mpq_numref(q), mpq_denref(q_));
    r.adopt(q);
    return r;
  }

  [[nodiscard]] Rat abs() const { return sign() < 0 ? -*this : *this; }
  [[nodiscard]] Rat inverse() const {
    if (is_zero()) throw ContractViolation("Rat: inverse of zero");
    if (!big_) return Rat(den_, num_);
    return big_op(Rat(1), *this, mpq_div);
  }

  Rat operator-() const {
    if (!big_) {
      Rat r;
      r.set_reduced(-static_cast<std::int64_t>(num_), den_);
      return r;
    }
    mpq_t q;
    mpq_init(q);
    mpq_neg(q, q_);
    Rat r;
    r.adopt(q);
    return r;
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t n = std::int64_t{a.num_} * b.den_ + std::int64_t{b.num_} * a.den_;
      std::int64_t d = std::int64_t{a.den_} * b.den_;
      return from_i64(n, d);
    }
    return big_op(a, b, mpq_add);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t n = std::int64_t{a.num_} * b.den_ - std::int64_t{b.num_} * a.den_;
      std::int64_t d = std::int64_t{a.den_} * b.den_;
      return from_i64(n, d);
    }
    return big_op(a, b, mpq_sub);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
      return from_i64(std::int64_t{a.num_} * b.num_, std::int64_t{a.den_} * b.den_);
    }
    if (a.is_zero() || b.is_zero()) return Rat();
    return big_op(a, b, mpq_mul);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw ContractViolation("Rat: division by zero");
    if (!a.big_ && !b.big_) {
      std::int64_t n = std::int64_t{a.num_} * b.den_;
      std::int64_t d = std::int64_t{a.den_} * b.num_;
      if (d < 0) {
        n = -n;
        d = -d;
      }
      return from_i64(n, d);
    }
    return big_op(a, b, mpq_div);
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    return compare(a, b) == 0;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = compare(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// Round to the nearest binary64, ties to even. Values beyond the finite
  /// range become +-infinity.
  [[nodiscard]] double to_double() const {
    if (!big_) return static_cast<double>(num_) / static_cast<double>(den_);
    return big_to_double(q_);
  }

  [[nodiscard]] std::string str() const {
    if (!big_) {
      std::string s = std::to_string(num_);
      if (den_ != 1) s += "/" + std::to_string(den_);
      return s;
    }
    char* raw = mpq_get_str(nullptr, 10, q_);
    std::string s(raw);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(raw, std::strlen(raw) + 1);
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

  /// gcd of two integers (both must be integral); gcd(0, 0) = 0.
  friend Rat integer_gcd(const Rat& a, const Rat& b) {
    if (!a.is_integer() || !b.is_integer())
      throw ContractViolation("integer_gcd: non-integer operand");
    if (!a.big_ && !b.big_) return Rat(std::gcd(std::int64_t{a.num_}, std::int64_t{b.num_}));
    mpq_t q;
    mpq_init(q);
    MpqView va(a), vb(b);
    mpz_gcd(mpq_numref(q), mpq_numref(va.get()), mpq_numref(vb.get()));
    Rat r;
    r.adopt(q);
    return r;
  }
  friend Rat integer_lcm(const Rat& a, const Rat& b) {
    if (!a.is_integer() || !b.is_integer())
      throw ContractViolation("integer_lcm: non-integer operand");
    mpq_t q;
    mpq_init(q);
    MpqView va(a), vb(b);
    mpz_lcm(mpq_numref(q), mpq_numref(va.get()), mpq_numref(vb.get()));
    Rat r;
    r.adopt(q);
    return r;
  }

 private:
  // Read-only mpq view of either tier.
  class MpqView {
   public:
    explicit MpqView(const Rat& r) : src_(r.big_ ? r.q_ : nullptr) {
      if (!src_) {
        mpq_init(tmp_);
        mpz_set_si(mpq_numref(tmp_), r.num_);
        mpz_set_si(mpq_denref(tmp_), r.den_);
      }
    }
    ~MpqView() {
      if (!src_) mpq_clear(tmp_);
    }
    MpqView(const MpqView&) = delete;
    MpqView& operator=(const MpqView&) = delete;
    [[nodiscard]] mpq_srcptr get() const { return src_ ? src_ : tmp_; }

   private:
    mpq_srcptr src_;
    mpq_t tmp_;
  };

  static int compare(const Rat& a, const Rat& b) {
    if (!a.big_ && !b.big_) {
      std::int64_t l = std::int64_t{a.num_} * b.den_;
      std::int64_t r = std::int64_t{b.num_} * a.den_;
      return (l > r) - (l < r);
    }
    MpqView va(a), vb(b);
    int c = mpq_cmp(va.get(), vb.get());
    return (c > 0) - (c < 0);
  }

  static Rat from_i64(std::int64_t n, std::int64_t d) {
    auto g = std::gcd(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    Rat r;
    r.set_reduced(n, d);
    return r;
  }

  static Rat big_op(const Rat& a, const Rat& b, void (*op)(mpq_ptr, mpq_srcptr, mpq_srcptr)) {
    MpqView va(a), vb(b);
    mpq_t q;
    mpq_init(q);
    op(q, va.get(), vb.get());
    Rat r;
    r.adopt(q);
    return r;
  }

  // n/d already reduced, d > 0.
  void set_reduced(std::int64_t n, std::int64_t d) {
    drop_big();
    if (!detail::force_big_tier && n <= kSmallMax && n >= -kSmallMax && d <= kSmallMax) {
      num_ = static_cast<std::int32_t>(n);
      den_ = static_cast<std::int32_t>(d);
      return;
    }
    mpq_init(q_);
    mpz_set_si(mpq_numref(q_), n);
    mpz_set_si(mpq_denref(q_), d);
    big_ = true;
    ++detail::big_tier_results;
  }

  // Takes ownership of a canonical mpq and places it on the right tier.
  void adopt(mpq_t q) {
    drop_big();
    if (!detail::force_big_tier && fits_small(mpq_numref(q)) && fits_small(mpq_denref(q))) {
      num_ = static_cast<std::int32_t>(mpz_get_si(mpq_numref(q)));
      den_ = static_cast<std::int32_t>(mpz_get_si(mpq_denref(q)));
      mpq_clear(q);
      return;
    }
    std::memcpy(q_, q, sizeof(mpq_t));
    big_ = true;
    ++detail::big_tier_results;
  }

  static bool fits_small(mpz_srcptr z) {
    return mpz_cmpabs_ui(z, static_cast<unsigned long>(kSmallMax)) <= 0;
  }

  void steal(Rat& o) noexcept {
    std::memcpy(q_, o.q_, sizeof(mpq_t));
    o.big_ = false;
    o.num_ = 0;
    o.den_ = 1;
  }
  void drop_big() noexcept {
    if (big_) {
      mpq_clear(q_);
      big_ = false;
    }
  }

  static double big_to_double(mpq_srcptr q) {
    int s = mpq_sgn(q);
    if (s == 0) return 0.0;
    mpz_t n, d, quo, rem;
    mpz_inits(n, d, quo, rem, nullptr);
    mpz_abs(n, mpq_numref(q));
    mpz_set(d, mpq_denref(q));

    // Scale so that the integer quotient carries at least 54 bits.
    long e = static_cast<long>(mpz_sizeinbase(n, 2)) - static_cast<long>(mpz_sizeinbase(d, 2)) - 55;
    if (e >= 0)
      mpz_mul_2exp(d, d, static_cast<mp_bitcnt_t>(e));
    else
      mpz_mul_2exp(n, n, static_cast<mp_bitcnt_t>(-e));
    mpz_tdiv_qr(quo, rem, n, d);
    bool sticky = mpz_sgn(rem) != 0;

    long bits = static_cast<long>(mpz_sizeinbase(quo, 2));
    long shift = bits - 53;
    constexpr long kMinExp = -1074;  // exponent of the least subnormal
    if (e + shift < kMinExp) shift = kMinExp - e;

    double result;
    if (shift >= bits + 1) {
      // Everything is below half an ulp of the least subnormal.
      result = 0.0;
    } else {
      mpz_t mant;
      mpz_init(mant);
      mpz_tdiv_q_2exp(mant, quo, static_cast<mp_bitcnt_t>(shift));
      bool half = mpz_tstbit(quo, static_cast<mp_bitcnt_t>(shift - 1)) != 0;
      bool below = sticky || mpz_scan1(quo, 0) < static_cast<mp_bitcnt_t>(shift - 1);
      if (half && (below || mpz_odd_p(mant))) mpz_add_ui(mant, mant, 1);
      long exp2 = e + shift;
      double m = mpz_get_d(mant);  // exact, at most 2^53
      if (exp2 > 2000)
        result = std::numeric_limits<double>::infinity();
      else
        result = std::ldexp(m, static_cast<int>(exp2));
      mpz_clear(mant);
    }
    mpz_clears(n, d, quo, rem, nullptr);
    return s < 0 ? -result : result;
  }

  std::int32_t num_ = 0;
  std::int32_t den_ = 1;
  bool big_ = false;
  mpq_t q_;  // valid iff big_
};

}  // namespace mixsimplex
