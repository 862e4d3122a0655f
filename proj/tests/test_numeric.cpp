#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mixsimplex/delta.hpp"
#include "mixsimplex/rat.hpp"

using namespace mixsimplex;

namespace {

// Independent reference: plain GMP rationals.
struct RefQ {
  mpq_t q;
  RefQ(long n, unsigned long d) {
    mpq_init(q);
    mpq_set_si(q, n, d);
    mpq_canonicalize(q);
  }
  RefQ(const RefQ&) = delete;
  ~RefQ() { mpq_clear(q); }
  std::string str() const {
    char* s = mpq_get_str(nullptr, 10, q);
    std::string out(s);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(s, std::strlen(s) + 1);
    return out;
  }
};

std::int64_t draw(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Mixes tiny values with values near the small-tier limit.
std::pair<std::int64_t, std::int64_t> random_fraction(std::mt19937_64& rng) {
  constexpr std::int64_t big = std::numeric_limits<std::int32_t>::max();
  switch (draw(rng, 0, 2)) {
    case 0: return {draw(rng, -20, 20), draw(rng, 1, 20)};
    case 1: return {draw(rng, -big, big), draw(rng, 1, big)};
    default: return {draw(rng, -100000, 100000), draw(rng, 1, 100000)};
  }
}

}  // namespace

TEST(Rat, AddsFractions) { EXPECT_EQ(Rat(1, 2) + Rat(1, 3), Rat(5, 6)); }

TEST(Rat, ReciprocalProductIsOne) { EXPECT_EQ(Rat(2, 3) * Rat(3, 2), Rat(1)); }

TEST(Rat, OverflowOfSmallTierPromotes) {
  Rat a(2147483647);
  EXPECT_FALSE(a.is_big());
  reset_promoted_value_count();
  Rat s = a + Rat(1);
  EXPECT_TRUE(s.is_big());
  EXPECT_EQ(promoted_value_count(), 1u);
  EXPECT_EQ(s.str(), "2147483648");
  EXPECT_EQ(s - Rat(1), a);
}

TEST(Rat, AlwaysReduced) {
  Rat r(6, -4);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(r.denominator(), Rat(2));
  EXPECT_EQ(r.numerator(), Rat(-3));
}

TEST(Rat, DivisionByZeroIsContractViolation) {
  EXPECT_THROW(Rat(1) / Rat(0), ContractViolation);
  EXPECT_THROW(Rat(1, 0), ContractViolation);
  EXPECT_THROW(Rat(0).inverse(), ContractViolation);
}

TEST(Rat, ParsesTextualSyntax) {
  EXPECT_EQ(Rat::parse("-3/7"), Rat(-3, 7));
  EXPECT_EQ(Rat::parse("42"), Rat(42));
  EXPECT_EQ(Rat::parse("+4/6"), Rat(2, 3));
  EXPECT_EQ(Rat::parse("100000000000000000000")->str(), "100000000000000000000");
  EXPECT_FALSE(Rat::parse("1/0"));
  EXPECT_FALSE(Rat::parse("1/-2"));
  EXPECT_FALSE(Rat::parse("x"));
  EXPECT_FALSE(Rat::parse(""));
  EXPECT_FALSE(Rat::parse("1.5"));
}

TEST(Rat, FieldLawsMatchReference) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 4000; ++i) {
    auto [an, ad] = random_fraction(rng);
    auto [bn, bd] = random_fraction(rng);
    auto [cn, cd] = random_fraction(rng);
    Rat a(an, ad), b(bn, bd), c(cn, cd);
    RefQ ra(an, ad), rb(bn, bd), r(0, 1);

    mpq_add(r.q, ra.q, rb.q);
    EXPECT_EQ((a + b).str(), r.str());
    mpq_sub(r.q, ra.q, rb.q);
    EXPECT_EQ((a - b).str(), r.str());
    mpq_mul(r.q, ra.q, rb.q);
    EXPECT_EQ((a * b).str(), r.str());
    if (bn != 0) {
      mpq_div(r.q, ra.q, rb.q);
      EXPECT_EQ((a / b).str(), r.str());
    }
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a <=> b), (mpq_cmp(ra.q, rb.q) < 0   ? std::strong_ordering::less
                          : mpq_cmp(ra.q, rb.q) > 0 ? std::strong_ordering::greater
                                                    : std::strong_ordering::equal));
  }
}

TEST(Rat, TierIsInvisible) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto [an, ad] = random_fraction(rng);
    auto [bn, bd] = random_fraction(rng);
    Rat a(an, ad), b(bn, bd);
    Rat sum = a + b, prod = a * b, diff = a - b;
    ForceBigTier guard;
    Rat A(an, ad), B(bn, bd);
    EXPECT_TRUE(A.is_big());
    EXPECT_EQ(A, a);
    EXPECT_EQ(A + B, sum);
    EXPECT_EQ(A * B, prod);
    EXPECT_EQ(A - B, diff);
    EXPECT_EQ((A + B).str(), sum.str());
    EXPECT_EQ((A <=> B), (a <=> b));
    EXPECT_EQ(A.to_double(), a.to_double());
  }
}

TEST(Rat, ToDoubleIsCorrectlyRounded) {
  EXPECT_EQ(Rat(1, 3).to_double(), 1.0 / 3.0);
  EXPECT_EQ(Rat(-7, 10).to_double(), -0.7);
  {
    ForceBigTier guard;
    EXPECT_EQ(Rat(1, 3).to_double(), 1.0 / 3.0);
    EXPECT_EQ(Rat(-7, 10).to_double(), -0.7);
    EXPECT_EQ(Rat(2147483647, 3).to_double(), 2147483647.0 / 3.0);
  }
  // 2^53 + 1 is a tie between 2^53 and 2^53 + 2: rounds to even.
  EXPECT_EQ(Rat::parse("9007199254740993")->to_double(), 9007199254740992.0);
  EXPECT_EQ(Rat::parse("9007199254740995")->to_double(), 9007199254740996.0);
  // Smallest subnormal and underflow to zero.
  Rat two_1074 = Rat(1);
  for (int i = 0; i < 1074; ++i) two_1074 *= Rat(2);
  EXPECT_EQ((Rat(1) / two_1074).to_double(), std::numeric_limits<double>::denorm_min());
  EXPECT_EQ((Rat(1) / (two_1074 * Rat(4))).to_double(), 0.0);
}

TEST(Rat, PrintsAndStreams) {
  std::ostringstream os;
  os << Rat(-5, 10) << ' ' << Rat(3);
  EXPECT_EQ(os.str(), "-1/2 3");
}

TEST(DeltaRat, EpsilonIsPositive) {
  EXPECT_LT(DeltaRat(Rat(1), Rat(0)), DeltaRat(Rat(1), Rat(1)));
}

TEST(DeltaRat, RealPartDominates) {
  EXPECT_LT(DeltaRat(Rat(1), Rat(5)), DeltaRat(Rat(2), Rat(-100)));
}

TEST(DeltaRat, Identity) {
  EXPECT_EQ(delta_cmp(DeltaRat(Rat(3), Rat(-1)), DeltaRat(Rat(3), Rat(-1))),
            std::strong_ordering::equal);
}

TEST(DeltaRat, TotalOrderOnRandomTriples) {
  std::mt19937_64 rng(3);
  auto rnd = [&] { return DeltaRat(Rat(draw(rng, -3, 3), draw(rng, 1, 3)), Rat(draw(rng, -3, 3))); };
  for (int i = 0; i < 5000; ++i) {
    DeltaRat a = rnd(), b = rnd(), c = rnd();
    auto ab = delta_cmp(a, b), ba = delta_cmp(b, a);
    EXPECT_EQ(ab == std::strong_ordering::less, ba == std::strong_ordering::greater);
    EXPECT_EQ(ab == std::strong_ordering::equal, a == b);
    if (a <= b && b <= c) {
      EXPECT_LE(a, c);
    }
    bool lex = a.real < b.real || (a.real == b.real && a.eps < b.eps);
    EXPECT_EQ(a < b, lex);
    // Ordered vector space: translation and positive scaling preserve order.
    if (a < b) {
      EXPECT_LT(a + c, b + c);
      EXPECT_LT(Rat(2, 3) * a, Rat(2, 3) * b);
      EXPECT_GT(Rat(-1) * a, Rat(-1) * b);
    }
  }
}

TEST(RoundToBinary64, DropsEpsilon) { EXPECT_EQ(round_to_binary64(DeltaRat(Rat(1, 2), Rat(3))), 0.5); }

TEST(RoundToBinary64, NearestToOneThird) {
  double d = round_to_binary64(DeltaRat(Rat(1, 3)));
  EXPECT_EQ(d, 1.0 / 3.0);
  // 1/3 lies between 6004799503160661 / 2^54 and the next binary64 up,
  // closer to the former.
  Rat lower = *Rat::parse("6004799503160661/18014398509481984");
  Rat upper = *Rat::parse("6004799503160662/18014398509481984");
  EXPECT_EQ(lower.to_double(), d);
  EXPECT_LT(Rat(1, 3) - lower, upper - Rat(1, 3));
}

TEST(RoundToBinary64, HugeValueOverflowsToInfinity) {
  Rat big(1);
  for (int i = 0; i < 400; ++i) big *= Rat(10);
  EXPECT_EQ(round_to_binary64(DeltaRat(big)), std::numeric_limits<double>::infinity());
  EXPECT_EQ(round_to_binary64(DeltaRat(-big)), -std::numeric_limits<double>::infinity());
  // Just below the overflow threshold stays finite.
  EXPECT_EQ(Rat::parse("179769313486231570814527423731704356798070567525844996598917476803157260780028538760589558632766878171540458953514382464234321326889464182768467546703537516986049910576551282076245490090389328944075868508455133942304583236903222948165808559332123348274797826204144723168738177180919299881250404026184124858368")->to_double(),
            std::numeric_limits<double>::max());
}

TEST(ExtBound, InfinitiesBracketFiniteValues) {
  ExtBound lo = ExtBound::minus_infinity(), hi = ExtBound::plus_infinity();
  ExtBound mid(DeltaRat(Rat(7), Rat(-1)));
  EXPECT_LT(lo, mid);
  EXPECT_LT(mid, hi);
  EXPECT_LT(lo, hi);
  EXPECT_EQ(lo, ExtBound::minus_infinity());
  EXPECT_EQ(mid.value(), DeltaRat(Rat(7), Rat(-1)));
}
