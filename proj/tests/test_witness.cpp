#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mixsimplex/driver.hpp"
#include "mixsimplex/witness.hpp"
#include "oracles/random_instances.hpp"

using namespace mixsimplex;

namespace {

const char* kWorkedExample =
    "1 x -2 y <= 1\n"
    "-1 y 3 z >= -1\n"
    "1 x -6 z >= 4\n";

std::vector<Rat> rats(std::initializer_list<Rat> l) { return l; }

}  // namespace

TEST(MaterializePoint, ZeroDirectionReturnsU) {
  auto sys = parse("x <= 1\nx y >= 0\n");
  auto p = materialize_point(rats({Rat(1), Rat(-1)}), rats({Rat(0), Rat(0)}), sys.constraints);
  EXPECT_EQ(p, rats({Rat(1), Rat(-1)}));
}

TEST(MaterializePoint, BoundedHalfLineTakesMidpoint) {
  auto sys = parse("x > 0\nx <= 1\n");
  auto p = materialize_point(rats({Rat(0)}), rats({Rat(1)}), sys.constraints);
  EXPECT_EQ(p, rats({Rat(1, 2)}));
}

TEST(MaterializePoint, UnboundedHalfLine) {
  auto sys = parse("x > 0\n");
  auto p = materialize_point(rats({Rat(0)}), rats({Rat(1)}), sys.constraints);
  EXPECT_EQ(p, rats({Rat(1, 2)}));
}

TEST(MaterializePoint, TightestConstraintLimitsStep) {
  // x > 0 and y > 0 with x + 4y <= 2 at u = 0, v = (1, 1): t0 = 2/5.
  auto sys = parse("x > 0\ny > 0\nx 4 y <= 2\n");
  auto p = materialize_point(rats({Rat(0), Rat(0)}), rats({Rat(1), Rat(1)}), sys.constraints);
  EXPECT_EQ(p, rats({Rat(1, 5), Rat(1, 5)}));
  EXPECT_TRUE(verify_sat(p, sys.constraints));
}

TEST(MaterializePoint, ViolatedAssignmentIsAContractFailure) {
  auto sys = parse("x < 0\n");
  EXPECT_THROW(materialize_point(rats({Rat(0)}), rats({Rat(1)}), sys.constraints),
               ContractViolation);
}

TEST(VerifySat, Examples) {
  auto worked = parse(kWorkedExample);
  EXPECT_FALSE(verify_sat(rats({Rat(0), Rat(0), Rat(0)}), worked.constraints));
  EXPECT_FALSE(verify_sat(rats({Rat(4), Rat(3, 2), Rat(0)}), worked.constraints));
  EXPECT_TRUE(verify_sat(rats({Rat(0)}), parse("x <= 1\n").constraints));
  EXPECT_FALSE(verify_sat(rats({Rat(1)}), parse("x < 1\n").constraints));
  EXPECT_TRUE(verify_sat(rats({Rat(1)}), parse("x = 1\n").constraints));
  EXPECT_FALSE(verify_sat(rats({}), parse("x <= 1\n").constraints));
}

TEST(VerifyUnsat, Examples) {
  auto worked = parse(kWorkedExample);
  EXPECT_TRUE(verify_unsat({{0, Rat(1)}, {1, Rat(2)}, {2, Rat(1)}}, worked.constraints));
  EXPECT_TRUE(verify_unsat({{0, Rat(3)}, {1, Rat(6)}, {2, Rat(3)}}, worked.constraints));
  EXPECT_FALSE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}, {2, Rat(1)}}, worked.constraints));
  EXPECT_FALSE(verify_unsat({{0, Rat(0)}, {1, Rat(0)}, {2, Rat(0)}}, worked.constraints));
  EXPECT_FALSE(verify_unsat({}, worked.constraints));
  EXPECT_TRUE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}}, parse("x <= 0\nx >= 1\n").constraints));
}

TEST(VerifyUnsat, RejectsNegativeInequalityMultiplier) {
  // -1 * (x <= 0) + -1 * (-x <= -1) would read 0 <= 1 anyway; a negative
  // weight on an inequality is never allowed.
  auto sys = parse("x <= 0\nx >= 1\n");
  EXPECT_FALSE(verify_unsat({{0, Rat(-1)}, {1, Rat(-1)}}, sys.constraints));
}

TEST(VerifyUnsat, StrictnessDecidesZeroConstant) {
  EXPECT_TRUE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}}, parse("x < 0\nx >= 0\n").constraints));
  EXPECT_FALSE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}}, parse("x <= 0\nx >= 0\n").constraints));
}

TEST(VerifyUnsat, EqualitiesTakeEitherSign) {
  auto sys = parse("x = 1\nx >= 2\n");
  EXPECT_TRUE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}}, sys.constraints));
  auto sys2 = parse("x = 1\nx <= 0\n");
  EXPECT_TRUE(verify_unsat({{0, Rat(-1)}, {1, Rat(1)}}, sys2.constraints));
}

TEST(VerifyUnsat, UnknownConstraintIdFails) {
  auto sys = parse("x <= 0\nx >= 1\n");
  EXPECT_FALSE(verify_unsat({{0, Rat(1)}, {1, Rat(1)}, {7, Rat(1)}}, sys.constraints));
}

TEST(VerdictText, RoundTripSat) {
  std::vector<std::string> names{"x", "y"};
  Verdict v = Verdict::make_sat(rats({Rat(1, 2), Rat(-3)}));
  std::ostringstream os;
  write_verdict(os, v, names);
  EXPECT_EQ(os.str(), "sat\nx 1/2\ny -3\n");
  std::istringstream is(os.str());
  auto back = read_verdict(is, names);
  ASSERT_TRUE(back);
  EXPECT_TRUE(back->sat());
  EXPECT_EQ(back->point, v.point);
}

TEST(VerdictText, RoundTripUnsat) {
  std::vector<std::string> names{"x"};
  Verdict v = Verdict::make_unsat({{0, Rat(1)}, {1, Rat(2)}, {2, Rat(1)}});
  std::ostringstream os;
  write_verdict(os, v, names);
  EXPECT_EQ(os.str(), "unsat\n0 1\n1 2\n2 1\n");
  std::istringstream is(os.str());
  auto back = read_verdict(is, names);
  ASSERT_TRUE(back);
  EXPECT_FALSE(back->sat());
  EXPECT_EQ(back->certificate, v.certificate);
}

TEST(VerdictText, MalformedInputIsRejected) {
  std::vector<std::string> names{"x"};
  for (const char* text : {"", "maybe\n", "sat\nz 1\n", "sat\nx\n", "sat\nx 1\nx 2\n",
                           "unsat\n0 1\n0 2\n", "unsat\n-1 1\n", "unsat\na 1\n", "sat\nx 1/0\n"}) {
    std::istringstream is(text);
    EXPECT_FALSE(read_verdict(is, names)) << text;
  }
}

TEST(WitnessProperty, NeverBothOnRandomCorpus) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    auto sys = gen::random_small_system(rng);
    Problem p = build_problem(sys);
    bool verified_sat = false, verified_unsat = false;
    for (Mode m : {Mode::Rational, Mode::Mixed}) {
      DriverOptions opts;
      opts.verify = false;
      Verdict v = decide(p, m, opts).verdict;
      if (v.sat())
        verified_sat = verified_sat || verify_sat(v.point, sys.constraints);
      else
        verified_unsat = verified_unsat || verify_unsat(v.certificate, sys.constraints);
    }
    EXPECT_NE(verified_sat, verified_unsat) << "instance " << i;
  }
}
