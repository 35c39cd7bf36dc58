#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "edpflow/cosh.hpp"
#include "edpflow/errors.hpp"

using namespace edpflow;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(Cstar, Examples) {
  EXPECT_EQ(cosh::cstar(0.0), 0.0);
  EXPECT_NEAR(cosh::cstar(2.0 * std::log(2.0)), 1.0, 1e-15);
  EXPECT_EQ(cosh::cstar(-3.7), cosh::cstar(3.7));
  EXPECT_NEAR(cosh::cstar_prime(1.3), 2.0 * std::sinh(0.65), 1e-15);
}

TEST(Cstar, SmallArgumentHasNoCancellation) {
  EXPECT_NEAR(cosh::cstar(1e-8) / (0.5 * 1e-16), 1.0, 1e-12);
}

TEST(COfS, Examples) {
  EXPECT_EQ(cosh::c_of_s(0.0), 0.0);
  EXPECT_NEAR(cosh::c_of_s(2.0), 1.8686400985857916, 1e-14);
  EXPECT_NEAR(cosh::c_prime(2.0), 1.7627471740390859, 1e-14);
  EXPECT_EQ(cosh::c_prime(0.0), 0.0);
  EXPECT_NEAR(cosh::c_of_s(5.0), 9.7019818494419479, 1e-12);
  EXPECT_EQ(cosh::c_of_s(-3.5), cosh::c_of_s(3.5));
}

TEST(COfS, DerivativeSandwichAtOne) {
  const double c = cosh::c_of_s(1.0);
  EXPECT_LE(c, cosh::c_prime(1.0));
  EXPECT_LE(cosh::c_prime(1.0), 2.0 * c);
}

TEST(COfS, StableForHugeArguments) {
  for (double s : {1e20, 1e100, 1e150}) {
    const double c = cosh::c_of_s(s);
    ASSERT_TRUE(std::isfinite(c));
    // C(s) = 2 s (log s - 1) + O(log s)
    EXPECT_NEAR(c / (2.0 * s * (std::log(s) - 1.0)), 1.0, 1e-12);
  }
}

TEST(COfS, SmallArgumentMatchesQuadraticTaylor) { EXPECT_NEAR(cosh::c_of_s(1e-6) / 0.5e-12, 1.0, 1e-10); }

TEST(Perspective, Examples) {
  EXPECT_EQ(cosh::perspective(0.0, 3.2), 0.0);
  EXPECT_EQ(cosh::perspective(1.0, 0.0), kInf);
  EXPECT_EQ(cosh::perspective(0.0, 0.0), 0.0);
  EXPECT_EQ(cosh::perspective(1.0, 1e-301), kInf);
  EXPECT_NEAR(cosh::perspective(4.0, 2.0), 3.7372801971715832, 1e-13);
}

TEST(PerspectiveDw, Examples) {
  EXPECT_EQ(cosh::perspective_dw(0.0, 1.0), 0.0);
  EXPECT_NEAR(cosh::perspective_dw(2.0, 1.0), -1.6568542494923806, 1e-14);
  EXPECT_NEAR(cosh::perspective_dw(-3.0, 0.5), -8.6491106406735181, 1e-14);
  EXPECT_THROW(cosh::perspective_dw(1.0, 0.0), DomainError);
}

TEST(LegendreOracle, Examples) {
  const cosh::UniformGrid fine{-10.0, 10.0, 20001};
  EXPECT_NEAR(cosh::legendre_oracle(cosh::cstar_fn(), 0.0, fine), 0.0, 1e-6);
  EXPECT_NEAR(cosh::legendre_oracle(cosh::cstar_fn(), 2.0, fine), cosh::c_of_s(2.0), 1e-4);
  const cosh::ScalarFn quad{[](double x) { return 0.5 * x * x; }, {}};
  EXPECT_NEAR(cosh::legendre_oracle(quad, 3.0, fine), 4.5, 1e-4);
  EXPECT_NEAR(cosh::legendre_oracle(cosh::cstar_fn(), 5.0), cosh::c_of_s(5.0), 1e-5);
}

TEST(XiSuperlinear, Examples) {
  const auto phi = cosh::c_fn();
  const cosh::ScalarFn psi{[](double w) { return 4.0 * w * w; }, [](double w) { return 8.0 * w; }};
  EXPECT_NEAR(cosh::xi_superlinear(phi, psi, 0.0), 0.0, 1e-12);
  EXPECT_NEAR(cosh::xi_superlinear(phi, psi, -7.0), cosh::xi_superlinear(phi, psi, 7.0), 1e-12);

  // dense scan over w in [1e-4, 1e4]
  const double s = 10.0;
  double best = kInf;
  for (int j = 0; j <= 800000; ++j) {
    const double w = std::pow(10.0, -4.0 + 8.0 * j / 800000.0);
    best = std::min(best, w * cosh::c_of_s(s / w) + 4.0 * w * w);
  }
  EXPECT_NEAR(cosh::xi_superlinear(phi, psi, s) / best, 1.0, 1e-5);
}

TEST(Boltzmann, Examples) {
  EXPECT_EQ(cosh::boltzmann_lambda(1.0), 0.0);
  EXPECT_EQ(cosh::boltzmann_lambda(0.0), 1.0);
  EXPECT_NEAR(cosh::boltzmann_lambda(2.0), 0.38629436111989057, 1e-15);
  EXPECT_THROW(cosh::boltzmann_lambda(-1e-3), DomainError);
}

TEST(BPairing, Examples) {
  EXPECT_EQ(cosh::b_pairing(1.0, 17.0), 0.0);
  EXPECT_EQ(cosh::b_pairing(0.0, 5.0), 0.0);
  EXPECT_NEAR(cosh::b_pairing(std::exp(1.0), 2.0), 2.0, 1e-15);
}

TEST(Counterexample, DecadeValues) {
  const auto a = cosh::counterexample_integrals(1e-2);
  const auto b = cosh::counterexample_integrals(1e-6);
  EXPECT_NEAR(a.c, 2.038113416435, 1e-9);
  EXPECT_NEAR(b.c, 5.178313867270, 1e-9);
  EXPECT_NEAR(a.perspective, 1.198186759835, 1e-9);
  EXPECT_NEAR(b.perspective, 2.208500057943, 1e-9);
  EXPECT_NEAR(a.boltzmann, 0.375603358842, 1e-9);
  EXPECT_NEAR(b.boltzmann, 0.461901312465, 1e-9);
  const auto coarse = cosh::counterexample_integrals(1e-6, 1.5, 2.5, 100);
  EXPECT_NEAR(coarse.perspective, b.perspective, 1e-11);
}

TEST(Counterexample, DivergenceRatesInLogScale) {
  // With L = log(1/eps) the C integral grows like 4 sqrt(L) while the other two converge
  // with tails of order L^(-1/2) log L; cutoffs far beyond 1e-6 separate the regimes.
  const double l1 = 150.0, l2 = 300.0, l3 = 600.0;
  const auto i1 = cosh::counterexample_integrals(std::exp(-l1));
  const auto i2 = cosh::counterexample_integrals(std::exp(-l2));
  const auto i3 = cosh::counterexample_integrals(std::exp(-l3));
  // divergent: increments do not shrink across doubling of L
  EXPECT_GT(i3.c - i2.c, 1.3 * (i2.c - i1.c));
  // convergent: increments shrink
  EXPECT_LT(i3.perspective - i2.perspective, 0.95 * (i2.perspective - i1.perspective));
  EXPECT_LT(i3.boltzmann - i2.boltzmann, 0.8 * (i2.boltzmann - i1.boltzmann));
}
