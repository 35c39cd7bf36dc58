#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/network.hpp"

using namespace edpflow;
using edpflow::testing::exchange_net;

TEST(ValidateNetwork, ExchangeIsValid) {
  const auto rep = validate_network(exchange_net(), 1);
  EXPECT_TRUE(rep.valid());
  EXPECT_TRUE(rep.growth_a2);
}

TEST(ValidateNetwork, RejectsZeroKappa) {
  const auto rep = validate_network(exchange_net(0.0), 1);
  ASSERT_FALSE(rep.valid());
  EXPECT_NE(rep.violations.front().find("kappa"), std::string::npos);
}

TEST(ValidateNetwork, RejectsNegativeStoichiometry) {
  const ReactionNetwork net(2, {Reaction{{-1, 0}, {0, 1}, 1.0}}, {1.0, 1.0},
                            ReferenceDensity(std::vector<double>{1.0, 1.0}));
  const auto rep = validate_network(net, 1);
  ASSERT_FALSE(rep.valid());
  EXPECT_NE(rep.violations.front().find("alpha"), std::string::npos);
}

TEST(KappaFromRates, Examples) {
  const std::vector<double> one{1.0, 1.0}, a{1.0, 0.0}, b{0.0, 1.0};
  EXPECT_DOUBLE_EQ(kappa_from_rates(3.0, 3.0, one, a, b), 3.0);
  const std::vector<double> w{4.0, 1.0};
  EXPECT_NEAR(kappa_from_rates(1.0, 4.0, w, a, b), 2.0, 1e-15);
  try {
    kappa_from_rates(1.0, 2.0, one, a, b);
    FAIL() << "detailed-balance violation accepted";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('1'), std::string::npos);
    EXPECT_NE(msg.find('2'), std::string::npos);
  }
}

TEST(ConservationLaws, ExchangeBasis) {
  const auto basis = conservation_laws(stoich_matrix(exchange_net()));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], (std::vector<double>{1, 1}));
}

TEST(ConservationLaws, BinaryBasis) {
  const auto basis = conservation_laws(stoich_matrix(edpflow::testing::binary_net()));
  ASSERT_EQ(basis.size(), 2u);
  EXPECT_EQ(basis[0], (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(basis[1], (std::vector<double>{0, 1, 1}));
}

TEST(ConservationLaws, NoReactionsGivesStandardBasis) {
  const ReactionNetwork net(3, {}, {1, 1, 1}, ReferenceDensity(std::vector<double>{1, 1, 1}));
  const auto basis = conservation_laws(stoich_matrix(net));
  ASSERT_EQ(basis.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(basis[i][j], i == j ? 1.0 : 0.0);
}

TEST(ConservationLaws, NonIntegerStoichiometry) {
  const ReactionNetwork net(2, {Reaction{{0.5, 0}, {0, 1.5}, 1.0}}, {1, 1},
                            ReferenceDensity(std::vector<double>{1, 1}));
  const auto m = stoich_matrix(net);
  ASSERT_TRUE(m.exact.has_value());
  const auto basis = conservation_laws(m);
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_NEAR(basis[0][0] * 0.5 - basis[0][1] * 1.5, 0.0, 1e-14);
}

TEST(ToRational, Examples) {
  EXPECT_EQ(*to_rational(0.75), Rational(3, 4));
  EXPECT_EQ(*to_rational(-2.0), Rational(-2, 1));
  EXPECT_FALSE(to_rational(1e13 + 0.5).has_value());
  EXPECT_FALSE(to_rational(std::nan("")).has_value());
}

TEST(Monomial, Examples) {
  const std::vector<double> c{2, 3}, g{1, 2};
  EXPECT_DOUBLE_EQ(monomial(c, g), 18.0);
  const std::vector<double> zero{0, 0};
  EXPECT_DOUBLE_EQ(monomial(c, zero), 1.0);
  const std::vector<double> c2{0, 5}, g2{0, 1};
  EXPECT_DOUBLE_EQ(monomial(c2, g2), 5.0);
}

TEST(Network, FingerprintDistinguishesKappa) {
  EXPECT_EQ(exchange_net().fingerprint(), exchange_net().fingerprint());
  EXPECT_NE(exchange_net(1.0).fingerprint(), exchange_net(2.0).fingerprint());
}
