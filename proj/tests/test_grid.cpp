#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "common.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/grid.hpp"

using namespace edpflow;
using edpflow::testing::cells;

TEST(DiscGradient, ConstantIsZero) {
  const TorusGrid g(2, 4);
  const auto grad = disc_gradient(g, make_cell_field(g, 2, 3.5));
  for (double v : grad.flat()) EXPECT_EQ(v, 0.0);
}

TEST(DiscGradient, PeriodicWrap) {
  const TorusGrid g(1, 2);
  const auto grad = disc_gradient(g, cells(g, 1, {0, 1}));
  EXPECT_EQ(grad(0, 0), 1.0);
  EXPECT_EQ(grad(0, 1), -1.0);
}

TEST(DiscGradient, TwoDimensionalRamp) {
  const TorusGrid g(2, 4);
  CellField phi = make_cell_field(g, 1);
  for (std::size_t k = 0; k < g.cells(); ++k) phi(0, k) = g.coords(k)[0];
  const auto grad = disc_gradient(g, phi);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    EXPECT_EQ(grad(0, k, 0), g.coords(k)[0] == 3 ? -3.0 : 1.0);
    EXPECT_EQ(grad(0, k, 1), 0.0);
  }
}

TEST(GammaLift, Exchange) {
  const TorusGrid g(1, 3);
  const auto net = edpflow::testing::exchange_net();
  CellField phi = make_cell_field(g, 2);
  for (std::size_t k = 0; k < 3; ++k) {
    phi(0, k) = 3;
    phi(1, k) = 1;
  }
  const auto lift = gamma_lift(net, phi);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(lift(0, k), 2.0);
  for (std::size_t k = 0; k < 3; ++k) phi(0, k) = phi(1, k) = 1;
  for (double v : edpflow::testing::values(gamma_lift(net, phi))) EXPECT_EQ(v, 0.0);
}

TEST(CeAdjoint, SingleEdge) {
  const TorusGrid g(1, 2);
  const auto net = edpflow::testing::heat_net();
  EdgeField f = make_edge_field(g, 1);
  f(0, 0) = 1.0;
  const auto div = ce_adjoint(g, net, f, make_react_field(g, 0));
  EXPECT_EQ(div(0, 0), -1.0);
  EXPECT_EQ(div(0, 1), 1.0);
}

TEST(CeAdjoint, AdjointOfGradientAndLift) {
  const TorusGrid g(2, 3);
  const auto net = edpflow::testing::exchange_net();
  std::mt19937_64 rng(7);
  const auto phi = edpflow::testing::random_positive(g, 2, rng, -1, 1);
  EdgeField f = make_edge_field(g, 2);
  ReactField j = make_react_field(g, 1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : f.flat()) v = u(rng);
  for (double& v : j.flat()) v = u(rng);
  const double lhs = pairing(g, ce_adjoint(g, net, f, j), phi);
  const double rhs = pairing(g, f, disc_gradient(g, phi)) + pairing(g, j, gamma_lift(net, phi));
  EXPECT_NEAR(lhs, rhs, 1e-13);
}

TEST(Discretize, Constant) {
  const TorusGrid g(2, 3);
  const std::vector<PointFn> f{[](std::span<const double>) { return 7.0; }};
  for (double v : edpflow::testing::values(discretize(g, f))) EXPECT_NEAR(v, 7.0, 1e-14);
}

TEST(Discretize, CosineCellAverage) {
  const TorusGrid g(1, 4);
  const std::vector<PointFn> f{[](std::span<const double> x) { return std::cos(2 * std::numbers::pi * x[0]); }};
  EXPECT_NEAR(discretize(g, f, 8)(0, 0), 2.0 / std::numbers::pi, 1e-12);
}

TEST(ReferenceWeights, Examples) {
  const TorusGrid g4(1, 4), g1(1, 1);
  for (double v : edpflow::testing::values(reference_weights(edpflow::testing::heat_net(), g4))) EXPECT_EQ(v, 1.0);
  const ReactionNetwork var(1, {}, {1.0}, ReferenceDensity(std::vector<Expr>{Expr::parse("2 + cos(2*pi*x)")}));
  EXPECT_NEAR(reference_weights(var, g1)(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(reference_weights(var, g4)(0, 0), 2.0 + 2.0 / std::numbers::pi, 1e-12);
}

TEST(ReferenceWeights, RejectsNonPositive) {
  const ReactionNetwork bad(1, {}, {1.0}, ReferenceDensity(std::vector<Expr>{Expr::parse("cos(2*pi*x)")}));
  EXPECT_THROW(reference_weights(bad, TorusGrid(1, 4)), DomainError);
}

TEST(TorusGrid, RejectsBadShape) {
  EXPECT_THROW(TorusGrid(0, 4), ConfigError);
  EXPECT_THROW(TorusGrid(4, 4), ConfigError);
  EXPECT_THROW(TorusGrid(1, 0), ConfigError);
}

TEST(TorusGrid, IndexCoordsRoundTrip) {
  const TorusGrid g(3, 5);
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const auto c = g.coords(k);
    EXPECT_EQ(g.index(std::span<const int>(c.data(), 3)), k);
  }
  EXPECT_DOUBLE_EQ(g.cell_volume(), 1.0 / 125.0);
}

TEST(GaussRule, IntegratesPolynomialsExactly) {
  for (int order = 1; order <= 8; ++order) {
    const auto& r = gauss_rule(order);
    double s = 0;
    for (std::size_t q = 0; q < r.nodes.size(); ++q) s += r.weights[q] * std::pow(r.nodes[q], 2 * order - 1);
    EXPECT_NEAR(s, 1.0 / (2 * order), 1e-14);
  }
  EXPECT_THROW(gauss_rule(9), DomainError);
}
