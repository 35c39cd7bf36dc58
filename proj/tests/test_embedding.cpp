#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "edpflow/embedding.hpp"
#include "edpflow/errors.hpp"

using namespace edpflow;
using namespace edpflow::testing;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(EmbedPc, ConstantAndLookup) {
  const TorusGrid g(2, 3);
  const auto rho = embed_pc(g, make_cell_field(g, 1, 5.0));
  const double x[] = {0.71, 0.13};
  EXPECT_EQ(rho.value(0, x), 5.0);
  EXPECT_EQ(rho.kind(), PiecewiseField::Kind::constant_per_cell);
  EXPECT_NEAR(rho.integral(0), 5.0, 1e-15);

  const TorusGrid g1(1, 4);
  const auto r1 = embed_pc(g1, cells(g1, 1, {1, 2, 3, 4}));
  const double y[] = {0.6};
  EXPECT_EQ(r1.value(0, y), 3.0);
  EXPECT_NEAR(r1.l1(0), 2.5, 1e-15);
}

TEST(EmbedFluxDiff, ConstantFluxGivesConstantProfile) {
  const TorusGrid g(2, 4);
  const auto f = embed_flux_diff(g, make_edge_field(g, 1, 3.0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    const double x[] = {u(rng), u(rng)};
    EXPECT_NEAR(f.value(0, x), 3.0 / 4, 1e-14);
    EXPECT_NEAR(f.value(1, x), 3.0 / 4, 1e-14);
  }
}

TEST(EmbedFluxDiff, SingleEdgeIsATent) {
  const int N = 8;
  const TorusGrid g(1, N);
  EdgeField F = make_edge_field(g, 1);
  F(0, 0) = N;
  const auto f = embed_flux_diff(g, F);
  EXPECT_NEAR(f.integral(0), 1.0 / N, 1e-15);
  int support = 0;
  for (std::size_t k = 0; k < g.cells(); ++k) {
    const double mid[] = {(k + 0.5) / N};
    if (f.value(0, mid) != 0.0) ++support;
  }
  EXPECT_EQ(support, 2);
}

TEST(EmbedFluxDiff, DualityWithSine) {
  const int N = 8;
  const TorusGrid g(1, N);
  std::mt19937_64 rng(2);
  EdgeField F = make_edge_field(g, 1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : F.flat()) v = u(rng);
  const std::vector<PointFn> phi{[](std::span<const double> x) { return std::sin(2 * kPi * x[0]); }};
  const auto f = embed_flux_diff(g, F);
  const double lhs =
      integrate(g, [&](std::span<const double> x) { return f.value(0, x) * 2 * kPi * std::cos(2 * kPi * x[0]); }, 8);
  const double rhs = pairing(g, F, disc_gradient(g, discretize_fields(g, phi, 8)));
  EXPECT_NEAR(lhs, rhs, 1e-10);
}

TEST(EmbedFluxReact, ConstantAndDuality) {
  const TorusGrid g(2, 4);
  const auto net = exchange_net();
  for (double v : edpflow::testing::values(embed_flux_react(g, make_react_field(g, 1, 1.0)))) EXPECT_EQ(v, 1.0);

  std::mt19937_64 rng(3);
  ReactField J = make_react_field(g, 1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double& v : J.flat()) v = u(rng);
  const std::vector<PointFn> phi{[](std::span<const double> x) { return std::cos(2 * kPi * x[0]); },
                                 [](std::span<const double>) { return 0.0; }};
  const auto j = embed_flux_react(g, J);
  const double lhs = integrate(g, [&](std::span<const double> x) { return j.value(0, x) * phi[0](x); }, 8);
  const double rhs = pairing(g, J, gamma_lift(net, discretize_fields(g, phi, 8)));
  EXPECT_NEAR(lhs, rhs, 1e-12);
}

TEST(Hats, CellCentreValue) {
  for (int d = 1; d <= 3; ++d) {
    const TorusGrid g(d, 4);
    std::array<double, 3> x{0.125, 0.125, 0.125};
    for (int m = 0; m < (1 << d); ++m) {
      std::array<int, 3> mm{(m >> 0) & 1, (m >> 1) & 1, (m >> 2) & 1};
      EXPECT_NEAR(hat_f(g, std::span<const int>(mm.data(), d), std::span<const double>(x.data(), d)),
                  std::ldexp(1.0, -d), 1e-15);
    }
  }
}

TEST(Hats, PartitionOfUnityOnBaseCell) {
  const TorusGrid g(2, 4);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 0.25);
  for (int t = 0; t < 100; ++t) {
    const double x[] = {u(rng), u(rng)};
    double s = 0;
    for (int m = 0; m < 4; ++m) {
      const int mm[] = {m & 1, (m >> 1) & 1};
      s += hat_f(g, mm, x);
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
  const double outside[] = {0.5, 0.1};
  const int m0[] = {0, 0};
  EXPECT_EQ(hat_f(g, m0, outside), 0.0);
}

TEST(Hats, TentIntegral) {
  const TorusGrid g(2, 4);
  for (std::size_t k : {std::size_t{0}, std::size_t{5}, std::size_t{15}}) {
    const double v = integrate(g, [&](std::span<const double> x) { return hat_h(g, k, x); }, 4);
    EXPECT_NEAR(v, 1.0 / 16, 1e-12);
  }
}

TEST(EmbedMultilinear, Examples) {
  const TorusGrid g(1, 2);
  const double q[] = {0.25};
  EXPECT_NEAR(embed_multilinear(g, cells(g, 1, {0, 1})).value(0, q), 0.5, 1e-15);
  const auto c = embed_multilinear(g, cells(g, 1, {2, 2}));
  const double r[] = {0.9};
  EXPECT_NEAR(c.value(0, r), 2.0, 1e-15);
  EXPECT_NEAR(embed_multilinear(g, cells(g, 1, {0, 1})).partial(0, 0, q), 2.0, 1e-14);
}

TEST(RhoTilde, EquilibriumReproducesOmega) {
  const auto sys = make_system(exchange_net(1.0, {2.0, 0.5}), TorusGrid(2, 3));
  const RhoTilde rt(sys, sys.weights);
  const double x[] = {0.37, 0.81};
  EXPECT_NEAR(rt.value(0, x), 2.0, 1e-14);
  EXPECT_NEAR(rt.value(1, x), 0.5, 1e-14);
}

TEST(NablaN, Examples) {
  const TorusGrid g(1, 4);
  for (double v : edpflow::testing::values(nabla_n(g, make_cell_field(g, 1, 0.3)))) EXPECT_EQ(v, 0.0);
  const auto d = nabla_n(g, cells(g, 1, {0, 0.25, 0.5, 0.75}));
  EXPECT_NEAR(d(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(d(0, 1), 1.0, 1e-15);
  EXPECT_NEAR(d(0, 2), 1.0, 1e-15);
  EXPECT_NEAR(d(0, 3), -3.0, 1e-15);
}

TEST(SampleUniform, Shape) {
  const TorusGrid g(2, 2);
  const auto f = embed_pc(g, cells(g, 1, {1, 2, 3, 4}));
  const auto s = sample_uniform(f, 0, 4);
  ASSERT_EQ(s.size(), 16u);
}

TEST(L1Distance, PiecewiseConstantFields) {
  const TorusGrid g(1, 4);
  const auto a = embed_pc(g, cells(g, 1, {1, 1, 1, 1}));
  const auto b = embed_pc(g, cells(g, 1, {0, 2, 1, 1}));
  EXPECT_NEAR(l1_distance(g, a, 0, b, 0), 0.5, 1e-15);
}
