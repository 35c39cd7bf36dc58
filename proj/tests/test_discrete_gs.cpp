#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "common.hpp"
#include "edpflow/cosh.hpp"
#include "edpflow/discrete_gs.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/grid.hpp"
#include "edpflow/mutation.hpp"

using namespace edpflow;
using namespace edpflow::testing;

namespace {

DiscreteSystem exchange_sys(int n = 1) { return make_system(exchange_net(), TorusGrid(1, n)); }
DiscreteSystem heat_sys(int n = 2) { return make_system(heat_net(), TorusGrid(1, n)); }

double gap_of(const DiscreteSystem& sys, const CellField& c) {
  const auto fl = constitutive_fluxes(sys, c);
  return fenchel_gap(sys, c, fl.diff, fl.react);
}

}  // namespace

TEST(Energy, Examples) {
  const auto sys = heat_sys(2);
  EXPECT_EQ(energy(sys, sys.weights), 0.0);
  EXPECT_NEAR(energy(sys, cells(sys.grid, 1, {2, 0})), 0.69314718055994529, 1e-15);
  EXPECT_NEAR(energy(sys, cells(sys.grid, 1, {2, 2})), 0.38629436111989057, 1e-15);
  EXPECT_THROW(energy(sys, cells(sys.grid, 1, {1, -1e-9})), DomainError);
}

TEST(DualDissipation, Examples) {
  const auto ex = exchange_sys();
  const auto c = cells(ex.grid, 2, {1, 1});
  EXPECT_EQ(dual_dissipation(ex, c, make_edge_field(ex.grid, 2), make_react_field(ex.grid, 1)).total(), 0.0);
  const auto zeta = make_react_field(ex.grid, 1, 2.0 * std::log(2.0));
  EXPECT_NEAR(dual_dissipation(ex, c, make_edge_field(ex.grid, 2), zeta).react, 1.0, 1e-14);

  const auto ht = heat_sys(2);
  const auto xi = make_edge_field(ht.grid, 1, 2.0 * std::log(2.0));
  EXPECT_NEAR(dual_dissipation(ht, cells(ht.grid, 1, {1, 1}), xi, make_react_field(ht.grid, 0)).diff, 4.0, 1e-13);
}

TEST(PrimalDissipation, Examples) {
  const auto ex = exchange_sys();
  const auto c = cells(ex.grid, 2, {2, 3});
  EXPECT_EQ(primal_dissipation(ex, c, make_edge_field(ex.grid, 2), make_react_field(ex.grid, 1)).total(), 0.0);
  const auto dead = cells(ex.grid, 2, {0, 3});
  EXPECT_EQ(primal_dissipation(ex, dead, make_edge_field(ex.grid, 2), make_react_field(ex.grid, 1, 0.5)).react,
            std::numeric_limits<double>::infinity());
}

TEST(Slope, Examples) {
  const auto ex = exchange_sys();
  EXPECT_EQ(slope(ex, ex.weights).total(), 0.0);
  EXPECT_NEAR(slope(ex, cells(ex.grid, 2, {4, 1})).react, 2.0, 1e-14);
  const auto ht = heat_sys(2);
  EXPECT_NEAR(slope(ht, cells(ht.grid, 1, {4, 0})).diff, 32.0, 1e-13);
}

TEST(ConstitutiveFluxes, Examples) {
  const auto ex = exchange_sys();
  const auto eq = constitutive_fluxes(ex, ex.weights);
  for (double v : eq.react.flat()) EXPECT_EQ(v, 0.0);
  const auto c = cells(ex.grid, 2, {4, 1});
  const auto fl = constitutive_fluxes(ex, c);
  EXPECT_NEAR(fl.react(0, 0), -3.0, 1e-15);
  const auto dc = ce_adjoint(ex.grid, ex.network, fl.diff, fl.react);
  EXPECT_NEAR(dc(0, 0), -3.0, 1e-15);
  EXPECT_NEAR(dc(1, 0), 3.0, 1e-15);

  const auto ht = heat_sys(2);
  const auto c2 = cells(ht.grid, 1, {4, 0});
  const auto f2 = constitutive_fluxes(ht, c2);
  EXPECT_NEAR(f2.diff(0, 0), 16.0, 1e-14);
  EXPECT_NEAR(f2.diff(0, 1), -16.0, 1e-14);
  const auto d2 = ce_adjoint(ht.grid, ht.network, f2.diff, f2.react);
  EXPECT_NEAR(d2(0, 0), 4.0 * (0 - 8 + 0), 1e-13);
  EXPECT_NEAR(d2(0, 1), 4.0 * (4 - 0 + 4), 1e-13);
}

TEST(BRate, Examples) {
  const auto ex = exchange_sys();
  const auto v = cells(ex.grid, 2, {3, 5});
  EXPECT_EQ(b_rate(ex, ex.weights, v), 0.0);
  EXPECT_NEAR(b_rate(ex, cells(ex.grid, 2, {std::exp(1.0), 1}), v), 3.0, 1e-15);
  EXPECT_EQ(b_rate(ex, cells(ex.grid, 2, {0, 1}), v), 0.0);
}

TEST(FenchelGap, ConstitutiveFluxesAttainEquality) {
  std::mt19937_64 rng(11);
  for (int d : {1, 2}) {
    for (const auto& net : {exchange_net(), binary_net()}) {
      const auto sys = make_system(net, TorusGrid(d, d == 1 ? 8 : 4));
      for (int rep = 0; rep < 20; ++rep) {
        const auto c = random_positive(sys.grid, sys.species(), rng);
        const auto fl = constitutive_fluxes(sys, c);
        const auto rep_f = evaluate_functionals(sys, c, fl.diff, fl.react);
        const double gap = fenchel_gap(sys, c, fl.diff, fl.react);
        EXPECT_LE(std::fabs(gap), 1e-9 * (rep_f.dissipation_rate() + 1.0));
      }
    }
  }
}

TEST(FenchelGap, ZeroFluxGivesSlope) {
  const auto ex = make_system(exchange_net(), TorusGrid(1, 4));
  const auto c = cells(ex.grid, 2, {1, 2, 3, 4, 2, 2, 2, 2});
  const double gap = fenchel_gap(ex, c, make_edge_field(ex.grid, 2), make_react_field(ex.grid, 1));
  EXPECT_GT(gap, 0.0);
  EXPECT_NEAR(gap, slope(ex, c).total(), 1e-13 * gap);
}

TEST(FenchelGap, DoubledFluxesArePositive) {
  const auto ex = make_system(binary_net(), TorusGrid(1, 8));
  std::mt19937_64 rng(3);
  const auto c = random_positive(ex.grid, 3, rng);
  auto fl = constitutive_fluxes(ex, c);
  fl.diff *= 2.0;
  fl.react *= 2.0;
  EXPECT_GT(fenchel_gap(ex, c, fl.diff, fl.react), 1e-3);
}

TEST(FenchelGap, PreconditionNamesCell) {
  const auto ex = exchange_sys();
  const auto c = cells(ex.grid, 2, {0, 1});
  try {
    fenchel_gap(ex, c, make_edge_field(ex.grid, 2), make_react_field(ex.grid, 1, 1.0));
    FAIL() << "precondition not enforced";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("cell"), std::string::npos);
  }
}

TEST(FenchelGap, SignMutationBreaksEquality) {
  const auto ex = make_system(exchange_net(), TorusGrid(1, 8));
  std::mt19937_64 rng(5);
  const auto c = random_positive(ex.grid, 2, rng);
  EXPECT_NEAR(gap_of(ex, c), 0.0, 1e-9);
  const mutation::Scope scope(mutation::Kind::flux_sign);
  const auto fl = constitutive_fluxes(ex, c);
  const auto rep = evaluate_functionals(ex, c, fl.diff, fl.react);
  EXPECT_NEAR(gap_of(ex, c), 2.0 * (rep.dissipation_rate()), 1e-9 * rep.dissipation_rate());
}

TEST(EnergyRate, ChainRuleAlongRhs) {
  const auto sys = make_system(binary_net(), TorusGrid(2, 4));
  std::mt19937_64 rng(9);
  const auto c = random_positive(sys.grid, 3, rng);
  const auto fl = constitutive_fluxes(sys, c);
  const auto v = ce_adjoint(sys.grid, sys.network, fl.diff, fl.react);
  const double h = 1e-6;
  CellField cp = c, cm = c;
  for (std::size_t m = 0; m < c.size(); ++m) {
    cp.flat()[m] += h * v.flat()[m];
    cm.flat()[m] -= h * v.flat()[m];
  }
  const double fd = (energy(sys, cp) - energy(sys, cm)) / (2 * h);
  EXPECT_NEAR(fd, b_rate(sys, c, v), 1e-6 * (1 + std::fabs(fd)));
  const auto rep = evaluate_functionals(sys, c, fl.diff, fl.react);
  EXPECT_NEAR(b_rate(sys, c, v), -rep.dissipation_rate(), 1e-9 * (1 + std::fabs(fd)));
}

TEST(L1Norm, CellVolumeWeighted) {
  const TorusGrid g(1, 4);
  EXPECT_DOUBLE_EQ(l1_norm(g, cells(g, 1, {1, -2, 3, -4})), 2.5);
}
