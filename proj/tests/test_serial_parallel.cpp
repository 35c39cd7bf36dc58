#include <gtest/gtest.h>

#include <cmath>

#include "common.hpp"
#include "edpflow/parallel.hpp"
#include "edpflow/serial/reference.hpp"
#include "edpflow/solver.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace edpflow;
using namespace edpflow::testing;

namespace {

// Large enough that the OpenMP kernels take the parallel path.
DiscreteSystem big_system() { return make_system(binary_net(), TorusGrid(2, 96)); }

void expect_close(std::span<const double> a, std::span<const double> b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  double worst = 0;
  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::fabs(v));
  for (std::size_t m = 0; m < a.size(); ++m) worst = std::max(worst, std::fabs(a[m] - b[m]) / scale);
  EXPECT_LE(worst, tol);
}

}  // namespace

TEST(SerialParallel, StencilsAgree) {
  const auto sys = big_system();
  std::mt19937_64 rng(1);
  const auto c = random_positive(sys.grid, 3, rng);
  expect_close(disc_gradient(sys.grid, c).flat(), serial::disc_gradient(sys.grid, c).flat(), 0.0);
  expect_close(gamma_lift(sys.network, c).flat(), serial::gamma_lift(sys.network, c).flat(), 0.0);
  const auto fl = constitutive_fluxes(sys, c);
  const auto sf = serial::constitutive_fluxes(sys, c);
  expect_close(fl.diff.flat(), sf.diff.flat(), 1e-15);
  expect_close(fl.react.flat(), sf.react.flat(), 1e-15);
  expect_close(ce_adjoint(sys.grid, sys.network, fl.diff, fl.react).flat(),
               serial::ce_adjoint(sys.grid, sys.network, fl.diff, fl.react).flat(), 1e-14);
  expect_close(rhs(sys, c).flat(), serial::rhs(sys, c).flat(), 1e-12);
}

TEST(SerialParallel, FunctionalsAgree) {
  const auto sys = big_system();
  std::mt19937_64 rng(2);
  const auto c = random_positive(sys.grid, 3, rng);
  const auto fl = constitutive_fluxes(sys, c);
  auto close = [](double a, double b) { EXPECT_NEAR(a, b, 1e-12 * (1 + std::fabs(b))); };
  close(energy(sys, c), serial::energy(sys, c));
  close(slope(sys, c).total(), serial::slope(sys, c).total());
  close(primal_dissipation(sys, c, fl.diff, fl.react).total(),
        serial::primal_dissipation(sys, c, fl.diff, fl.react).total());
  EdgeField xi = disc_gradient(sys.grid, c);
  ReactField zeta = gamma_lift(sys.network, c);
  close(dual_dissipation(sys, c, xi, zeta).total(), serial::dual_dissipation(sys, c, xi, zeta).total());
}

TEST(SerialParallel, ReductionsAreThreadCountInvariant) {
#ifdef _OPENMP
  const auto sys = big_system();
  std::mt19937_64 rng(3);
  const auto c = random_positive(sys.grid, 3, rng);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double e1 = energy(sys, c);
  const double s1 = slope(sys, c).total();
  const auto r1 = rhs(sys, c);
  omp_set_num_threads(4);
  EXPECT_EQ(energy(sys, c), e1);
  EXPECT_EQ(slope(sys, c).total(), s1);
  EXPECT_EQ(rhs(sys, c), r1);
  omp_set_num_threads(saved);
#else
  GTEST_SKIP() << "built without OpenMP";
#endif
}

TEST(SerialParallel, BlockSumIsDeterministic) {
  const std::size_t n = 100000;
  auto term = [](std::size_t k) { return 1.0 / (1.0 + static_cast<double>(k)); };
  const double a = parallel::block_sum(n, term);
  const double b = parallel::block_sum(n, term);
  EXPECT_EQ(a, b);
  double ref = 0;
  for (std::size_t k = 0; k < n; ++k) ref += term(k);
  EXPECT_NEAR(a, ref, 1e-12);
}

TEST(SerialParallel, ThreadsFromEnvironment) {
  ::setenv("EDPFLOW_THREADS", "2", 1);
  const int t = parallel::configure_threads_from_env();
#ifdef _OPENMP
  EXPECT_EQ(t, 2);
#else
  EXPECT_EQ(t, 1);
#endif
  ::unsetenv("EDPFLOW_THREADS");
}
