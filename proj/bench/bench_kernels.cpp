// Serial reference vs OpenMP kernels on the binary network X1 + X2 <-> X3 over a 2D torus.
// Thread count follows EDPFLOW_THREADS (or OMP_NUM_THREADS).

#include <benchmark/benchmark.h>

#include <random>

#include "edpflow/discrete_gs.hpp"
#include "edpflow/grid.hpp"
#include "edpflow/network.hpp"
#include "edpflow/parallel.hpp"
#include "edpflow/serial/reference.hpp"
#include "edpflow/solver.hpp"

using namespace edpflow;

namespace {

struct Setup {
  DiscreteSystem sys;
  CellField c;
  Fluxes fl;
};

Setup make_setup(int n) {
  ReactionNetwork net(3, {Reaction{{1, 1, 0}, {0, 0, 1}, 1.0}}, {1.0, 1.0, 1.0},
                      ReferenceDensity(std::vector<double>{1.0, 1.0, 1.0}));
  DiscreteSystem sys = make_system(std::move(net), TorusGrid(2, n));
  CellField c = make_cell_field(sys.grid, 3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (double& v : c.flat()) v = u(rng);
  Fluxes fl = constitutive_fluxes(sys, c);
  return {std::move(sys), std::move(c), std::move(fl)};
}

template <class F>
void run(benchmark::State& state, F&& kernel) {
  const Setup s = make_setup(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernel(s));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.sys.grid.cells()));
}

void BM_rhs_omp(benchmark::State& st) { run(st, [](const Setup& s) { return rhs(s.sys, s.c); }); }
void BM_rhs_serial(benchmark::State& st) { run(st, [](const Setup& s) { return serial::rhs(s.sys, s.c); }); }

void BM_fluxes_omp(benchmark::State& st) {
  run(st, [](const Setup& s) { return constitutive_fluxes(s.sys, s.c); });
}
void BM_fluxes_serial(benchmark::State& st) {
  run(st, [](const Setup& s) { return serial::constitutive_fluxes(s.sys, s.c); });
}

void BM_adjoint_omp(benchmark::State& st) {
  run(st, [](const Setup& s) { return ce_adjoint(s.sys.grid, s.sys.network, s.fl.diff, s.fl.react); });
}
void BM_adjoint_serial(benchmark::State& st) {
  run(st, [](const Setup& s) { return serial::ce_adjoint(s.sys.grid, s.sys.network, s.fl.diff, s.fl.react); });
}

void BM_energy_omp(benchmark::State& st) { run(st, [](const Setup& s) { return energy(s.sys, s.c); }); }
void BM_energy_serial(benchmark::State& st) {
  run(st, [](const Setup& s) { return serial::energy(s.sys, s.c); });
}

void BM_slope_omp(benchmark::State& st) { run(st, [](const Setup& s) { return slope(s.sys, s.c).total(); }); }
void BM_slope_serial(benchmark::State& st) {
  run(st, [](const Setup& s) { return serial::slope(s.sys, s.c).total(); });
}

void BM_primal_omp(benchmark::State& st) {
  run(st, [](const Setup& s) { return primal_dissipation(s.sys, s.c, s.fl.diff, s.fl.react).total(); });
}
void BM_primal_serial(benchmark::State& st) {
  run(st, [](const Setup& s) { return serial::primal_dissipation(s.sys, s.c, s.fl.diff, s.fl.react).total(); });
}

}  // namespace

#define EDPFLOW_BENCH(name) BENCHMARK(name)->Arg(64)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond)->UseRealTime()
EDPFLOW_BENCH(BM_rhs_serial);
EDPFLOW_BENCH(BM_rhs_omp);
EDPFLOW_BENCH(BM_fluxes_serial);
EDPFLOW_BENCH(BM_fluxes_omp);
EDPFLOW_BENCH(BM_adjoint_serial);
EDPFLOW_BENCH(BM_adjoint_omp);
EDPFLOW_BENCH(BM_energy_serial);
EDPFLOW_BENCH(BM_energy_omp);
EDPFLOW_BENCH(BM_slope_serial);
EDPFLOW_BENCH(BM_slope_omp);
EDPFLOW_BENCH(BM_primal_serial);
EDPFLOW_BENCH(BM_primal_omp);

int main(int argc, char** argv) {
  parallel::configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
