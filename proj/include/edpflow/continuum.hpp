#pragma once

// Continuum functionals on the torus by per-cell quadrature, the continuum EDB residual
// of embedded trajectories, and the resolution-ladder convergence study.

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edpflow/embedding.hpp"
#include "edpflow/solver.hpp"

namespace edpflow {

/// int sum_i lambda_B(rho_i/omega_i) omega_i dx.
double cont_energy(const SpatialField& rho, const ReferenceDensity& omega, int order = 5);

/// Relaxed slope from u = sqrt(rho/omega) (needs partial derivatives of u):
///   diff  = sum_i 2 delta_i int |grad u_i|^2 omega_i
///   react = sum_r 2 kappa_r int sqrt(omega^alpha omega^beta) (u^alpha - u^beta)^2
SlopeParts cont_slope(const SpatialField& u, const ReactionNetwork& net, int order = 5);

/// sum_i 1/(2 delta_i) int |f_i|^2 / rho_i + sum_r int C|(j_r | kappa_r sqrt(rho^alpha rho^beta)).
/// f has rows i*d + e. +inf if flux meets zero density at a quadrature point.
DissipationParts cont_primal_dissipation(const SpatialField& rho, const SpatialField& f, const SpatialField& j,
                                         const ReactionNetwork& net, int order = 5);

/// sum_i delta_i/2 int |xi_i|^2 rho_i + sum_r kappa_r int sqrt(rho^alpha rho^beta) C*(zeta_r).
DissipationParts cont_dual_dissipation(const SpatialField& rho, const SpatialField& xi, const SpatialField& zeta,
                                       const ReactionNetwork& net, int order = 5);

struct ContinuumReport {
  double energy = 0.0;
  DissipationParts dissipation;
  SlopeParts slope;
  double rate() const noexcept { return dissipation.total() + slope.total(); }
};

/// Continuum functionals of one embedded sample: rho = iota_N c, f = iota_N,diff F,
/// j = iota_N,react J, and u the multilinear interpolant of sqrt(c/w).
ContinuumReport embedded_functionals(const DiscreteSystem& sys, const Sample& sample);

/// E(rho(t)) - E(rho(s)) + int_s^t (R + S), trapezoid in time over the samples in [s, t]
/// (s and t must be sample times).
EdbBalance cont_edb_residual(const DiscreteSystem& sys, const Trajectory& traj, double s, double t);

struct FourierMode {
  std::size_t species = 0;
  std::array<int, 3> k{0, 0, 0};
  double amplitude = 0.0;
};

/// Heat-equation data: rho_i(0,x) = mean_i + sum of a cos(2 pi k.x) over the modes of species i.
struct FourierReference {
  std::vector<double> mean;
  std::vector<FourierMode> modes;
};

/// mean_i + sum a exp(-4 pi^2 |k|^2 delta_i t) cos(2 pi k.x).
double fourier_heat_reference(const FourierReference& ref, std::span<const double> delta, std::size_t species,
                              double t, std::span<const double> x);

/// Exact cell averages of the reference at time t.
CellField fourier_cell_averages(const FourierReference& ref, std::span<const double> delta, const TorusGrid& grid,
                                double t);

/// int |iota_N a_row - iota_M b_row| dx computed exactly on the lcm(N, M) grid.
double pc_l1_distance(const TorusGrid& ga, const CellField& a, std::size_t row_a, const TorusGrid& gb,
                      const CellField& b, std::size_t row_b);

struct StudySetup {
  ReactionNetwork network;
  int dim = 1;
  std::vector<int> levels;          // ascending, each >= 2
  std::vector<PointFn> initial;     // rho^0 per species, discretized by cell averages
  double T = 0.1;
  double sample_dt = 1e-2;
  Scheme scheme = Scheme::rk4;
  std::optional<double> dt;         // common dt; policy dt of the finest level if empty
  std::optional<FourierReference> fourier;
  int energy_times = 11;            // sampled times for the E_N(t) comparison
};

struct LevelRow {
  int n = 0;
  double sup_energy = 0.0;
  double dissipation = 0.0;         // int_0^T (R_N + S_N)
  double edb_residual = 0.0;        // discrete L_N^{[0,T]}
  double cont_edb_residual = 0.0;   // continuum residual of the embedded trajectory
  std::optional<double> cauchy_spacetime;  // to the next coarser level
  std::optional<double> cauchy_terminal;
  std::optional<double> fourier_error;     // terminal L1 error of cell averages
  std::vector<double> energies;            // E_N at the sampled times
  std::vector<double> energy_gap;          // |E_N - E_finest| at the sampled times
};

struct ConvergenceReport {
  std::vector<LevelRow> rows;
  std::vector<double> times;                // sampled times for energies
  std::vector<double> cauchy_orders;        // log2 ratios of consecutive spacetime Cauchy differences
  std::vector<double> fourier_orders;
  double dt = 0.0;
  bool growth_a1 = false;
  bool growth_a2 = false;

  /// Consecutive spacetime Cauchy differences strictly decrease (or the finer one is <= floor).
  bool cauchy_monotone(double floor) const;
  /// For every sampled time the level-to-finest energy gaps strictly decrease (or are <= floor).
  bool energy_gaps_monotone(double floor) const;
  std::optional<double> min_fourier_order() const;
};

/// Runs the ladder (levels concurrently) and assembles the report.
ConvergenceReport convergence_study(const StudySetup& setup);

void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path);
void write_report_json(const ConvergenceReport& report, const std::filesystem::path& path, double floor);

}  // namespace edpflow
