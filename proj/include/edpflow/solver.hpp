#pragma once

// Time integration of the discrete reaction-diffusion system  dc/dt = ce_adjoint(F(c), J(c)),
// trajectory recording and the trajectory-level residuals (EDB balance, continuity equation).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "edpflow/discrete_gs.hpp"

namespace edpflow {

enum class Scheme { explicit_euler, rk4, implicit_euler };

std::string_view scheme_name(Scheme s) noexcept;
/// "explicit-euler", "rk4" or "implicit-euler"; ConfigError(path) otherwise.
Scheme parse_scheme(std::string_view name, const std::string& path = "time.scheme");

/// ce_adjoint(constitutive_fluxes(c)), fused into one stencil pass.
CellField rhs(const DiscreteSystem& sys, const CellField& c);

/// Default step size 0.2 / (2d N^2 max_i delta_i sqrt(w_max/w_min) + Lip_react(c)).
double policy_dt(const DiscreteSystem& sys, const CellField& c);

struct NewtonOptions {
  double tol = 1e-12;  // on |G|_inf / (1 + |c|_inf)
  int max_iterations = 50;
};

/// One step. Explicit schemes never fail here; implicit-euler throws SolverError when
/// Newton does not converge. Negativity is not checked (integrate does that).
CellField step(const DiscreteSystem& sys, const CellField& c, double dt, Scheme scheme,
               const NewtonOptions& newton = {});

struct Sample {
  double t = 0.0;
  CellField c;
  EdgeField flux_diff;
  ReactField flux_react;
  FunctionalReport report;
};

struct Trajectory {
  std::vector<Sample> samples;
  std::string scheme = "rk4";
  double dt = 0.0;         // initial step size
  double final_dt = 0.0;   // step size after any reject-and-halve
  double sample_dt = 0.0;
  std::string dt_policy = "auto";
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  int dim = 0;
  int n = 0;
  std::uint64_t fingerprint = 0;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
};

struct IntegrateOptions {
  Scheme scheme = Scheme::rk4;
  double sample_dt = 1e-2;
  std::optional<double> dt;  // policy_dt(c0) when empty
  double dt_floor = 1e-12;
  NewtonOptions newton;
};

/// Samples at t = m * sample_dt (and at T). Steps producing a negative or non-finite
/// component are rejected and dt halved; below dt_floor a SolverError is thrown.
Trajectory integrate(const DiscreteSystem& sys, const CellField& c0, double T, const IntegrateOptions& opts);

/// Recomputes every sample's FunctionalReport from its stored (c, F, J).
void recompute_reports(const DiscreteSystem& sys, Trajectory& traj);

struct BoxReport {
  bool inside = true;
  std::size_t sample = 0;  // first offending sample
  std::size_t species = 0;
  std::size_t cell = 0;
  double value = 0.0;
};

/// Checks 0 <= c_i <= upper_i at every sample and cell.
BoxReport bounding_box_check(const Trajectory& traj, std::span<const double> upper);

/// Upper corners of the box prod [0, max_k w_{i,k} * max_{i,k}(c0/w)].
std::vector<double> invariant_box(const DiscreteSystem& sys, const CellField& c0);

struct EdbBalance {
  double energy_s = 0.0;
  double energy_t = 0.0;
  double dissipation = 0.0;  // int_s^t (R + S)
  double residual = 0.0;     // energy_t - energy_s + dissipation
};

/// Energy-dissipation balance on [s, t] from the stored reports, composite trapezoid
/// in time; values at non-sample times are linearly interpolated.
EdbBalance edb_residual(const Trajectory& traj, double s, double t);

/// max over interior samples of | central difference of c - ce_adjoint(F, J) |_{L1_N}.
double ce_residual(const DiscreteSystem& sys, const Trajectory& traj);

/// Conserved totals (1/N^d) sum_{i,k} q_i c_{i,k} for each q in the basis.
std::vector<double> conserved_totals(const DiscreteSystem& sys, const std::vector<std::vector<double>>& basis,
                                     const CellField& c);

}  // namespace edpflow
