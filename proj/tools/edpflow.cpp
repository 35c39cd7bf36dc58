// edpflow: simulate, certify and study discrete reaction-diffusion gradient flows.
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure, 3 failed check.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>

#include "edpflow/continuum.hpp"
#include "edpflow/discrete_gs.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/mutation.hpp"
#include "edpflow/parallel.hpp"
#include "edpflow/props.hpp"
#include "edpflow/scenario.hpp"
#include "edpflow/solver.hpp"
#include "edpflow/trajectory_io.hpp"

namespace fs = std::filesystem;
using namespace edpflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCheck = 3;

int cmd_simulate(const fs::path& scenario_file, const std::optional<fs::path>& out,
                 const std::optional<std::string>& format) {
  auto sc = load_scenario(scenario_file);
  if (out) sc.output_dir = *out;
  if (format) sc.format = parse_format(*format, "--format");
  const auto sys = make_system(sc.network, TorusGrid(sc.dim, sc.n()));
  const auto c0 = initial_state(sc, sys);

  IntegrateOptions opts;
  opts.scheme = sc.scheme;
  opts.sample_dt = sc.sample_dt;
  opts.dt = sc.dt;
  const auto traj = integrate(sys, c0, sc.T, opts);
  write_trajectory(sc.output_dir, traj, sc.network, sc.species_names, sc.format);

  const auto bal = edb_residual(traj, traj.t_begin(), traj.t_end());
  fmt::print("scheme {}  d={} N={}  dt={:.6g} (final {:.6g})  steps {} accepted, {} rejected\n", traj.scheme,
             traj.dim, traj.n, traj.dt, traj.final_dt, traj.accepted_steps, traj.rejected_steps);
  fmt::print("samples {}  E(0)={:.12g}  E(T)={:.12g}  int(R+S)={:.12g}  L={:.6e}\n", traj.samples.size(),
             bal.energy_s, bal.energy_t, bal.dissipation, bal.residual);
  fmt::print("wrote {}\n", sc.output_dir.string());
  return kExitOk;
}

int cmd_edb_check(const fs::path& dir, std::optional<double> s, std::optional<double> t, double tol) {
  auto loaded = read_trajectory(dir);
  const auto sys = make_system(loaded.network, loaded.grid);
  recompute_reports(sys, loaded.traj);
  const auto& traj = loaded.traj;
  const double ts = s.value_or(traj.t_begin());
  const double tt = t.value_or(traj.t_end());
  if (ts < traj.t_begin() || ts >= traj.t_end()) throw ConfigError("--from", "outside the trajectory span");
  if (tt <= ts || tt > traj.t_end()) throw ConfigError("--to", "must lie in (from, last sample time]");
  const auto bal = edb_residual(traj, ts, tt);

  double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin, gsum = 0.0;
  for (const auto& smp : traj.samples) {
    const double gap = fenchel_gap(sys, smp.c, smp.flux_diff, smp.flux_react);
    gmin = std::min(gmin, gap);
    gmax = std::max(gmax, gap);
    gsum += gap;
  }
  const bool pass = std::fabs(bal.residual) <= tol;
  fmt::print("interval [{:.6g}, {:.6g}]\n", ts, tt);
  fmt::print("E_N(s)      {:.15g}\n", bal.energy_s);
  fmt::print("E_N(t)      {:.15g}\n", bal.energy_t);
  fmt::print("int(R+S)    {:.15g}\n", bal.dissipation);
  fmt::print("L_N[s,t]    {:.6e}\n", bal.residual);
  fmt::print("fenchel gap min {:.6e} max {:.6e} mean {:.6e} over {} samples\n", gmin, gmax,
             gsum / static_cast<double>(traj.samples.size()), traj.samples.size());
  fmt::print("{} |L| {} tol {:.3g}\n", pass ? "PASS" : "FAIL", pass ? "<=" : ">", tol);
  return pass ? kExitOk : kExitCheck;
}

int cmd_converge(const fs::path& scenario_file, const std::optional<fs::path>& out, double tol) {
  const auto sc = load_scenario(scenario_file);
  if (sc.n_list.size() < 3) throw ConfigError("grid.N_list", "convergence study needs at least three resolutions");
  const fs::path dir = out.value_or(sc.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string(), "cannot create directory: " + ec.message());

  const auto report = convergence_study(study_setup(sc));
  write_report_csv(report, dir / "convergence.csv");
  write_report_json(report, dir / "convergence.json", tol);

  fmt::print("{:>5} {:>14} {:>14} {:>12} {:>12} {:>14} {:>14}\n", "N", "sup E_N", "int(R+S)", "L_N", "L_cont",
             "cauchy", "fourier err");
  auto opt = [](const std::optional<double>& v) { return v ? fmt::format("{:.6e}", *v) : std::string("-"); };
  for (const auto& r : report.rows)
    fmt::print("{:>5} {:>14.8g} {:>14.8g} {:>12.3e} {:>12.3e} {:>14} {:>14}\n", r.n, r.sup_energy, r.dissipation,
               r.edb_residual, r.cont_edb_residual, opt(r.cauchy_spacetime), opt(r.fourier_error));
  auto order = [](double o) { return std::isfinite(o) ? fmt::format("{:.3f}", o) : std::string("n/a"); };
  for (double o : report.cauchy_orders) fmt::print("cauchy order {}\n", order(o));
  for (double o : report.fourier_orders) fmt::print("fourier order {}\n", order(o));
  const bool monotone = report.cauchy_monotone(tol);
  fmt::print("energy gaps monotone: {}\n", report.energy_gaps_monotone(tol) ? "yes" : "no");
  fmt::print("{} Cauchy differences {}monotone decreasing\n", monotone ? "PASS" : "FAIL", monotone ? "" : "not ");
  return monotone ? kExitOk : kExitCheck;
}

int cmd_props(std::uint64_t seed, std::size_t count, const std::string& filter, const std::string& mutate) {
  const mutation::Scope scope(mutation::parse(mutate));
  if (count == 0) {
    std::fprintf(stderr, "warning: --count 0, no property cases run\n");
    return kExitOk;
  }
  props::Options opts;
  opts.seed = seed;
  opts.count = count;
  opts.filter = filter;
  const auto results = props::run(opts);
  if (results.empty()) throw ConfigError("--filter", "no suite matches '" + filter + "'");
  std::size_t failed = 0;
  for (const auto& r : results) {
    fmt::print("{} {:<32} cases {:>7}  failures {:>5}  max violation {:.3e}  {:.2f}s\n", r.passed() ? "PASS" : "FAIL",
               r.name, r.cases, r.failures, r.max_violation, r.seconds);
    if (!r.passed()) {
      ++failed;
      fmt::print("     counterexample: {}\n", r.counterexample);
    }
  }
  fmt::print("{} of {} suites passed (seed {}, count {})\n", results.size() - failed, results.size(), seed, count);
  return failed == 0 ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
  parallel::configure_threads_from_env();

  CLI::App app{"Discrete reaction-diffusion gradient flows: simulation, EDB certification, convergence studies"};
  app.require_subcommand(1);

  fs::path scenario;
  std::optional<fs::path> out;
  std::optional<std::string> format;
  auto* sim = app.add_subcommand("simulate", "integrate a scenario and write the trajectory");
  sim->add_option("--scenario", scenario, "scenario JSON file")->required();
  sim->add_option("--out", out, "output directory (overrides outputs.directory)");
  sim->add_option("--format", format, "array format: csv or binary");

  fs::path traj_dir;
  std::optional<double> s_opt, t_opt;
  double edb_tol = 1e-3;
  auto* edb = app.add_subcommand("edb-check", "certify the energy-dissipation balance of a stored trajectory");
  edb->add_option("--out,--trajectory,dir", traj_dir, "trajectory directory")->required();
  edb->add_option("-s,--from", s_opt, "interval start (default: first sample)");
  edb->add_option("-t,--to", t_opt, "interval end (default: last sample)");
  edb->add_option("--tol", edb_tol, "pass iff |L| <= tol")->capture_default_str();

  double conv_tol = 1e-9;
  auto* conv = app.add_subcommand("converge", "run a resolution ladder and write the convergence report");
  conv->add_option("--scenario", scenario, "scenario JSON file with grid.N_list")->required();
  conv->add_option("--out", out, "report directory (overrides outputs.directory)");
  conv->add_option("--tol", conv_tol, "differences below this floor count as converged")->capture_default_str();

  std::uint64_t seed = props::Options{}.seed;
  std::size_t count = props::Options{}.count;
  std::string filter, mutate = "none";
  auto* prop = app.add_subcommand("props", "run the randomised property suites");
  prop->add_option("--seed", seed, "RNG seed")->capture_default_str();
  prop->add_option("--count", count, "cases per suite")->capture_default_str();
  prop->add_option("--filter", filter, "only suites whose name starts with this prefix");
  prop->add_option("--mutate", mutate, "inject a fault: none or flux-sign")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(scenario, out, format);
    if (*edb) return cmd_edb_check(traj_dir, s_opt, t_opt, edb_tol);
    if (*conv) return cmd_converge(scenario, out, conv_tol);
    if (*prop) return cmd_props(seed, count, filter, mutate);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return kExitOk;
}
