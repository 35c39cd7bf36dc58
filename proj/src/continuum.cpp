#include "edpflow/continuum.hpp"

#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>

#include "edpflow/cosh.hpp"
#include "edpflow/errors.hpp"
#include "json.hpp"

namespace edpflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxRows = 64;

struct RowValues {
  std::array<double, kMaxRows> v{};
};

void check_rows(std::size_t n) {
  if (n > kMaxRows) throw DomainError("continuum: too many species or reactions for point evaluation");
}

RowValues eval_rows(const SpatialField& f, std::span<const double> x) {
  RowValues out;
  for (std::size_t r = 0; r < f.rows(); ++r) out.v[r] = f.value(r, x);
  return out;
}

// prod_i x_i^g_i with the 0^0 = 1 convention
double power(const RowValues& x, const std::vector<double>& g, double scale) {
  double p = 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0.0) continue;
    p *= std::pow(x.v[i], scale * g[i]);
  }
  return p;
}

std::vector<double> sum_exponent(const Reaction& rx) {
  std::vector<double> s(rx.alpha.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = rx.alpha[i] + rx.beta[i];
  return s;
}

RowValues omega_at(const ReferenceDensity& omega, std::span<const double> x) {
  RowValues out;
  for (std::size_t i = 0; i < omega.size(); ++i) out.v[i] = omega.value(i, x);
  return out;
}

}  // namespace

double cont_energy(const SpatialField& rho, const ReferenceDensity& omega, int order) {
  check_rows(rho.rows());
  return integrate(
      rho.grid(),
      [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.rows(); ++i) {
          const double w = omega.value(i, x);
          s += cosh::boltzmann_lambda(rho.value(i, x) / w) * w;
        }
        return s;
      },
      order);
}

SlopeParts cont_slope(const SpatialField& u, const ReactionNetwork& net, int order) {
  check_rows(u.rows());
  const int d = u.grid().dim();
  SlopeParts out;
  out.diff = integrate(
      u.grid(),
      [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < u.rows(); ++i) {
          double g2 = 0.0;
          for (int l = 0; l < d; ++l) {
            const double g = u.partial(i, l, x);
            g2 += g * g;
          }
          s += 2.0 * net.diffusion()[i] * g2 * net.omega().value(i, x);
        }
        return s;
      },
      order);
  if (net.reaction_count() == 0) return out;
  out.react = integrate(
      u.grid(),
      [&](std::span<const double> x) {
        const RowValues uv = eval_rows(u, x);
        const RowValues w = omega_at(net.omega(), x);
        double s = 0.0;
        for (const auto& rx : net.reactions()) {
          const double diff = power(uv, rx.alpha, 1.0) - power(uv, rx.beta, 1.0);
          s += 2.0 * rx.kappa * power(w, sum_exponent(rx), 0.5) * diff * diff;
        }
        return s;
      },
      order);
  return out;
}

DissipationParts cont_primal_dissipation(const SpatialField& rho, const SpatialField& f, const SpatialField& j,
                                         const ReactionNetwork& net, int order) {
  check_rows(rho.rows());
  check_rows(j.rows());
  const int d = rho.grid().dim();
  DissipationParts out;
  out.diff = integrate(
      rho.grid(),
      [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.rows(); ++i) {
          double f2 = 0.0;
          for (int e = 0; e < d; ++e) {
            const double fe = f.value(i * d + e, x);
            f2 += fe * fe;
          }
          if (f2 == 0.0) continue;
          const double r = rho.value(i, x);
          if (!(r > 0.0)) return kInf;
          s += f2 / (2.0 * net.diffusion()[i] * r);
        }
        return s;
      },
      order);
  if (net.reaction_count() == 0) return out;
  out.react = integrate(
      rho.grid(),
      [&](std::span<const double> x) {
        const RowValues rv = eval_rows(rho, x);
        double s = 0.0;
        for (std::size_t r = 0; r < net.reaction_count(); ++r) {
          const auto& rx = net.reaction(r);
          s += cosh::perspective(j.value(r, x), rx.kappa * power(rv, sum_exponent(rx), 0.5));
        }
        return s;
      },
      order);
  return out;
}

DissipationParts cont_dual_dissipation(const SpatialField& rho, const SpatialField& xi, const SpatialField& zeta,
                                       const ReactionNetwork& net, int order) {
  check_rows(rho.rows());
  const int d = rho.grid().dim();
  DissipationParts out;
  out.diff = integrate(
      rho.grid(),
      [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < rho.rows(); ++i) {
          double x2 = 0.0;
          for (int e = 0; e < d; ++e) {
            const double v = xi.value(i * d + e, x);
            x2 += v * v;
          }
          s += 0.5 * net.diffusion()[i] * x2 * rho.value(i, x);
        }
        return s;
      },
      order);
  if (net.reaction_count() == 0) return out;
  out.react = integrate(
      rho.grid(),
      [&](std::span<const double> x) {
        const RowValues rv = eval_rows(rho, x);
        double s = 0.0;
        for (std::size_t r = 0; r < net.reaction_count(); ++r) {
          const auto& rx = net.reaction(r);
          s += rx.kappa * power(rv, sum_exponent(rx), 0.5) * cosh::cstar(zeta.value(r, x));
        }
        return s;
      },
      order);
  return out;
}

ContinuumReport embedded_functionals(const DiscreteSystem& sys, const Sample& sample) {
  const PiecewiseField rho = embed_pc(sys.grid, sample.c);
  const PiecewiseField f = embed_flux_diff(sys.grid, sample.flux_diff);
  const PiecewiseField j = embed_flux_react(sys.grid, sample.flux_react);
  const RhoTilde tilde(sys, sample.c);
  ContinuumReport rep;
  rep.energy = cont_energy(rho, sys.network.omega());
  rep.dissipation = cont_primal_dissipation(rho, f, j, sys.network);
  rep.slope = cont_slope(tilde.u(), sys.network);
  return rep;
}

namespace {

std::size_t sample_index(const Trajectory& traj, double t, const char* who) {
  const auto& s = traj.samples;
  for (std::size_t m = 0; m < s.size(); ++m)
    if (std::fabs(s[m].t - t) <= 1e-12 * std::max(1.0, std::fabs(t))) return m;
  throw DomainError(std::string(who) + ": time is not a sample time of the trajectory");
}

}  // namespace

EdbBalance cont_edb_residual(const DiscreteSystem& sys, const Trajectory& traj, double s, double t) {
  if (!(s < t)) throw DomainError("cont_edb_residual: need s < t");
  if (s < traj.t_begin() || t > traj.t_end()) throw DomainError("cont_edb_residual: times outside the trajectory span");
  const std::size_t a = sample_index(traj, s, "cont_edb_residual");
  const std::size_t b = sample_index(traj, t, "cont_edb_residual");
  std::vector<ContinuumReport> reps(b - a + 1);
  const auto n = static_cast<long>(reps.size());
  std::vector<std::exception_ptr> failures(reps.size());
#pragma omp parallel for schedule(dynamic, 1) if (n > 8)
  for (long m = 0; m < n; ++m) {
    const auto q = static_cast<std::size_t>(m);
    try {
      reps[q] = embedded_functionals(sys, traj.samples[a + q]);
    } catch (...) {
      failures[q] = std::current_exception();
    }
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);
  double integral = 0.0;
  for (std::size_t m = a; m < b; ++m)
    integral += 0.5 * (reps[m - a].rate() + reps[m + 1 - a].rate()) * (traj.samples[m + 1].t - traj.samples[m].t);
  return EdbBalance{reps.front().energy, reps.back().energy, integral,
                    reps.back().energy - reps.front().energy + integral};
}

double fourier_heat_reference(const FourierReference& ref, std::span<const double> delta, std::size_t species,
                              double t, std::span<const double> x) {
  double v = species < ref.mean.size() ? ref.mean[species] : 0.0;
  for (const auto& mode : ref.modes) {
    if (mode.species != species) continue;
    double k2 = 0.0, phase = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) {
      k2 += double(mode.k[l]) * mode.k[l];
      phase += mode.k[l] * x[l];
    }
    v += mode.amplitude * std::exp(-4.0 * std::numbers::pi * std::numbers::pi * k2 * delta[species] * t) *
         std::cos(2.0 * std::numbers::pi * phase);
  }
  return v;
}

CellField fourier_cell_averages(const FourierReference& ref, std::span<const double> delta, const TorusGrid& grid,
                                double t) {
  const std::size_t species = delta.size();
  CellField out = make_cell_field(grid, species);
  const double pi = std::numbers::pi;
  const double n = grid.n();
  for (std::size_t i = 0; i < species; ++i) {
    const double mean = i < ref.mean.size() ? ref.mean[i] : 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) out(i, k) = mean;
  }
  for (const auto& mode : ref.modes) {
    if (mode.species >= species) throw DomainError("fourier_cell_averages: mode species out of range");
    double k2 = 0.0;
    for (int l = 0; l < grid.dim(); ++l) k2 += double(mode.k[l]) * mode.k[l];
    const double decay = mode.amplitude * std::exp(-4.0 * pi * pi * k2 * delta[mode.species] * t);
    for (std::size_t k = 0; k < grid.cells(); ++k) {
      const auto c = grid.coords(k);
      // average of exp(2 pi i k.x) over the cell, factor by factor
      std::complex<double> avg = 1.0;
      for (int l = 0; l < grid.dim(); ++l) {
        if (mode.k[l] == 0) continue;
        const double a = pi * mode.k[l] / n;
        avg *= std::polar(std::sin(a) / a, 2.0 * pi * mode.k[l] * (c[l] + 0.5) / n);
      }
      out(mode.species, k) += decay * avg.real();
    }
  }
  return out;
}

double pc_l1_distance(const TorusGrid& ga, const CellField& a, std::size_t row_a, const TorusGrid& gb,
                      const CellField& b, std::size_t row_b) {
  if (ga.dim() != gb.dim()) throw DomainError("pc_l1_distance: dimension mismatch");
  const int d = ga.dim();
  const long long l = std::lcm(static_cast<long long>(ga.n()), static_cast<long long>(gb.n()));
  const long long ra = l / ga.n(), rb = l / gb.n();
  long long total = 1;
  for (int q = 0; q < d; ++q) total *= l;
  double s = 0.0;
  for (long long p = 0; p < total; ++p) {
    long long rest = p;
    std::array<int, TorusGrid::kMaxDim> ca{}, cb{};
    for (int q = d - 1; q >= 0; --q) {
      const long long j = rest % l;
      rest /= l;
      ca[q] = static_cast<int>(j / ra);
      cb[q] = static_cast<int>(j / rb);
    }
    const double va = a(row_a, ga.index(std::span<const int>(ca.data(), d)));
    const double vb = b(row_b, gb.index(std::span<const int>(cb.data(), d)));
    s += std::fabs(va - vb);
  }
  return s / static_cast<double>(total);
}

bool ConvergenceReport::cauchy_monotone(double floor) const {
  std::vector<double> c;
  for (const auto& r : rows)
    if (r.cauchy_spacetime) c.push_back(*r.cauchy_spacetime);
  for (std::size_t j = 0; j + 1 < c.size(); ++j)
    if (!(c[j + 1] < c[j]) && !(c[j + 1] <= floor)) return false;
  return true;
}

bool ConvergenceReport::energy_gaps_monotone(double floor) const {
  if (rows.size() < 2) return true;
  for (std::size_t t = 0; t < times.size(); ++t)
    for (std::size_t j = 0; j + 2 < rows.size(); ++j) {
      const double g0 = rows[j].energy_gap[t], g1 = rows[j + 1].energy_gap[t];
      if (!(g1 < g0) && !(g1 <= floor)) return false;
    }
  return true;
}

std::optional<double> ConvergenceReport::min_fourier_order() const {
  if (fourier_orders.empty()) return std::nullopt;
  return *std::min_element(fourier_orders.begin(), fourier_orders.end());
}

namespace {

struct LevelRun {
  TorusGrid grid;
  DiscreteSystem sys;
  Trajectory traj;
};

double interpolate_energy(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  if (t <= s.front().t) return s.front().report.energy;
  for (std::size_t m = 0; m + 1 < s.size(); ++m) {
    if (t <= s[m + 1].t) {
      const double theta = (t - s[m].t) / (s[m + 1].t - s[m].t);
      if (theta >= 1.0 - 1e-12) return s[m + 1].report.energy;
      if (theta <= 1e-12) return s[m].report.energy;
      return s[m].report.energy + theta * (s[m + 1].report.energy - s[m].report.energy);
    }
  }
  return s.back().report.energy;
}

double order(double coarse_err, double fine_err, double ratio) {
  return std::log(coarse_err / fine_err) / std::log(ratio);
}

}  // namespace

ConvergenceReport convergence_study(const StudySetup& setup) {
  if (setup.levels.empty()) throw ConfigError("grid.N_list", "empty resolution ladder");
  for (std::size_t j = 0; j < setup.levels.size(); ++j) {
    if (setup.levels[j] < 2) throw ConfigError("grid.N_list", "resolutions must be >= 2");
    if (j > 0 && setup.levels[j] <= setup.levels[j - 1]) throw ConfigError("grid.N_list", "resolutions must ascend");
  }
  if (setup.initial.size() != setup.network.species())
    throw ConfigError("initial", "need one initial expression per species");

  const std::size_t L = setup.levels.size();
  std::vector<DiscreteSystem> systems;
  std::vector<CellField> initial;
  for (int n : setup.levels) {
    systems.push_back(make_system(setup.network, TorusGrid(setup.dim, n)));
    initial.push_back(discretize(systems.back().grid, setup.initial, 8));
  }

  ConvergenceReport report;
  const ValidationReport valid = validate_network(setup.network, setup.dim);
  report.growth_a1 = valid.growth_a1;
  report.growth_a2 = valid.growth_a2;
  report.dt = setup.dt ? *setup.dt : policy_dt(systems.back(), initial.back());

  IntegrateOptions opts;
  opts.scheme = setup.scheme;
  opts.sample_dt = setup.sample_dt;
  opts.dt = report.dt;

  std::vector<Trajectory> traj(L);
  std::vector<EdbBalance> cont(L);
  std::vector<std::exception_ptr> failures(L);
  const int saved_levels = omp_get_max_active_levels();
  omp_set_max_active_levels(1);
  const auto nl = static_cast<long>(L);
#pragma omp parallel for schedule(dynamic, 1)
  for (long j = 0; j < nl; ++j) {
    const auto q = static_cast<std::size_t>(j);
    try {
      traj[q] = integrate(systems[q], initial[q], setup.T, opts);
      cont[q] = cont_edb_residual(systems[q], traj[q], traj[q].t_begin(), traj[q].t_end());
    } catch (...) {
      failures[q] = std::current_exception();
    }
  }
  omp_set_max_active_levels(saved_levels);
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  const int nt = std::max(2, setup.energy_times);
  for (int q = 0; q < nt; ++q) report.times.push_back(setup.T * q / (nt - 1));

  const std::size_t I = setup.network.species();
  for (std::size_t j = 0; j < L; ++j) {
    LevelRow row;
    row.n = setup.levels[j];
    const auto& tr = traj[j];
    for (const auto& s : tr.samples) row.sup_energy = std::max(row.sup_energy, s.report.energy);
    const EdbBalance bal = edb_residual(tr, tr.t_begin(), tr.t_end());
    row.dissipation = bal.dissipation;
    row.edb_residual = bal.residual;
    row.cont_edb_residual = cont[j].residual;
    for (double t : report.times) row.energies.push_back(interpolate_energy(tr, t));

    if (j > 0) {
      const auto& coarse = traj[j - 1];
      const auto& ga = systems[j - 1].grid;
      const auto& gb = systems[j].grid;
      auto dist = [&](const CellField& a, const CellField& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < I; ++i) s += pc_l1_distance(ga, a, i, gb, b, i);
        return s;
      };
      if (coarse.samples.size() != tr.samples.size())
        throw SolverError("convergence_study: levels produced different sample times");
      double spacetime = 0.0;
      double prev = dist(coarse.samples[0].c, tr.samples[0].c);
      for (std::size_t m = 1; m < tr.samples.size(); ++m) {
        const double cur = dist(coarse.samples[m].c, tr.samples[m].c);
        spacetime += 0.5 * (prev + cur) * (tr.samples[m].t - tr.samples[m - 1].t);
        prev = cur;
      }
      row.cauchy_spacetime = spacetime;
      row.cauchy_terminal = prev;
    }
    if (setup.fourier) {
      const CellField ref = fourier_cell_averages(*setup.fourier, setup.network.diffusion(), systems[j].grid, tr.t_end());
      CellField err = tr.samples.back().c;
      auto fe = err.flat();
      const auto fr = ref.flat();
      for (std::size_t m = 0; m < fe.size(); ++m) fe[m] -= fr[m];
      row.fourier_error = l1_norm(systems[j].grid, err);
    }
    report.rows.push_back(std::move(row));
  }
  for (std::size_t j = 0; j < L; ++j)
    for (std::size_t q = 0; q < report.times.size(); ++q)
      report.rows[j].energy_gap.push_back(std::fabs(report.rows[j].energies[q] - report.rows.back().energies[q]));

  for (std::size_t j = 1; j + 1 < L; ++j) {
    const double ratio = double(report.rows[j + 1].n) / report.rows[j].n;
    report.cauchy_orders.push_back(order(*report.rows[j].cauchy_spacetime, *report.rows[j + 1].cauchy_spacetime, ratio));
  }
  if (setup.fourier) {
    for (std::size_t j = 0; j + 1 < L; ++j) {
      const double ratio = double(report.rows[j + 1].n) / report.rows[j].n;
      report.fourier_orders.push_back(order(*report.rows[j].fourier_error, *report.rows[j + 1].fourier_error, ratio));
    }
  }
  return report;
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string opt(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

void write_report_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), "cannot open for writing");
  out << "N [cells per axis],sup_t E_N [energy],D_N [energy],L_N [energy],L_cont [energy],"
         "cauchy_L1_spacetime [density*time],cauchy_L1_terminal [density],fourier_L1_error [density]";
  for (double t : report.times) out << ",E_N(t=" << fmt::format("{:g}", t) << ") [energy]";
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.n << ',' << num(r.sup_energy) << ',' << num(r.dissipation) << ',' << num(r.edb_residual) << ','
        << num(r.cont_edb_residual) << ',' << opt(r.cauchy_spacetime) << ',' << opt(r.cauchy_terminal) << ','
        << opt(r.fourier_error);
    for (double e : r.energies) out << ',' << num(e);
    out << '\n';
  }
  if (!out) throw ConfigError(path.string(), "write failed");
}

void write_report_json(const ConvergenceReport& report, const std::filesystem::path& path, double floor) {
  nlohmann::json j;
  j["dt"] = report.dt;
  j["levels"] = nlohmann::json::array();
  for (const auto& r : report.rows) j["levels"].push_back(r.n);
  j["times"] = report.times;
  j["cauchy_orders"] = report.cauchy_orders;
  j["fourier_orders"] = report.fourier_orders;
  if (auto m = report.min_fourier_order()) j["min_fourier_order"] = *m;
  j["cauchy_monotone"] = report.cauchy_monotone(floor);
  j["energy_gaps_monotone"] = report.energy_gaps_monotone(floor);
  j["monotone_floor"] = floor;
  j["assumption_A1"] = report.growth_a1;
  j["assumption_A2"] = report.growth_a2;
  std::ofstream out(path);
  if (!out) throw ConfigError(path.string(), "cannot open for writing");
  out << j.dump(2) << '\n';
}

}  // namespace edpflow
