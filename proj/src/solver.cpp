#include "edpflow/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "edpflow/errors.hpp"
#include "edpflow/parallel.hpp"
#include "kernels.hpp"

namespace edpflow {

std::string_view scheme_name(Scheme s) noexcept {
  switch (s) {
    case Scheme::explicit_euler: return "explicit-euler";
    case Scheme::rk4: return "rk4";
    case Scheme::implicit_euler: return "implicit-euler";
  }
  return "rk4";
}

Scheme parse_scheme(std::string_view name, const std::string& path) {
  if (name == "explicit-euler") return Scheme::explicit_euler;
  if (name == "rk4") return Scheme::rk4;
  if (name == "implicit-euler") return Scheme::implicit_euler;
  throw ConfigError(path, "unknown scheme '" + std::string(name) + "' (explicit-euler, rk4, implicit-euler)");
}

CellField rhs(const DiscreteSystem& sys, const CellField& c) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const auto& w = sys.weights;
  const std::size_t I = sys.species();
  const std::size_t R = sys.reactions();
  const int d = grid.dim();
  const double n2 = static_cast<double>(grid.n()) * grid.n();
  const auto ex = kernels::exponents(net);

  CellField out = make_cell_field(grid, I);
  parallel::for_each_index(grid.cells(), [&](std::size_t k) {
    // J first, then the same summation order as ce_adjoint
    double jr[64];
    std::vector<double> jr_heap;
    double* j = jr;
    if (R > 64) {
      jr_heap.resize(R);
      j = jr_heap.data();
    }
    for (std::size_t r = 0; r < R; ++r) j[r] = kernels::reaction_flux(net.reaction(r).kappa, ex, r, c, w, k);
    for (std::size_t i = 0; i < I; ++i) {
      const double dn2 = net.diffusion()[i] * n2;
      double v = 0.0;
      for (int e = 0; e < d; ++e) {
        const std::size_t km = grid.backward(k, e);
        v += kernels::edge_flux(dn2, c, w, i, km, grid.forward(km, e)) -
             kernels::edge_flux(dn2, c, w, i, k, grid.forward(k, e));
      }
      for (std::size_t r = 0; r < R; ++r) v += net.gamma(r, i) * j[r];
      out(i, k) = v;
    }
  });
  return out;
}

double policy_dt(const DiscreteSystem& sys, const CellField& c) {
  const auto& net = sys.network;
  const auto& w = sys.weights;
  const auto wf = w.flat();
  const double w_min = *std::min_element(wf.begin(), wf.end());
  const double w_max = *std::max_element(wf.begin(), wf.end());
  double max_delta = 0.0;
  for (double delta : net.diffusion()) max_delta = std::max(max_delta, delta);
  const double n2 = static_cast<double>(sys.grid.n()) * sys.grid.n();
  const double diff = 2.0 * sys.grid.dim() * n2 * max_delta * std::sqrt(w_max / w_min);

  double u_max = 1.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t k = 0; k < c.cells(); ++k) u_max = std::max(u_max, c(i, k) / w(i, k));

  double lip = 0.0;
  for (const auto& rx : net.reactions()) {
    double a1 = 0.0, b1 = 0.0, g1 = 0.0, hs = 0.0;
    for (std::size_t i = 0; i < rx.alpha.size(); ++i) {
      a1 += rx.alpha[i];
      b1 += rx.beta[i];
      g1 += std::fabs(rx.alpha[i] - rx.beta[i]);
      hs += 0.5 * (rx.alpha[i] + rx.beta[i]);
    }
    const double top = std::max(a1, b1);
    const double w_scale = std::pow(hs > 0.0 ? w_max : 1.0, hs);
    lip += rx.kappa * w_scale * (a1 + b1) * std::pow(u_max, std::max(0.0, top - 1.0)) * g1 / w_min;
  }
  const double denom = diff + lip;
  return denom > 0.0 ? 0.2 / denom : 1e-2;
}

namespace {

void axpy(CellField& y, double a, const CellField& x) {
  auto fy = y.flat();
  const auto fx = x.flat();
  for (std::size_t m = 0; m < fy.size(); ++m) fy[m] += a * fx[m];
}

CellField add_scaled(const CellField& c, double a, const CellField& x) {
  CellField out = c;
  axpy(out, a, x);
  return out;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

using SparseMatrix = Eigen::SparseMatrix<double>;

// d rhs / d c at c, unknowns ordered like CellField::flat() (species-major).
SparseMatrix rhs_jacobian(const DiscreteSystem& sys, const CellField& c) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const auto& w = sys.weights;
  const std::size_t I = sys.species();
  const std::size_t K = grid.cells();
  const double n2 = static_cast<double>(grid.n()) * grid.n();
  const auto ex = kernels::exponents(net);
  auto idx = [K](std::size_t i, std::size_t k) { return static_cast<int>(i * K + k); };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(I * K * (1 + 2 * grid.dim()) + net.reaction_count() * K * I * I);
  for (std::size_t i = 0; i < I; ++i) {
    const double dn2 = net.diffusion()[i] * n2;
    for (std::size_t k = 0; k < K; ++k) {
      for (int e = 0; e < grid.dim(); ++e) {
        const std::size_t kp = grid.forward(k, e);
        const std::size_t km = grid.backward(k, e);
        const double s_in = dn2 * std::sqrt(w(i, km) * w(i, k));
        const double s_out = dn2 * std::sqrt(w(i, k) * w(i, kp));
        trip.emplace_back(idx(i, k), idx(i, km), s_in / w(i, km));
        trip.emplace_back(idx(i, k), idx(i, k), -(s_in + s_out) / w(i, k));
        trip.emplace_back(idx(i, k), idx(i, kp), s_out / w(i, kp));
      }
    }
  }
  // d u^g / d c_j = g_j u_j^(g_j - 1) / w_j prod_{l != j} u_l^g_l
  auto dpow = [&](const std::vector<double>& g, std::size_t k, std::size_t j) {
    if (g[j] == 0.0) return 0.0;
    double p = g[j] / w(j, k);
    for (std::size_t l = 0; l < I; ++l) {
      const double u = c(l, k) / w(l, k);
      const double e = l == j ? g[l] - 1.0 : g[l];
      if (e != 0.0) p *= std::pow(u, e);
    }
    return p;
  };
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const double kappa = net.reaction(r).kappa;
    for (std::size_t k = 0; k < K; ++k) {
      const double pref = kappa * kernels::cell_power(w, nullptr, k, ex.half_sum[r]);
      for (std::size_t j = 0; j < I; ++j) {
        const double dj = pref * (dpow(ex.beta[r], k, j) - dpow(ex.alpha[r], k, j));
        if (dj == 0.0) continue;
        for (std::size_t i = 0; i < I; ++i) {
          const double g = net.gamma(r, i);
          if (g != 0.0) trip.emplace_back(idx(i, k), idx(j, k), g * dj);
        }
      }
    }
  }
  SparseMatrix jac(static_cast<int>(I * K), static_cast<int>(I * K));
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

bool admissible(const CellField& c) {
  for (double v : c.flat())
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
  return true;
}

CellField implicit_euler(const DiscreteSystem& sys, const CellField& c, double dt, const NewtonOptions& opts) {
  const double scale = 1.0 + max_abs(c.flat());
  auto residual = [&](const CellField& x) {
    CellField g = x;
    axpy(g, -1.0, c);
    axpy(g, -dt, rhs(sys, x));
    return g;
  };
  CellField x = c;
  CellField g = residual(x);
  double norm = max_abs(g.flat());
  const int n = static_cast<int>(c.size());
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (norm <= opts.tol * scale) return x;
    SparseMatrix jac = rhs_jacobian(sys, x);
    jac *= -dt;
    SparseMatrix id(n, n);
    id.setIdentity();
    jac += id;
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(jac);
    if (lu.info() != Eigen::Success) throw SolverError("implicit-euler: singular Newton matrix");
    Eigen::Map<const Eigen::VectorXd> gv(g.flat().data(), n);
    const Eigen::VectorXd delta = lu.solve(gv);

    double lambda = 1.0;
    bool moved = false;
    for (int damp = 0; damp < 30; ++damp, lambda *= 0.5) {
      CellField trial = x;
      auto ft = trial.flat();
      for (int m = 0; m < n; ++m) ft[m] -= lambda * delta[m];
      if (!admissible(trial)) continue;
      CellField gt = residual(trial);
      const double nt = max_abs(gt.flat());
      if (nt < norm || nt <= opts.tol * scale) {
        x = std::move(trial);
        g = std::move(gt);
        norm = nt;
        moved = true;
        break;
      }
    }
    if (!moved) {
      // stagnation at round-off level counts as converged
      if (norm <= 1e3 * opts.tol * scale) return x;
      break;
    }
  }
  if (norm <= opts.tol * scale) return x;
  std::ostringstream msg;
  msg << "implicit-euler: Newton did not converge (residual " << norm << ", dt " << dt << ")";
  throw SolverError(msg.str());
}

}  // namespace

CellField step(const DiscreteSystem& sys, const CellField& c, double dt, Scheme scheme, const NewtonOptions& newton) {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  switch (scheme) {
    case Scheme::explicit_euler: return add_scaled(c, dt, rhs(sys, c));
    case Scheme::rk4: {
      const CellField k1 = rhs(sys, c);
      const CellField k2 = rhs(sys, add_scaled(c, 0.5 * dt, k1));
      const CellField k3 = rhs(sys, add_scaled(c, 0.5 * dt, k2));
      const CellField k4 = rhs(sys, add_scaled(c, dt, k3));
      CellField out = c;
      auto fo = out.flat();
      const auto f1 = k1.flat(), f2 = k2.flat(), f3 = k3.flat(), f4 = k4.flat();
      for (std::size_t m = 0; m < fo.size(); ++m) fo[m] += dt / 6.0 * (f1[m] + 2.0 * f2[m] + 2.0 * f3[m] + f4[m]);
      return out;
    }
    case Scheme::implicit_euler: return implicit_euler(sys, c, dt, newton);
  }
  throw DomainError("step: unknown scheme");
}

namespace {

Sample make_sample(const DiscreteSystem& sys, double t, CellField c) {
  Fluxes fx = constitutive_fluxes(sys, c);
  Sample s{t, std::move(c), std::move(fx.diff), std::move(fx.react), {}};
  s.report = evaluate_functionals(sys, s.c, s.flux_diff, s.flux_react);
  return s;
}

}  // namespace

Trajectory integrate(const DiscreteSystem& sys, const CellField& c0, double T, const IntegrateOptions& opts) {
  if (!(T > 0.0)) throw DomainError("integrate: T must be positive");
  if (!(opts.sample_dt > 0.0)) throw DomainError("integrate: sample_dt must be positive");
  if (!admissible(c0)) throw DomainError("integrate: initial state must be finite and non-negative");

  Trajectory traj;
  traj.scheme = std::string(scheme_name(opts.scheme));
  traj.sample_dt = opts.sample_dt;
  traj.dt_policy = opts.dt ? "fixed" : "auto";
  traj.dt = opts.dt ? *opts.dt : policy_dt(sys, c0);
  traj.dim = sys.grid.dim();
  traj.n = sys.grid.n();
  traj.fingerprint = sys.network.fingerprint();
  if (!(traj.dt > 0.0)) throw DomainError("integrate: dt must be positive");

  double dt = traj.dt;
  double t = 0.0;
  CellField c = c0;
  traj.samples.push_back(make_sample(sys, 0.0, c));

  const auto n_samples = static_cast<std::size_t>(std::ceil(T / opts.sample_dt - 1e-9));
  for (std::size_t m = 1; m <= n_samples; ++m) {
    const double t_next = std::min(T, static_cast<double>(m) * opts.sample_dt);
    while (t < t_next) {
      const double remaining = t_next - t;
      const bool last = remaining <= dt * (1.0 + 1e-9);
      const double h = last ? remaining : dt;
      CellField next;
      bool ok = true;
      std::string why = "negative or non-finite state";
      try {
        next = step(sys, c, h, opts.scheme, opts.newton);
        ok = admissible(next);
      } catch (const SolverError& e) {
        ok = false;
        why = e.what();
      }
      if (!ok) {
        ++traj.rejected_steps;
        dt = 0.5 * std::min(dt, h);
        if (dt < opts.dt_floor) {
          std::ostringstream msg;
          msg << "integrate: step size fell below " << opts.dt_floor << " at t=" << t << " (" << why << ")";
          throw SolverError(msg.str());
        }
        continue;
      }
      ++traj.accepted_steps;
      c = std::move(next);
      t = last ? t_next : t + h;
    }
    traj.samples.push_back(make_sample(sys, t_next, c));
  }
  traj.final_dt = dt;
  return traj;
}

void recompute_reports(const DiscreteSystem& sys, Trajectory& traj) {
  for (auto& s : traj.samples) s.report = evaluate_functionals(sys, s.c, s.flux_diff, s.flux_react);
}

BoxReport bounding_box_check(const Trajectory& traj, std::span<const double> upper) {
  for (std::size_t m = 0; m < traj.samples.size(); ++m) {
    const auto& c = traj.samples[m].c;
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t k = 0; k < c.cells(); ++k) {
        const double v = c(i, k);
        if (!(v >= 0.0) || v > upper[i]) return BoxReport{false, m, i, k, v};
      }
  }
  return {};
}

std::vector<double> invariant_box(const DiscreteSystem& sys, const CellField& c0) {
  const auto& w = sys.weights;
  double u_max = 0.0;
  for (std::size_t i = 0; i < c0.rows(); ++i)
    for (std::size_t k = 0; k < c0.cells(); ++k) u_max = std::max(u_max, c0(i, k) / w(i, k));
  std::vector<double> box(c0.rows(), 0.0);
  for (std::size_t i = 0; i < c0.rows(); ++i) {
    double w_max = 0.0;
    for (std::size_t k = 0; k < c0.cells(); ++k) w_max = std::max(w_max, w(i, k));
    box[i] = w_max * u_max;
  }
  return box;
}

namespace {

struct Probe {
  std::size_t seg;  // samples[seg] <= t <= samples[seg + 1]
  double theta;
};

Probe locate_time(const Trajectory& traj, double t) {
  const auto& s = traj.samples;
  auto it = std::upper_bound(s.begin(), s.end(), t, [](double v, const Sample& x) { return v < x.t; });
  std::size_t hi = static_cast<std::size_t>(it - s.begin());
  if (hi == 0) hi = 1;
  if (hi >= s.size()) hi = s.size() - 1;
  const std::size_t lo = hi - 1;
  const double theta = (t - s[lo].t) / (s[hi].t - s[lo].t);
  return {lo, theta};
}

double rate(const Sample& s) { return s.report.dissipation_rate(); }

double lerp(double a, double b, double theta) { return theta == 0.0 ? a : theta == 1.0 ? b : a + theta * (b - a); }

}  // namespace

EdbBalance edb_residual(const Trajectory& traj, double s, double t) {
  if (traj.samples.size() < 2) throw DomainError("edb_residual: trajectory needs at least two samples");
  if (!(s < t)) throw DomainError("edb_residual: need s < t");
  if (s < traj.t_begin() || t > traj.t_end()) throw DomainError("edb_residual: times outside the trajectory span");

  const auto& smp = traj.samples;
  const Probe ps = locate_time(traj, s);
  const Probe pt = locate_time(traj, t);
  const double es = lerp(smp[ps.seg].report.energy, smp[ps.seg + 1].report.energy, ps.theta);
  const double et = lerp(smp[pt.seg].report.energy, smp[pt.seg + 1].report.energy, pt.theta);
  const double rs = lerp(rate(smp[ps.seg]), rate(smp[ps.seg + 1]), ps.theta);
  const double rt = lerp(rate(smp[pt.seg]), rate(smp[pt.seg + 1]), pt.theta);

  double integral = 0.0;
  if (ps.seg == pt.seg) {
    integral = 0.5 * (rs + rt) * (t - s);
  } else {
    integral += 0.5 * (rs + rate(smp[ps.seg + 1])) * (smp[ps.seg + 1].t - s);
    for (std::size_t m = ps.seg + 1; m < pt.seg; ++m)
      integral += 0.5 * (rate(smp[m]) + rate(smp[m + 1])) * (smp[m + 1].t - smp[m].t);
    integral += 0.5 * (rate(smp[pt.seg]) + rt) * (t - smp[pt.seg].t);
  }
  return EdbBalance{es, et, integral, et - es + integral};
}

double ce_residual(const DiscreteSystem& sys, const Trajectory& traj) {
  const auto& smp = traj.samples;
  if (smp.size() < 3) throw DomainError("ce_residual: trajectory needs at least three samples");
  double worst = 0.0;
  for (std::size_t m = 1; m + 1 < smp.size(); ++m) {
    const double h2 = smp[m + 1].t - smp[m - 1].t;
    CellField diff = ce_adjoint(sys.grid, sys.network, smp[m].flux_diff, smp[m].flux_react);
    auto fd = diff.flat();
    const auto fp = smp[m + 1].c.flat();
    const auto fm = smp[m - 1].c.flat();
    for (std::size_t q = 0; q < fd.size(); ++q) fd[q] = (fp[q] - fm[q]) / h2 - fd[q];
    worst = std::max(worst, l1_norm(sys.grid, diff));
  }
  return worst;
}

std::vector<double> conserved_totals(const DiscreteSystem& sys, const std::vector<std::vector<double>>& basis,
                                     const CellField& c) {
  std::vector<double> out;
  out.reserve(basis.size());
  for (const auto& q : basis) {
    out.push_back(sys.grid.cell_volume() * parallel::block_sum(sys.grid.cells(), [&](std::size_t k) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * c(i, k);
                    return s;
                  }));
  }
  return out;
}

}  // namespace edpflow
