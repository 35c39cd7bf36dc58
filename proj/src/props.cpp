#include "edpflow/props.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>

#include "edpflow/continuum.hpp"
#include "edpflow/cosh.hpp"
#include "edpflow/discrete_gs.hpp"
#include "edpflow/embedding.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/expr.hpp"
#include "edpflow/serial/reference.hpp"
#include "edpflow/solver.hpp"
#include "edpflow/trajectory_io.hpp"

namespace edpflow::props {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
double log_uniform(Rng& rng, double lo, double hi) { return std::exp(uniform(rng, std::log(lo), std::log(hi))); }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string g(double v) { return fmt::format("{:.17g}", v); }

class Ctx {
 public:
  Ctx(Rng rng, std::size_t count, SuiteResult& res) : rng(rng), count(count), res_(res) {}

  /// Records one case; `violation` is a nonnegative relative measure, 0 when the property holds.
  void check(bool ok, double violation, const std::function<std::string()>& describe) {
    ++res_.cases;
    if (std::isfinite(violation)) res_.max_violation = std::max(res_.max_violation, violation);
    else res_.max_violation = std::numeric_limits<double>::infinity();
    if (ok) return;
    ++res_.failures;
    if (res_.counterexample.empty()) res_.counterexample = describe();
  }

  /// Runs `body` on each case and records any exception as a failure.
  template <class Body>
  void guarded(Body&& body) {
    try {
      body();
    } catch (const std::exception& ex) {
      check(false, std::numeric_limits<double>::infinity(), [&] { return std::string("exception: ") + ex.what(); });
    }
  }

  std::size_t trajectories() const { return std::max<std::size_t>(1, count / 50); }

  Rng rng;
  std::size_t count;

 private:
  SuiteResult& res_;
};

double rel(double excess, double scale) { return std::max(0.0, excess) / (1.0 + std::fabs(scale)); }

// ---------------------------------------------------------------------------
// Generators.

struct NetSample {
  ReactionNetwork net;
  std::string label;
};

NetSample random_network(Rng& rng, bool variable_omega, bool allow_random = true) {
  const int family = uniform_int(rng, 0, allow_random ? 4 : 3);
  std::vector<Reaction> rx;
  std::size_t species = 2;
  std::string name;
  switch (family) {
    case 0:
      name = "exchange";
      rx.push_back({{1, 0}, {0, 1}, 1.0});
      break;
    case 1:
      name = "binary";
      species = 3;
      rx.push_back({{1, 1, 0}, {0, 0, 1}, 1.0});
      break;
    case 2:
      name = "dimer";
      rx.push_back({{2, 0}, {0, 1}, 1.0});
      break;
    case 3:
      name = "heat";
      species = 1;
      break;
    default: {
      name = "random";
      species = static_cast<std::size_t>(uniform_int(rng, 2, 3));
      const int reactions = uniform_int(rng, 1, 2);
      for (int r = 0; r < reactions; ++r) {
        Reaction x;
        do {
          x.alpha.assign(species, 0.0);
          x.beta.assign(species, 0.0);
          for (std::size_t i = 0; i < species; ++i) {
            x.alpha[i] = uniform_int(rng, 0, 2);
            x.beta[i] = uniform_int(rng, 0, 2);
          }
        } while (x.alpha == x.beta);
        rx.push_back(std::move(x));
      }
    }
  }
  for (auto& r : rx) r.kappa = log_uniform(rng, 0.3, 3.0);
  std::vector<double> delta(species);
  for (auto& d : delta) d = log_uniform(rng, 0.2, 2.0);

  std::string label = name + " kappa=[";
  for (const auto& r : rx) label += g(r.kappa) + " ";
  label += "] delta=[";
  for (double d : delta) label += g(d) + " ";
  label += "] omega=[";

  ReferenceDensity omega;
  if (variable_omega && uniform_int(rng, 0, 2) == 0) {
    std::vector<Expr> fields;
    for (std::size_t i = 0; i < species; ++i) {
      const double a = log_uniform(rng, 0.5, 2.0);
      const double b = uniform(rng, -0.4, 0.4) * a;
      fields.push_back(Expr::parse(fmt::format("{:.17g} + {:.17g}*cos(2*pi*x)", a, b)));
      label += fields.back().source() + "; ";
    }
    omega = ReferenceDensity(std::move(fields));
  } else {
    std::vector<double> w(species);
    for (auto& v : w) {
      v = log_uniform(rng, 0.5, 2.0);
      label += g(v) + " ";
    }
    omega = ReferenceDensity(std::move(w));
  }
  label += "]";
  return {ReactionNetwork(species, std::move(rx), std::move(delta), std::move(omega)), label};
}

struct SystemSample {
  DiscreteSystem sys;
  std::string label;
};

SystemSample random_system(Rng& rng, bool variable_omega = true) {
  auto ns = random_network(rng, variable_omega);
  const int d = uniform_int(rng, 1, 2);
  const int n = d == 1 ? uniform_int(rng, 2, 8) : uniform_int(rng, 2, 4);
  return {make_system(std::move(ns.net), TorusGrid(d, n)), fmt::format("{} d={} N={}", ns.label, d, n)};
}

CellField random_state(Rng& rng, const DiscreteSystem& sys, double spread = 1.5) {
  CellField c = sys.weights;
  for (double& v : c.flat()) v *= std::exp(uniform(rng, -spread, spread));
  return c;
}

template <class Tag>
LatticeArray<Tag> random_like(Rng& rng, LatticeArray<Tag> a, double scale) {
  for (double& v : a.flat()) v = uniform(rng, -scale, scale);
  return a;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double sum_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m += std::fabs(x);
  return m;
}

/// Smooth positive initial data per species.
std::vector<PointFn> smooth_initial(Rng& rng, std::size_t species) {
  std::vector<PointFn> out;
  for (std::size_t i = 0; i < species; ++i) {
    const double a = uniform(rng, 0.5, 1.5);
    const double b = uniform(rng, -0.45, 0.45) * a;
    const double phase = uniform(rng, 0.0, 2.0 * kPi);
    out.push_back([a, b, phase](std::span<const double> x) { return a + b * std::cos(2.0 * kPi * x[0] + phase); });
  }
  return out;
}

struct TrajectorySample {
  DiscreteSystem sys;
  Trajectory traj;
  std::string label;
};

TrajectorySample random_trajectory(Rng& rng, bool variable_omega = true) {
  auto ns = random_network(rng, variable_omega);
  const int n = uniform_int(rng, 3, 8);
  auto sys = make_system(std::move(ns.net), TorusGrid(1, n));
  const auto c0 = discretize(sys.grid, smooth_initial(rng, sys.species()), 8);
  IntegrateOptions opts;
  opts.sample_dt = 0.01;
  auto traj = integrate(sys, c0, 0.2, opts);
  return {std::move(sys), std::move(traj), fmt::format("{} d=1 N={}", ns.label, n)};
}

// ---------------------------------------------------------------------------
// cosh

void cosh_identity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double a = log_uniform(ctx.rng, 1e-6, 1e6);
    const double b = log_uniform(ctx.rng, 1e-6, 1e6);
    const double sigma = std::log(a) - std::log(b);
    const double sab = std::sqrt(a * b);
    const double target = 2.0 * (std::sqrt(a) - std::sqrt(b)) * (std::sqrt(a) - std::sqrt(b));
    const double v1 = rel(std::fabs(sab * cosh::cstar(sigma) - target), target);
    const double v2 = rel(std::fabs(sab * cosh::cstar_prime(sigma) - (a - b)), a - b);
    const double v = std::max(v1, v2);
    ctx.check(v <= 1e-10, v, [&] { return fmt::format("a={} b={} violation={}", g(a), g(b), g(v)); });
  }
}

double random_s(Rng& rng, std::size_t n) {
  return n % 4 == 0 ? std::copysign(log_uniform(rng, 1e-8, 100.0), uniform(rng, -1, 1)) : uniform(rng, -100.0, 100.0);
}

void cosh_bounds_lower(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s = random_s(ctx.rng, n);
    const double lo = 0.5 * std::fabs(s) * std::log1p(std::fabs(s));
    const double c = cosh::c_of_s(s);
    ctx.check(c >= lo * (1 - 1e-14), rel(lo - c, c), [&] { return fmt::format("s={} C={} lower bound {}", g(s), g(c), g(lo)); });
  }
}

void cosh_bounds_upper(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s = random_s(ctx.rng, n);
    const double hi = std::fabs(s) * std::log1p(std::fabs(s));
    const double c = cosh::c_of_s(s);
    ctx.check(c <= hi * (1 + 1e-14), rel(c - hi, c), [&] { return fmt::format("s={} C={} upper bound {}", g(s), g(c), g(hi)); });
  }
}

void cosh_derivative_bounds(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s = random_s(ctx.rng, n);
    const double c = cosh::c_of_s(s);
    const double sc = s * cosh::c_prime(s);
    const double v = std::max(rel(c - sc, sc), rel(sc - 2.0 * c, c));
    ctx.check(c <= sc * (1 + 1e-12) && sc <= 2.0 * c * (1 + 1e-12), v,
              [&] { return fmt::format("s={} C={} sC'={}", g(s), g(c), g(sc)); });
  }
}

void cosh_perspective_w(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s = uniform(ctx.rng, -50.0, 50.0);
    double w1 = log_uniform(ctx.rng, 1e-6, 1e3);
    double w2 = log_uniform(ctx.rng, 1e-6, 1e3);
    if (w1 > w2) std::swap(w1, w2);
    const double p1 = cosh::perspective(s, w1);
    const double p2 = cosh::perspective(s, w2);
    const double v = rel(p2 - p1, p1);
    ctx.check(p2 <= p1 + 1e-12 * (1 + p1), v,
              [&] { return fmt::format("s={} w1={} w2={} P1={} P2={}", g(s), g(w1), g(w2), g(p1), g(p2)); });
  }
}

void cosh_perspective_lambda(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s = uniform(ctx.rng, -50.0, 50.0);
    const double w = log_uniform(ctx.rng, 1e-4, 50.0);
    double l1 = log_uniform(ctx.rng, 1e-3, 1e2);
    double l2 = log_uniform(ctx.rng, 1e-3, 1e2);
    if (l1 > l2) std::swap(l1, l2);
    const double p1 = cosh::perspective(l1 * s, l1 * l1 * w);
    const double p2 = cosh::perspective(l2 * s, l2 * l2 * w);
    const double v = rel(p1 - p2, p2);
    ctx.check(p1 <= p2 + 1e-12 * (1 + p2), v, [&] {
      return fmt::format("s={} w={} l1={} l2={} P1={} P2={}", g(s), g(w), g(l1), g(l2), g(p1), g(p2));
    });
  }
}

void cosh_magical(Ctx& ctx) {
  constexpr double qs[] = {1.1, 1.5, 2.0, 3.0};
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double q = qs[n % 4];
    const double s = uniform(ctx.rng, -50.0, 50.0);
    const double w = n % 2 == 0 ? uniform(ctx.rng, 0.0, 50.0) : log_uniform(ctx.rng, 1e-12, 50.0);
    if (!(w > 0.0)) continue;
    const double lhs = cosh::c_of_s(s);
    const double rhs = q / (q - 1.0) * cosh::perspective(s, w) + 4.0 * std::pow(w, q) / (q - 1.0);
    const double v = rel(lhs - rhs, rhs);
    ctx.check(lhs <= rhs * (1 + 1e-14), v,
              [&] { return fmt::format("q={} s={} w={} C(s)={} bound={}", g(q), g(s), g(w), g(lhs), g(rhs)); });
  }
}

void cosh_convexity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const double s1 = uniform(ctx.rng, -50.0, 50.0), s2 = uniform(ctx.rng, -50.0, 50.0);
    const double w1 = log_uniform(ctx.rng, 1e-4, 50.0), w2 = log_uniform(ctx.rng, 1e-4, 50.0);
    const double th = uniform(ctx.rng, 0.0, 1.0);
    const double lhs = cosh::perspective(th * s1 + (1 - th) * s2, th * w1 + (1 - th) * w2);
    const double rhs = th * cosh::perspective(s1, w1) + (1 - th) * cosh::perspective(s2, w2);
    const double v = rel(lhs - rhs, rhs);
    ctx.check(lhs <= rhs + 1e-12 * (1 + rhs), v, [&] {
      return fmt::format("(s1,w1)=({},{}) (s2,w2)=({},{}) theta={} lhs={} rhs={}", g(s1), g(w1), g(s2), g(w2),
                         g(th), g(lhs), g(rhs));
    });
  }
}

// ---------------------------------------------------------------------------
// network

std::vector<double> random_stoich(Rng& rng, std::size_t n, bool halves) {
  std::vector<double> v(n);
  for (auto& x : v) x = halves ? 0.5 * uniform_int(rng, 0, 6) : uniform_int(rng, 0, 3);
  return v;
}

void network_kappa_symmetry(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto I = static_cast<std::size_t>(uniform_int(ctx.rng, 1, 4));
    const auto alpha = random_stoich(ctx.rng, I, n % 3 == 0);
    const auto beta = random_stoich(ctx.rng, I, n % 3 == 0);
    std::vector<double> omega(I);
    for (auto& w : omega) w = log_uniform(ctx.rng, 0.1, 10.0);
    const double kf = log_uniform(ctx.rng, 0.1, 10.0);
    const double kb = kf * monomial(omega, alpha) / monomial(omega, beta);
    ctx.guarded([&] {
      const double k1 = kappa_from_rates(kf, kb, omega, alpha, beta);
      const double k2 = kappa_from_rates(kb, kf, omega, beta, alpha);
      ctx.check(k1 == k2, rel(std::fabs(k1 - k2), k1),
                [&] { return fmt::format("k_fw={} k_bw={} kappa={} swapped={}", g(kf), g(kb), g(k1), g(k2)); });
    });
  }
}

void network_conservation(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto I = static_cast<std::size_t>(uniform_int(ctx.rng, 1, 4));
    const int R = uniform_int(ctx.rng, 1, 3);
    std::vector<Reaction> rx;
    for (int r = 0; r < R; ++r) rx.push_back({random_stoich(ctx.rng, I, n % 3 == 0), random_stoich(ctx.rng, I, n % 3 == 0), 1.0});
    const ReactionNetwork net(I, rx, std::vector<double>(I, 1.0), ReferenceDensity(std::vector<double>(I, 1.0)));
    const auto gamma = stoich_matrix(net);
    const auto basis = conservation_laws(gamma);
    bool ok = basis.size() + std::min<std::size_t>(I, static_cast<std::size_t>(R)) >= I;
    double worst = 0.0;
    for (const auto& q : basis) {
      for (int r = 0; r < R; ++r) {
        double dot = 0.0;
        for (std::size_t i = 0; i < I; ++i) dot += q[i] * net.gamma(static_cast<std::size_t>(r), i);
        worst = std::max(worst, std::fabs(dot));
        ok = ok && dot == 0.0;
      }
    }
    ctx.check(ok, worst, [&] {
      std::string s = fmt::format("species={} gamma=[", I);
      for (double v : gamma.real) s += g(v) + " ";
      return s + fmt::format("] basis size {} max |q.gamma|={}", basis.size(), g(worst));
    });
  }
}

void network_monomial(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto I = static_cast<std::size_t>(uniform_int(ctx.rng, 1, 4));
    std::vector<double> c(I);
    for (auto& v : c) v = uniform_int(ctx.rng, 0, 5) == 0 ? 0.0 : log_uniform(ctx.rng, 1e-3, 1e3);
    const auto a = random_stoich(ctx.rng, I, true);
    const auto b = random_stoich(ctx.rng, I, true);
    std::vector<double> ab(I);
    for (std::size_t i = 0; i < I; ++i) ab[i] = a[i] + b[i];
    const double lhs = monomial(c, ab);
    const double rhs = monomial(c, a) * monomial(c, b);
    const double v = std::fabs(lhs - rhs) / std::max(std::fabs(rhs), std::numeric_limits<double>::min());
    const bool ok = lhs == rhs || v <= 1e-12;
    ctx.check(ok, ok ? 0.0 : v, [&] { return fmt::format("c[0]={} lhs={} rhs={}", g(c[0]), g(lhs), g(rhs)); });
  }
}

// ---------------------------------------------------------------------------
// grid

void grid_gradient_lines(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const int d = uniform_int(ctx.rng, 1, 3);
    const int N = uniform_int(ctx.rng, 1, d == 3 ? 4 : 8);
    const TorusGrid grid(d, N);
    const auto phi = random_like(ctx.rng, make_cell_field(grid, 2), 10.0);
    const auto grad = disc_gradient(grid, phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      for (int e = 0; e < d; ++e)
        for (std::size_t k = 0; k < grid.cells(); ++k) {
          if (grid.coords(k)[e] != 0) continue;
          double sum = 0.0;
          std::size_t j = k;
          for (int step = 0; step < N; ++step, j = grid.forward(j, e)) sum += grad(i, j, e);
          worst = std::max(worst, std::fabs(sum));
        }
    const double v = worst / (1.0 + 10.0 * N);
    ctx.check(v <= 1e-13, v, [&] { return fmt::format("d={} N={} max line sum={}", d, N, g(worst)); });
  }
}

void grid_adjoint_mass(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng, false);
    const auto& grid = ss.sys.grid;
    const auto F = random_like(ctx.rng, make_edge_field(grid, ss.sys.species()), 5.0);
    const auto J = make_react_field(grid, ss.sys.reactions());
    const auto v = ce_adjoint(grid, ss.sys.network, F, J);
    double worst = 0.0;
    for (std::size_t i = 0; i < ss.sys.species(); ++i) {
      double mass = 0.0;
      for (double x : v.row(i)) mass += x;
      worst = std::max(worst, std::fabs(mass * grid.cell_volume()));
    }
    const double vio = worst / (1.0 + max_abs(F.flat()));
    ctx.check(vio <= 1e-14, vio, [&] { return fmt::format("{} max species mass change={}", ss.label, g(worst)); });
  }
}

void grid_adjoint_conservation(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng, false);
    const auto& grid = ss.sys.grid;
    const auto F = random_like(ctx.rng, make_edge_field(grid, ss.sys.species()), 5.0);
    const auto J = random_like(ctx.rng, make_react_field(grid, ss.sys.reactions()), 5.0);
    const auto v = ce_adjoint(grid, ss.sys.network, F, J);
    const auto phi = random_like(ctx.rng, make_cell_field(grid, ss.sys.species()), 1.0);
    const double scale = 1.0 + sum_abs(F.flat()) + sum_abs(J.flat());
    double worst = 0.0;
    for (const auto& q : conservation_laws(stoich_matrix(ss.sys.network))) {
      double total = 0.0;
      for (std::size_t i = 0; i < ss.sys.species(); ++i)
        for (double x : v.row(i)) total += q[i] * x;
      worst = std::max(worst, std::fabs(total * grid.cell_volume()) / scale);
    }
    const double lhs = pairing(grid, disc_gradient(grid, phi), F) + pairing(grid, gamma_lift(ss.sys.network, phi), J);
    const double rhs = pairing(grid, phi, v);
    worst = std::max(worst, std::fabs(lhs - rhs) / scale);
    ctx.check(worst <= 1e-14, worst,
              [&] { return fmt::format("{} q-weighted total / adjoint mismatch={}", ss.label, g(worst)); });
  }
}

// ---------------------------------------------------------------------------
// discrete_gs

void dgs_dual_convexity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto& sys = ss.sys;
    const auto c = random_state(ctx.rng, sys);
    const auto xa = random_like(ctx.rng, make_edge_field(sys.grid, sys.species()), 2.0);
    const auto xb = random_like(ctx.rng, make_edge_field(sys.grid, sys.species()), 2.0);
    const auto za = random_like(ctx.rng, make_react_field(sys.grid, sys.reactions()), 4.0);
    const auto zb = random_like(ctx.rng, make_react_field(sys.grid, sys.reactions()), 4.0);
    auto xm = xa;
    auto zm = za;
    for (std::size_t j = 0; j < xm.size(); ++j) xm.flat()[j] = 0.5 * (xa.flat()[j] + xb.flat()[j]);
    for (std::size_t j = 0; j < zm.size(); ++j) zm.flat()[j] = 0.5 * (za.flat()[j] + zb.flat()[j]);
    const double mid = dual_dissipation(sys, c, xm, zm).total();
    const double avg = 0.5 * (dual_dissipation(sys, c, xa, za).total() + dual_dissipation(sys, c, xb, zb).total());
    const double v = rel(mid - avg, avg);
    ctx.check(mid <= avg + 1e-12 * (1 + avg), v,
              [&] { return fmt::format("{} R*(mid)={} mean={}", ss.label, g(mid), g(avg)); });
  }
}

void dgs_young_fenchel(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto& sys = ss.sys;
    const auto c = random_state(ctx.rng, sys);
    const auto xi = random_like(ctx.rng, make_edge_field(sys.grid, sys.species()), 2.0);
    const auto zeta = random_like(ctx.rng, make_react_field(sys.grid, sys.reactions()), 4.0);
    const double fs = sys.grid.n() * sys.grid.n();
    const auto F = random_like(ctx.rng, make_edge_field(sys.grid, sys.species()), 2.0 * fs);
    const auto J = random_like(ctx.rng, make_react_field(sys.grid, sys.reactions()), 4.0);
    const double lhs = pairing(sys.grid, xi, F) + pairing(sys.grid, zeta, J);
    const double rhs = dual_dissipation(sys, c, xi, zeta).total() + primal_dissipation(sys, c, F, J).total();
    const double v = rel(lhs - rhs, rhs);
    ctx.check(lhs <= rhs + 1e-12 * (1 + std::fabs(rhs)), v,
              [&] { return fmt::format("{} pairing={} R*+R={}", ss.label, g(lhs), g(rhs)); });
  }
}

void dgs_slope_identity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto& sys = ss.sys;
    const auto c = random_state(ctx.rng, sys);
    CellField mu = c;
    for (std::size_t j = 0; j < mu.size(); ++j) mu.flat()[j] = std::log(c.flat()[j] / sys.weights.flat()[j]);
    auto xi = disc_gradient(sys.grid, mu);
    auto zeta = gamma_lift(sys.network, mu);
    xi *= -1.0;
    zeta *= -1.0;
    const double dual = dual_dissipation(sys, c, xi, zeta).total();
    const double s = slope(sys, c).total();
    const double v = std::fabs(dual - s) / std::max(std::fabs(s), 1e-300);
    ctx.check(v <= 1e-10 || dual == s, v, [&] { return fmt::format("{} S={} R*(-grad mu)={}", ss.label, g(s), g(dual)); });
  }
}

void dgs_fenchel(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto& sys = ss.sys;
    const auto c = random_state(ctx.rng, sys);
    ctx.guarded([&] {
      const auto fl = constitutive_fluxes(sys, c);
      const auto rep = evaluate_functionals(sys, c, fl.diff, fl.react);
      const double scale = rep.dissipation_rate() + 1.0;
      const double gap = fenchel_gap(sys, c, fl.diff, fl.react);
      ctx.check(std::fabs(gap) <= 1e-9 * scale, std::fabs(gap) / scale,
                [&] { return fmt::format("{} gap at constitutive fluxes={} (R+S={})", ss.label, g(gap), g(scale - 1)); });

      auto F = fl.diff;
      auto J = fl.react;
      const double eps = log_uniform(ctx.rng, 1e-2, 1.0);
      for (double& v : F.flat()) v += eps * (1.0 + std::fabs(v)) * uniform(ctx.rng, -1.0, 1.0);
      for (double& v : J.flat()) v += eps * (1.0 + std::fabs(v)) * uniform(ctx.rng, -1.0, 1.0);
      const double pgap = fenchel_gap(sys, c, F, J);
      ctx.check(pgap > 1e-9 * scale, 0.0,
                [&] { return fmt::format("{} perturbed (eps={}) gap={} not positive", ss.label, g(eps), g(pgap)); });
    });
  }
}

void dgs_energy_decay(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      auto ts = random_trajectory(ctx.rng);
      const auto& smp = ts.traj.samples;
      for (std::size_t m = 1; m < smp.size(); ++m) {
        const double e0 = smp[m - 1].report.energy, e1 = smp[m].report.energy;
        ctx.check(e1 <= e0 + 1e-13 * (1 + e0), rel(e1 - e0, e0),
                  [&] { return fmt::format("{} E({})={} > E({})={}", ts.label, g(smp[m].t), g(e1), g(smp[m - 1].t), g(e0)); });
      }
    });
  }
}

void dgs_conservation(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      auto ts = random_trajectory(ctx.rng);
      const auto basis = conservation_laws(stoich_matrix(ts.sys.network));
      if (basis.empty()) return;
      const auto q0 = conserved_totals(ts.sys, basis, ts.traj.samples.front().c);
      for (const auto& s : ts.traj.samples) {
        const auto q = conserved_totals(ts.sys, basis, s.c);
        for (std::size_t b = 0; b < q.size(); ++b) {
          const double v = std::fabs(q[b] - q0[b]) / std::max(std::fabs(q0[b]), 1e-300);
          ctx.check(v <= 1e-10, v, [&] { return fmt::format("{} law {} drifts {} -> {} at t={}", ts.label, b, g(q0[b]), g(q[b]), g(s.t)); });
        }
      }
    });
  }
}

// ---------------------------------------------------------------------------
// solver

void solver_stationarity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto v = rhs(ss.sys, ss.sys.weights);
    const double m = max_abs(v.flat());
    ctx.check(m <= 1e-14, m, [&] { return fmt::format("{} |rhs(w)|_inf={}", ss.label, g(m)); });
  }
}

void solver_serial_agreement(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng);
    const auto& sys = ss.sys;
    const auto c = random_state(ctx.rng, sys);
    auto compare = [&](std::string_view what, std::span<const double> a, std::span<const double> b) {
      const double scale = 1.0 + max_abs(b);
      double worst = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::fabs(a[j] - b[j]) / scale);
      ctx.check(worst <= 1e-12, worst, [&] { return fmt::format("{} {} differs by {}", ss.label, what, g(worst)); });
    };
    compare("rhs", rhs(sys, c).flat(), serial::rhs(sys, c).flat());
    const auto fp = constitutive_fluxes(sys, c);
    const auto fs = serial::constitutive_fluxes(sys, c);
    compare("F", fp.diff.flat(), fs.diff.flat());
    compare("J", fp.react.flat(), fs.react.flat());
    const double e[] = {energy(sys, c), slope(sys, c).total(), primal_dissipation(sys, c, fp.diff, fp.react).total()};
    const double s[] = {serial::energy(sys, c), serial::slope(sys, c).total(),
                        serial::primal_dissipation(sys, c, fs.diff, fs.react).total()};
    compare("functionals", e, s);
  }
}

void solver_rk4_order(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    const double kappa = uniform(ctx.rng, 0.5, 2.0);
    const double a = uniform(ctx.rng, 0.0, 3.0), b = uniform(ctx.rng, 0.0, 3.0);
    const ReactionNetwork net(2, {{{1, 0}, {0, 1}, kappa}}, {1.0, 1.0}, ReferenceDensity(std::vector<double>{1.0, 1.0}));
    const auto sys = make_system(net, TorusGrid(1, 1));
    const double m = 0.5 * (a + b);
    const double exact = m + (a - m) * std::exp(-2.0 * kappa);
    double err[3];
    const double dts[] = {1e-2, 5e-3, 2.5e-3};
    for (int l = 0; l < 3; ++l) {
      auto c = make_cell_field(sys.grid, 2);
      c(0, 0) = a;
      c(1, 0) = b;
      const int steps = static_cast<int>(std::lround(1.0 / dts[l]));
      for (int s = 0; s < steps; ++s) c = step(sys, c, dts[l], Scheme::rk4);
      err[l] = std::fabs(c(0, 0) - exact);
    }
    const double o1 = std::log2(err[0] / err[1]), o2 = std::log2(err[1] / err[2]);
    // an initial state already at equilibrium has no error to measure
    const bool trivial = err[0] < 1e-14;
    ctx.check(trivial || (o1 >= 3.8 && o2 >= 3.8), trivial ? 0.0 : std::max(0.0, 3.8 - std::min(o1, o2)), [&] {
      return fmt::format("kappa={} c0=({}, {}) errors {} {} {} orders {} {}", g(kappa), g(a), g(b), g(err[0]),
                         g(err[1]), g(err[2]), g(o1), g(o2));
    });
  }
}

void solver_edb_refinement(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      const double kappa = uniform(ctx.rng, 0.5, 2.0);
      const double delta = uniform(ctx.rng, 0.05, 0.2);
      const ReactionNetwork net(2, {{{1, 0}, {0, 1}, kappa}}, {delta, delta},
                                ReferenceDensity(std::vector<double>{1.0, 1.0}));
      const auto sys = make_system(net, TorusGrid(1, 8));
      const auto c0 = discretize(sys.grid, smooth_initial(ctx.rng, 2), 8);
      double res[2];
      for (int l = 0; l < 2; ++l) {
        IntegrateOptions opts;
        opts.dt = 1e-3 / (1 << l);
        opts.sample_dt = 2e-2 / (1 << l);
        const auto traj = integrate(sys, c0, 0.5, opts);
        res[l] = std::fabs(edb_residual(traj, 0.0, 0.5).residual);
      }
      const double order = std::log2(res[0] / res[1]);
      // refinement below round-off carries no rate information
      const bool resolved = res[0] > 1e-11;
      ctx.check(!resolved || order >= 1.9, resolved ? std::max(0.0, 1.9 - order) : 0.0, [&] {
        return fmt::format("kappa={} delta={} |L|={} -> {} order {}", g(kappa), g(delta), g(res[0]), g(res[1]), g(order));
      });
    });
  }
}

void solver_bounding_box(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      const ReactionNetwork net(2, {{{1, 0}, {0, 1}, log_uniform(ctx.rng, 0.3, 3.0)}},
                                {log_uniform(ctx.rng, 0.2, 2.0), log_uniform(ctx.rng, 0.2, 2.0)},
                                ReferenceDensity(std::vector<double>{1.0, 1.0}));
      const auto sys = make_system(net, TorusGrid(1, uniform_int(ctx.rng, 2, 16)));
      auto c0 = make_cell_field(sys.grid, 2);
      for (double& v : c0.flat()) v = uniform(ctx.rng, 0.0, 1.0);
      IntegrateOptions opts;
      opts.sample_dt = 0.02;
      const auto traj = integrate(sys, c0, 0.5, opts);
      const double upper[] = {1.0 + 1e-12, 1.0 + 1e-12};
      const auto box = bounding_box_check(traj, upper);
      ctx.check(box.inside, box.inside ? 0.0 : box.value - 1.0, [&] {
        return fmt::format("sample {} species {} cell {} value {}", box.sample, box.species, box.cell, g(box.value));
      });
    });
  }
}

// ---------------------------------------------------------------------------
// embedding

TorusGrid acceptance_grid(Rng& rng) { return uniform_int(rng, 0, 1) == 0 ? TorusGrid(1, 8) : TorusGrid(2, 4); }

struct Trig {
  PointFn value;
  std::vector<PointFn> grad;
};

/// a cos(2 pi (k.x) + p) with small integer wave vector k.
Trig random_trig(Rng& rng, int d) {
  std::array<double, 3> k{0, 0, 0};
  for (int l = 0; l < d; ++l) k[l] = uniform_int(rng, -2, 2);
  if (k[0] == 0 && k[d - 1] == 0) k[0] = 1;
  const double a = uniform(rng, 0.5, 2.0), p = uniform(rng, 0.0, 2.0 * kPi);
  auto arg = [k, p](std::span<const double> x) {
    double s = p;
    for (std::size_t l = 0; l < x.size(); ++l) s += 2.0 * kPi * k[l] * x[l];
    return s;
  };
  Trig t;
  t.value = [a, arg](std::span<const double> x) { return a * std::cos(arg(x)); };
  for (int l = 0; l < d; ++l)
    t.grad.push_back([a, arg, kl = k[l]](std::span<const double> x) { return -2.0 * kPi * kl * a * std::sin(arg(x)); });
  return t;
}

void embed_dualities(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ns = random_network(ctx.rng, false, true);
    const auto grid = acceptance_grid(ctx.rng);
    const auto& net = ns.net;
    const std::size_t I = net.species(), R = net.reaction_count();
    const int d = grid.dim();
    std::vector<PointFn> phi;
    std::vector<std::vector<PointFn>> grad;
    for (std::size_t i = 0; i < I; ++i) {
      auto t = random_trig(ctx.rng, d);
      phi.push_back(t.value);
      grad.push_back(t.grad);
    }
    const auto c = random_like(ctx.rng, make_cell_field(grid, I), 3.0);
    const auto F = random_like(ctx.rng, make_edge_field(grid, I), 3.0);
    const auto J = random_like(ctx.rng, make_react_field(grid, R), 3.0);
    const auto pphi = discretize_fields(grid, phi, 8);

    const auto rho = embed_pc(grid, c);
    const auto f = embed_flux_diff(grid, F);
    const auto j = embed_flux_react(grid, J);
    double lhs[3] = {0, 0, 0};
    for (std::size_t i = 0; i < I; ++i) {
      lhs[0] += integrate(grid, [&](std::span<const double> x) { return rho.value(i, x) * phi[i](x); }, 8);
      for (int e = 0; e < d; ++e)
        lhs[1] += integrate(grid, [&](std::span<const double> x) { return f.value(i * d + e, x) * grad[i][e](x); }, 8);
    }
    for (std::size_t r = 0; r < R; ++r)
      lhs[2] += integrate(
          grid,
          [&](std::span<const double> x) {
            double s = 0.0;
            for (std::size_t i = 0; i < I; ++i) s += net.gamma(r, i) * phi[i](x);
            return j.value(r, x) * s;
          },
          8);
    const double rhs[3] = {pairing(grid, c, pphi), pairing(grid, F, disc_gradient(grid, pphi)),
                           pairing(grid, J, gamma_lift(net, pphi))};
    for (int id = 0; id < 3; ++id) {
      const double v = std::fabs(lhs[id] - rhs[id]) / (1.0 + std::fabs(rhs[id]));
      ctx.check(v <= 1e-10, v, [&] {
        return fmt::format("{} d={} N={} identity {}: continuum {} lattice {}", ns.label, d, grid.n(), id + 1,
                           g(lhs[id]), g(rhs[id]));
      });
    }
  }
}

std::array<double, 3> random_point(Rng& rng, int d) {
  std::array<double, 3> x{0, 0, 0};
  for (int l = 0; l < d; ++l) x[l] = uniform(rng, 0.0, 1.0);
  return x;
}

void embed_partition_of_unity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto grid = acceptance_grid(ctx.rng);
    const int d = grid.dim();
    const auto x = random_point(ctx.rng, d);
    const std::span<const double> xs(x.data(), d);
    double sum = 0.0, lo = 0.0, hi = 0.0;
    for (std::size_t k = 0; k < grid.cells(); ++k) {
      const double h = hat_h(grid, k, xs);
      sum += h;
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
    // f^N_m on the base cell, evaluated at x scaled into Q^N_0
    std::array<double, 3> y{0, 0, 0};
    for (int l = 0; l < d; ++l) y[l] = x[l] / grid.n();
    double fsum = 0.0;
    for (int m = 0; m < (1 << d); ++m) {
      std::array<int, 3> mm{0, 0, 0};
      for (int l = 0; l < d; ++l) mm[l] = (m >> l) & 1;
      fsum += hat_f(grid, std::span<const int>(mm.data(), d), std::span<const double>(y.data(), d));
    }
    const double v = std::max({std::fabs(sum - 1.0), std::fabs(fsum - 1.0), -lo, hi - 1.0});
    ctx.check(v <= 1e-14, v, [&] {
      return fmt::format("d={} N={} x=({}, {}) sum h={} sum f={}", d, grid.n(), g(x[0]), g(x[1]), g(sum), g(fsum));
    });
  }
}

void embed_hat_integral(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    const auto grid = acceptance_grid(ctx.rng);
    const auto k = static_cast<std::size_t>(uniform_int(ctx.rng, 0, static_cast<int>(grid.cells()) - 1));
    const double integral = integrate(grid, [&](std::span<const double> x) { return hat_h(grid, k, x); }, 4);
    const double v = std::fabs(integral - grid.cell_volume());
    ctx.check(v <= 1e-12, v, [&] { return fmt::format("d={} N={} k={} integral {}", grid.dim(), grid.n(), k, g(integral)); });
  }
}

void embed_hat_lower_bound(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto grid = acceptance_grid(ctx.rng);
    const int d = grid.dim(), N = grid.n();
    const auto k = static_cast<std::size_t>(uniform_int(ctx.rng, 0, static_cast<int>(grid.cells()) - 1));
    // points of the cell centred at the node k/N, i.e. Q^N_k shifted by half a cell
    const auto node = grid.coords(k);
    std::array<double, 3> x{0, 0, 0};
    for (int l = 0; l < d; ++l) {
      const double t = (node[l] + uniform(ctx.rng, -0.5, 0.5)) / N;
      x[l] = t - std::floor(t);
    }
    const double h = hat_h(grid, k, std::span<const double>(x.data(), d));
    const double bound = std::ldexp(1.0, -d);
    ctx.check(h >= bound - 1e-12, rel(bound - h, bound),
              [&] { return fmt::format("d={} N={} k={} x=({}, {}) h={}", d, N, k, g(x[0]), g(x[1]), g(h)); });
  }
}

void embed_pc_integral(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    const auto grid = acceptance_grid(ctx.rng);
    auto c = random_like(ctx.rng, make_cell_field(grid, 2), 5.0);
    const auto rho = embed_pc(grid, c);
    double total = 0.0;
    for (std::size_t i = 0; i < 2; ++i) total += rho.l1(i);
    const double norm = l1_norm(grid, c);
    const double v = std::fabs(total - norm) / (1.0 + norm);
    ctx.check(v <= 1e-15, v, [&] { return fmt::format("d={} N={} int |iota c|={} |c|_1={}", grid.dim(), grid.n(), g(total), g(norm)); });
  }
}

void embed_ce_trajectory(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      auto ts = random_trajectory(ctx.rng);
      const std::size_t I = ts.sys.species();
      const double lattice = ce_residual(ts.sys, ts.traj);
      for (int t = 0; t < 5; ++t) {
        std::vector<PointFn> phi;
        std::vector<std::vector<PointFn>> grad;
        double amp = 0.0;
        for (std::size_t i = 0; i < I; ++i) {
          std::array<double, 3> k{static_cast<double>(t % 3 + 1), 0, 0};
          const double p = uniform(ctx.rng, 0.0, 2.0 * kPi), a = uniform(ctx.rng, 0.5, 1.5);
          amp = std::max(amp, a);
          phi.push_back([=](std::span<const double> x) { return a * std::cos(2 * kPi * k[0] * x[0] + p); });
          grad.push_back({[=](std::span<const double> x) { return -2 * kPi * k[0] * a * std::sin(2 * kPi * k[0] * x[0] + p); }});
        }
        const double defect = embedded_ce_defect(ts.sys, ts.traj, phi, grad);
        // the embedded defect is the lattice defect paired with the cell averages of phi
        const double tol = amp * lattice * (1.0 + 1e-6) + 1e-10;
        ctx.check(defect <= tol, rel(defect - tol, tol),
                  [&] { return fmt::format("{} test function {}: defect {} > {}", ts.label, t, g(defect), g(tol)); });
      }
    });
  }
}

// ---------------------------------------------------------------------------
// continuum

void cont_energy_identity(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ss = random_system(ctx.rng, false);
    const auto c = random_state(ctx.rng, ss.sys, 2.0);
    const double disc = energy(ss.sys, c);
    const double cont = cont_energy(embed_pc(ss.sys.grid, c), ss.sys.network.omega());
    const double v = std::fabs(disc - cont) / (1.0 + disc);
    ctx.check(v <= 1e-12, v, [&] { return fmt::format("{} E_N={} E(iota c)={}", ss.label, g(disc), g(cont)); });
  }
}

void cont_energy_monotone(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      auto ts = random_trajectory(ctx.rng, false);
      double prev = std::numeric_limits<double>::infinity();
      for (const auto& s : ts.traj.samples) {
        const double e = cont_energy(embed_pc(ts.sys.grid, s.c), ts.sys.network.omega());
        ctx.check(e <= prev + 1e-13 * (1 + std::fabs(e)), rel(e - prev, e),
                  [&] { return fmt::format("{} energy rises to {} at t={}", ts.label, g(e), g(s.t)); });
        prev = e;
      }
    });
  }
}

void cont_young_fenchel(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.count; ++n) {
    auto ns = random_network(ctx.rng, false);
    const auto& net = ns.net;
    const int d = uniform_int(ctx.rng, 1, 2);
    const TorusGrid grid(d, 2);
    const std::size_t I = net.species(), R = net.reaction_count(), K = grid.cells();
    auto vals = [&](std::size_t rows, double lo, double hi) {
      std::vector<double> v(rows * K);
      for (auto& x : v) x = uniform(ctx.rng, lo, hi);
      return v;
    };
    const auto rho = PiecewiseField::constant(grid, I, vals(I, 0.1, 3.0));
    const auto f = PiecewiseField::constant(grid, I * d, vals(I * d, -3.0, 3.0));
    const auto j = PiecewiseField::constant(grid, R, vals(R, -3.0, 3.0));
    const auto xi = PiecewiseField::constant(grid, I * d, vals(I * d, -2.0, 2.0));
    const auto zeta = PiecewiseField::constant(grid, R, vals(R, -3.0, 3.0));
    double pair = 0.0;
    for (std::size_t r = 0; r < I * static_cast<std::size_t>(d); ++r)
      for (std::size_t k = 0; k < K; ++k) pair += xi.data()[r * K + k] * f.data()[r * K + k] * grid.cell_volume();
    for (std::size_t r = 0; r < R; ++r)
      for (std::size_t k = 0; k < K; ++k) pair += zeta.data()[r * K + k] * j.data()[r * K + k] * grid.cell_volume();
    const double sum = cont_dual_dissipation(rho, xi, zeta, net).total() + cont_primal_dissipation(rho, f, j, net).total();
    const double v = rel(pair - sum, sum);
    ctx.check(pair <= sum + 1e-10 * (1 + sum), v,
              [&] { return fmt::format("{} d={} pairing={} R*+R={}", ns.label, d, g(pair), g(sum)); });
  }
}

void cont_ladder_trend(Ctx& ctx) {
  if (ctx.count == 0) return;
  ctx.guarded([&] {
    StudySetup setup;
    setup.network = ReactionNetwork(3, {{{1, 1, 0}, {0, 0, 1}, 1.0}}, {1.0, 1.0, 1.0},
                                    ReferenceDensity(std::vector<double>{1.0, 1.0, 1.0}));
    setup.levels = {8, 16, 32};
    setup.initial = {[](std::span<const double> x) { return 1.0 + 0.5 * std::cos(2 * kPi * x[0]); },
                     [](std::span<const double> x) { return 1.0 + 0.3 * std::sin(2 * kPi * x[0]); },
                     [](std::span<const double> x) { return 0.5 + 0.2 * std::cos(4 * kPi * x[0]); }};
    setup.T = 0.05;
    setup.sample_dt = 1e-3;
    const auto rep = convergence_study(setup);
    const auto& rows = rep.rows;
    double lo = rows[0].dissipation, hi = rows[0].dissipation;
    for (const auto& r : rows) {
      lo = std::min(lo, r.dissipation);
      hi = std::max(hi, r.dissipation);
    }
    const double var1 = std::fabs(rows[1].dissipation - rows[0].dissipation);
    const double var2 = std::fabs(rows[2].dissipation - rows[1].dissipation);
    ctx.check(std::isfinite(hi) && lo > 0.0 && hi <= 2.0 * lo && var2 < var1, 0.0, [&] {
      return fmt::format("dissipation over levels {} {} {}", g(rows[0].dissipation), g(rows[1].dissipation),
                         g(rows[2].dissipation));
    });
    ctx.check(rep.energy_gaps_monotone(1e-12), 0.0, [] { return std::string("energy gaps to the finest level do not shrink"); });
    ctx.check(rep.cauchy_monotone(1e-12), 0.0, [] { return std::string("Cauchy differences do not decrease"); });
  });
}

// ---------------------------------------------------------------------------
// cli

void cli_determinism(Ctx& ctx) {
  for (std::size_t n = 0; n < ctx.trajectories(); ++n) {
    ctx.guarded([&] {
      const std::uint64_t seed = ctx.rng();
      auto run = [seed] {
        Rng rng(seed);
        auto ts = random_trajectory(rng);
        std::ostringstream out;
        write_functionals_csv(ts.traj, out);
        return std::pair{out.str(), ts.label};
      };
      const auto [a, label] = run();
      const auto [b, unused] = run();
      ctx.check(a == b, 0.0, [&] { return fmt::format("{}: functionals CSV differs between identical runs", label); });
    });
  }
}

struct Suite {
  std::string_view name;
  void (*body)(Ctx&);
};

constexpr Suite kSuites[] = {
    {"cosh.identity", cosh_identity},
    {"cosh.bounds-lower", cosh_bounds_lower},
    {"cosh.bounds-upper", cosh_bounds_upper},
    {"cosh.derivative-bounds", cosh_derivative_bounds},
    {"cosh.perspective-w", cosh_perspective_w},
    {"cosh.perspective-lambda", cosh_perspective_lambda},
    {"cosh.magical", cosh_magical},
    {"cosh.convexity", cosh_convexity},
    {"network.kappa-symmetry", network_kappa_symmetry},
    {"network.conservation-exact", network_conservation},
    {"network.monomial", network_monomial},
    {"grid.gradient-lines", grid_gradient_lines},
    {"grid.adjoint-mass", grid_adjoint_mass},
    {"grid.adjoint-conservation", grid_adjoint_conservation},
    {"discrete_gs.dual-convexity", dgs_dual_convexity},
    {"discrete_gs.young-fenchel", dgs_young_fenchel},
    {"discrete_gs.slope-identity", dgs_slope_identity},
    {"discrete_gs.fenchel", dgs_fenchel},
    {"discrete_gs.energy-decay", dgs_energy_decay},
    {"discrete_gs.conservation", dgs_conservation},
    {"solver.stationarity", solver_stationarity},
    {"solver.serial-agreement", solver_serial_agreement},
    {"solver.rk4-order", solver_rk4_order},
    {"solver.edb-refinement", solver_edb_refinement},
    {"solver.bounding-box", solver_bounding_box},
    {"embedding.dualities", embed_dualities},
    {"embedding.partition-of-unity", embed_partition_of_unity},
    {"embedding.hat-integral", embed_hat_integral},
    {"embedding.hat-lower-bound", embed_hat_lower_bound},
    {"embedding.pc-integral", embed_pc_integral},
    {"embedding.ce-trajectory", embed_ce_trajectory},
    {"continuum.energy-identity", cont_energy_identity},
    {"continuum.energy-monotone", cont_energy_monotone},
    {"continuum.young-fenchel", cont_young_fenchel},
    {"continuum.ladder-trend", cont_ladder_trend},
    {"cli.determinism", cli_determinism},
};

std::uint64_t suite_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (char ch : name) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ull;
  return seed ^ h;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : kSuites) out.emplace_back(s.name);
  return out;
}

std::vector<SuiteResult> run(const Options& opts) {
  std::vector<SuiteResult> out;
  for (const auto& s : kSuites) {
    if (!s.name.starts_with(opts.filter)) continue;
    SuiteResult res;
    res.name = s.name;
    if (opts.count > 0) {
      const auto t0 = std::chrono::steady_clock::now();
      Ctx ctx(Rng(suite_seed(opts.seed, s.name)), opts.count, res);
      s.body(ctx);
      res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace edpflow::props
