#include "edpflow/cosh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "edpflow/errors.hpp"
#include "edpflow/grid.hpp"

namespace edpflow::cosh {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTinyWeight = 1e-300;
}  // namespace

double cstar(double sigma) {
  // 4cosh(x/2) - 4 = 8 sinh^2(x/4); no cancellation near 0, overflows to +inf.
  const double sh = std::sinh(0.25 * sigma);
  return 8.0 * sh * sh;
}

double cstar_prime(double sigma) { return 2.0 * std::sinh(0.5 * sigma); }

double c_of_s(double s) {
  const double a = std::fabs(s);
  if (std::isinf(a)) return kInf;
  // -2sqrt(s^2+4) + 4 = -2 s^2 / (sqrt(s^2+4) + 2); hypot keeps s^2 from overflowing.
  const double root = std::hypot(a, 2.0);
  return 2.0 * a * std::asinh(0.5 * a) - 2.0 * a * (a / (root + 2.0));
}

double c_prime(double s) { return 2.0 * std::asinh(0.5 * s); }

double perspective(double s, double w) {
  if (!(w >= 0.0)) throw DomainError("perspective: weight must be non-negative");
  if (w < kTinyWeight) return s == 0.0 ? 0.0 : kInf;
  const double ratio = s / w;
  if (std::isinf(ratio)) return kInf;
  return w * c_of_s(ratio);
}

double perspective_dw(double s, double w) {
  if (!(w > 0.0)) throw DomainError("perspective_dw: weight must be positive");
  const double r = std::fabs(s / w);
  if (std::isinf(r)) return -kInf;
  return -2.0 * r * (r / (std::hypot(r, 2.0) + 2.0));
}

double legendre_oracle(const ScalarFn& f, double s, const UniformGrid& grid) {
  if (grid.points == 0) throw DomainError("legendre_oracle: empty grid");
  if (grid.points == 1) return grid.lo * s - f(grid.lo);
  const double h = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  const auto n = static_cast<long>(grid.points);
  double best = -kInf;
#pragma omp parallel for reduction(max : best) schedule(static) if (n > 50000)
  for (long m = 0; m < n; ++m) {
    const double sigma = grid.lo + h * static_cast<double>(m);
    const double v = sigma * s - f(sigma);
    if (v > best) best = v;
  }
  return best;
}

double xi_superlinear(const ScalarFn& phi, const ScalarFn& psi, double s, const XiOptions& opts) {
  const double a0 = std::fabs(s);
  if (a0 == 0.0) return 0.0;  // w -> 0 limit, phi(0) = 0 and psi(0+) = 0
  auto objective = [&](double log_w) {
    const double w = std::exp(log_w);
    return w * phi(a0 / w) + psi(w);
  };

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = opts.log_w_min;
  double hi = opts.log_w_max;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  std::size_t iterations = 0;
  while (hi - lo > opts.bracket_tol) {
    if (!std::isfinite(f1) || !std::isfinite(f2) || ++iterations > 400) {
      std::ostringstream msg;
      msg << "xi_superlinear: bracketing failed for s=" << s << " (log w in [" << lo << ", " << hi
          << "], f=" << f1 << ", " << f2 << ", iterations=" << iterations << ")";
      throw NumericalError(msg.str());
    }
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double x_min = 0.5 * (lo + hi);
  const double edge = 1e3 * opts.bracket_tol;
  if (x_min - opts.log_w_min < edge || opts.log_w_max - x_min < edge) {
    std::ostringstream msg;
    msg << "xi_superlinear: minimiser for s=" << s << " hits the bracket boundary at log w=" << x_min
        << " (bracket [" << opts.log_w_min << ", " << opts.log_w_max << "])";
    throw NumericalError(msg.str());
  }
  return std::min({objective(x_min), f1, f2});
}

double boltzmann_lambda(double r) {
  if (!(r >= 0.0)) throw DomainError("boltzmann_lambda: argument must be non-negative");
  if (r == 0.0) return 1.0;
  if (std::isinf(r)) return r;
  return r * std::log(r) - r + 1.0;
}

double b_pairing(double a, double s) {
  if (!(a >= 0.0)) throw DomainError("b_pairing: first argument must be non-negative");
  if (a == 0.0) return 0.0;
  return s * std::log(a);
}

ScalarFn cstar_fn() { return {[](double x) { return cstar(x); }, [](double x) { return cstar_prime(x); }}; }

ScalarFn c_fn() { return {[](double x) { return c_of_s(x); }, [](double x) { return c_prime(x); }}; }

CounterexampleIntegrals counterexample_integrals(double eps, double gamma, double omega, int panels) {
  if (!(eps > 0.0) || !(eps < 0.5)) throw DomainError("counterexample_integrals: need 0 < eps < 1/2");
  // x = exp(-L), L = exp(v): dx = x L dv, and x cancels against the 1/x in s and w.
  const double v0 = std::log(std::log(2.0));
  const double v1 = std::log(-std::log(eps));
  const int m = std::max(1, static_cast<int>(std::ceil((v1 - v0) * panels)));
  const double h = (v1 - v0) / m;
  const auto& rule = gauss_rule(8);
  CounterexampleIntegrals out;
  for (int p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double v = v0 + (p + rule.nodes[q]) * h;
      const double L = std::exp(v);
      const double x = std::exp(-L);
      const double s = 1.0 / (x * std::pow(L, gamma));
      const double w = 1.0 / (x * std::pow(L, omega));
      const double jac = h * rule.weights[q] * x * L;
      out.c += jac * c_of_s(s);
      out.perspective += jac * perspective(s, w);
      out.boltzmann += jac * boltzmann_lambda(w);
    }
  }
  return out;
}

}  // namespace edpflow::cosh
