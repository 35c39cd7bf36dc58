#pragma once

// Scalar convex-duality kernel of the cosh gradient structure.
//
//   C*(sigma) = 4 cosh(sigma/2) - 4                  dual dissipation density
//   C(s)      = 2 s Arsinh(s/2) - 2 sqrt(s^2+4) + 4  its Legendre conjugate
//   C|(s|w)   = w C(s/w), with chi_0 at w = 0        perspective function
//
// Everything here is a pure function of its arguments.

#include <cstddef>
#include <functional>
#include <optional>

namespace edpflow::cosh {

/// Real function with an optional derivative, used by the Legendre oracle and Xi.
struct ScalarFn {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // may be empty

  double operator()(double x) const { return value(x); }
  bool has_derivative() const { return static_cast<bool>(derivative); }
};

/// Bounded uniform sample [lo, hi] with `points` nodes (points >= 1).
struct UniformGrid {
  double lo = -60.0;
  double hi = 60.0;
  std::size_t points = 200'000;
};

double cstar(double sigma);
double cstar_prime(double sigma);

double c_of_s(double s);
double c_prime(double s);

/// w*C(s/w) for w > 0; 0 for (s = 0, w = 0); +inf for s != 0 and w == 0 (or w < 1e-300).
double perspective(double s, double w);

/// d/dw of the perspective: 4 - 2 sqrt((s/w)^2 + 4). Throws DomainError for w <= 0.
double perspective_dw(double s, double w);

/// max over the grid of sigma*s - f(sigma); a lower bound on the conjugate f*(s).
double legendre_oracle(const ScalarFn& f, double s, const UniformGrid& grid = {});

/// Bracket used by xi_superlinear, in natural-log scale of w.
struct XiOptions {
  double log_w_min = -16.0;
  double log_w_max = 16.0;
  double bracket_tol = 1e-10;
};

/// inf_{w>0} ( w phi(s/w) + psi(w) ) by golden-section search in log w.
/// Throws NumericalError when the minimiser sits on the bracket boundary.
double xi_superlinear(const ScalarFn& phi, const ScalarFn& psi, double s, const XiOptions& opts = {});

/// r log r - r + 1, continuously extended by 1 at r = 0. Throws DomainError for r < 0.
double boltzmann_lambda(double r);

/// s log a for a > 0 and 0 for a = 0, regardless of s.
double b_pairing(double a, double s);

/// Integrals over (eps, 1/2] of C(s), C|(s|w) and lambda_B(w) for the superlinearity
/// counterexample s(x) = 1/(x ln(1/x)^gamma), w(x) = 1/(x ln(1/x)^omega).
struct CounterexampleIntegrals {
  double c = 0.0;
  double perspective = 0.0;
  double boltzmann = 0.0;
};

/// Composite Gauss-Legendre in log(ln(1/x)); `panels` per unit of log(ln(1/x)).
CounterexampleIntegrals counterexample_integrals(double eps, double gamma = 1.5, double omega = 2.5,
                                                 int panels = 400);

ScalarFn cstar_fn();
ScalarFn c_fn();

}  // namespace edpflow::cosh
