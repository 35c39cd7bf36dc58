#include "edpflow/serial/reference.hpp"

#include <cmath>
#include <limits>

#include "edpflow/cosh.hpp"

namespace edpflow::serial {

namespace {

double power_product(const CellField& c, const CellField& w, std::size_t k, const std::vector<double>& g,
                     double scale, bool ratio) {
  double p = 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] == 0.0) continue;
    const double base = ratio ? c(i, k) / w(i, k) : c(i, k);
    p *= std::pow(base, scale * g[i]);
  }
  return p;
}

std::vector<double> sum_of(const Reaction& rx) {
  std::vector<double> s(rx.alpha.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = rx.alpha[i] + rx.beta[i];
  return s;
}

}  // namespace

EdgeField disc_gradient(const TorusGrid& grid, const CellField& phi) {
  EdgeField out(phi.rows(), grid.cells(), static_cast<std::size_t>(grid.dim()));
  for (std::size_t i = 0; i < phi.rows(); ++i)
    for (std::size_t k = 0; k < grid.cells(); ++k)
      for (int e = 0; e < grid.dim(); ++e) out(i, k, e) = phi(i, grid.forward(k, e)) - phi(i, k);
  return out;
}

ReactField gamma_lift(const ReactionNetwork& net, const CellField& phi) {
  ReactField out(net.reaction_count(), phi.cells());
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    for (std::size_t k = 0; k < phi.cells(); ++k)
      for (std::size_t i = 0; i < net.species(); ++i) out(r, k) += net.gamma(r, i) * phi(i, k);
  return out;
}

CellField ce_adjoint(const TorusGrid& grid, const ReactionNetwork& net, const EdgeField& flux_diff,
                     const ReactField& flux_react) {
  CellField out(net.species(), grid.cells());
  // scatter form: each edge flux leaves k and enters k+e
  for (std::size_t i = 0; i < net.species(); ++i)
    for (std::size_t k = 0; k < grid.cells(); ++k)
      for (int e = 0; e < grid.dim(); ++e) {
        out(i, k) -= flux_diff(i, k, e);
        out(i, grid.forward(k, e)) += flux_diff(i, k, e);
      }
  for (std::size_t r = 0; r < net.reaction_count(); ++r)
    for (std::size_t k = 0; k < grid.cells(); ++k)
      for (std::size_t i = 0; i < net.species(); ++i) out(i, k) += net.gamma(r, i) * flux_react(r, k);
  return out;
}

Fluxes constitutive_fluxes(const DiscreteSystem& sys, const CellField& c) {
  const auto& g = sys.grid;
  const auto& w = sys.weights;
  const double n2 = double(g.n()) * g.n();
  Fluxes out{EdgeField(sys.species(), g.cells(), g.dim()), ReactField(sys.reactions(), g.cells())};
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < g.cells(); ++k)
      for (int e = 0; e < g.dim(); ++e) {
        const std::size_t kp = g.forward(k, e);
        out.diff(i, k, e) =
            sys.network.diffusion()[i] * n2 * std::sqrt(w(i, k) * w(i, kp)) * (c(i, k) / w(i, k) - c(i, kp) / w(i, kp));
      }
  for (std::size_t r = 0; r < sys.reactions(); ++r) {
    const auto& rx = sys.network.reaction(r);
    const auto s = sum_of(rx);
    for (std::size_t k = 0; k < g.cells(); ++k)
      out.react(r, k) = rx.kappa * power_product(w, w, k, s, 0.5, false) *
                        (power_product(c, w, k, rx.beta, 1.0, true) - power_product(c, w, k, rx.alpha, 1.0, true));
  }
  return out;
}

CellField rhs(const DiscreteSystem& sys, const CellField& c) {
  const auto& g = sys.grid;
  const auto& w = sys.weights;
  const double n2 = double(g.n()) * g.n();
  CellField out(sys.species(), g.cells());
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < g.cells(); ++k) {
      const double uk = c(i, k) / w(i, k);
      double v = 0.0;
      for (int e = 0; e < g.dim(); ++e) {
        const std::size_t kp = g.forward(k, e);
        const std::size_t km = g.backward(k, e);
        v += std::sqrt(w(i, kp) * w(i, k)) * (c(i, kp) / w(i, kp) - uk);
        v += std::sqrt(w(i, km) * w(i, k)) * (c(i, km) / w(i, km) - uk);
      }
      out(i, k) = sys.network.diffusion()[i] * n2 * v;
    }
  for (std::size_t r = 0; r < sys.reactions(); ++r) {
    const auto& rx = sys.network.reaction(r);
    const auto s = sum_of(rx);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      const double j = rx.kappa * power_product(w, w, k, s, 0.5, false) *
                       (power_product(c, w, k, rx.beta, 1.0, true) - power_product(c, w, k, rx.alpha, 1.0, true));
      for (std::size_t i = 0; i < sys.species(); ++i) out(i, k) += (rx.alpha[i] - rx.beta[i]) * j;
    }
  }
  return out;
}

double energy(const DiscreteSystem& sys, const CellField& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < sys.grid.cells(); ++k) {
      const double w = sys.weights(i, k);
      const double r = c(i, k) / w;
      s += (r == 0.0 ? 1.0 : r * std::log(r) - r + 1.0) * w;
    }
  return s / static_cast<double>(sys.grid.cells());
}

SlopeParts slope(const DiscreteSystem& sys, const CellField& c) {
  const auto& g = sys.grid;
  const auto& w = sys.weights;
  const double n2 = double(g.n()) * g.n();
  SlopeParts out;
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < g.cells(); ++k)
      for (int e = 0; e < g.dim(); ++e) {
        const std::size_t kp = g.forward(k, e);
        const double dq = std::sqrt(c(i, kp) / w(i, kp)) - std::sqrt(c(i, k) / w(i, k));
        out.diff += 2.0 * sys.network.diffusion()[i] * n2 * std::sqrt(w(i, kp) * w(i, k)) * dq * dq;
      }
  for (std::size_t r = 0; r < sys.reactions(); ++r) {
    const auto& rx = sys.network.reaction(r);
    const auto s = sum_of(rx);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      const double dq = power_product(c, w, k, rx.alpha, 0.5, true) - power_product(c, w, k, rx.beta, 0.5, true);
      out.react += 2.0 * rx.kappa * power_product(w, w, k, s, 0.5, false) * dq * dq;
    }
  }
  out.diff /= static_cast<double>(g.cells());
  out.react /= static_cast<double>(g.cells());
  return out;
}

DissipationParts dual_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& xi,
                                  const ReactField& zeta) {
  const auto& g = sys.grid;
  const double n2 = double(g.n()) * g.n();
  DissipationParts out;
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < g.cells(); ++k)
      for (int e = 0; e < g.dim(); ++e) {
        const double weight = n2 * sys.network.diffusion()[i] * std::sqrt(c(i, k) * c(i, g.forward(k, e)));
        if (weight > 0.0) out.diff += weight * (4.0 * std::cosh(0.5 * xi(i, k, e)) - 4.0);
      }
  for (std::size_t r = 0; r < sys.reactions(); ++r) {
    const auto& rx = sys.network.reaction(r);
    const auto s = sum_of(rx);
    for (std::size_t k = 0; k < g.cells(); ++k) {
      const double weight = rx.kappa * power_product(c, c, k, s, 0.5, false);
      if (weight > 0.0) out.react += weight * (4.0 * std::cosh(0.5 * zeta(r, k)) - 4.0);
    }
  }
  out.diff /= static_cast<double>(g.cells());
  out.react /= static_cast<double>(g.cells());
  return out;
}

DissipationParts primal_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                    const ReactField& flux_react) {
  const auto& g = sys.grid;
  const double n2 = double(g.n()) * g.n();
  DissipationParts out;
  for (std::size_t i = 0; i < sys.species(); ++i)
    for (std::size_t k = 0; k < g.cells(); ++k)
      for (int e = 0; e < g.dim(); ++e) {
        const double weight = n2 * sys.network.diffusion()[i] * std::sqrt(c(i, k) * c(i, g.forward(k, e)));
        out.diff += cosh::perspective(flux_diff(i, k, e), weight);
      }
  for (std::size_t r = 0; r < sys.reactions(); ++r) {
    const auto& rx = sys.network.reaction(r);
    const auto s = sum_of(rx);
    for (std::size_t k = 0; k < g.cells(); ++k)
      out.react += cosh::perspective(flux_react(r, k), rx.kappa * power_product(c, c, k, s, 0.5, false));
  }
  out.diff /= static_cast<double>(g.cells());
  out.react /= static_cast<double>(g.cells());
  return out;
}

}  // namespace edpflow::serial
