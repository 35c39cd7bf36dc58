#include "edpflow/discrete_gs.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "edpflow/cosh.hpp"
#include "edpflow/errors.hpp"
#include "edpflow/mutation.hpp"
#include "edpflow/parallel.hpp"
#include "kernels.hpp"

namespace edpflow {

namespace mutation {

namespace {
std::atomic<Kind> active{Kind::none};
}  // namespace

void set(Kind kind) noexcept { active.store(kind); }
Kind current() noexcept { return active.load(std::memory_order_relaxed); }

Kind parse(std::string_view name) {
  if (name == "none") return Kind::none;
  if (name == "flux-sign") return Kind::flux_sign;
  throw ConfigError("--mutate", "unknown mutation '" + std::string(name) + "' (expected none or flux-sign)");
}

}  // namespace mutation

using kernels::cell_power;
using kernels::exponents;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_non_negative(const CellField& c, const char* who) {
  for (std::size_t m = 0; m < c.size(); ++m) {
    if (!(c.flat()[m] >= 0.0)) throw DomainError(std::string(who) + ": concentrations must be non-negative");
  }
}

double n_squared(const TorusGrid& grid) { return static_cast<double>(grid.n()) * grid.n(); }

}  // namespace

DiscreteSystem make_system(ReactionNetwork network, TorusGrid grid) {
  CellField w = reference_weights(network, grid);
  return DiscreteSystem{std::move(network), std::move(grid), std::move(w)};
}

double energy(const DiscreteSystem& sys, const CellField& c) {
  require_non_negative(c, "energy");
  const std::size_t I = sys.species();
  const auto& w = sys.weights;
  return sys.grid.cell_volume() * parallel::block_sum(sys.grid.cells(), [&](std::size_t k) {
           double s = 0.0;
           for (std::size_t i = 0; i < I; ++i) s += cosh::boltzmann_lambda(c(i, k) / w(i, k)) * w(i, k);
           return s;
         });
}

DissipationParts dual_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& xi,
                                  const ReactField& zeta) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const std::size_t I = sys.species();
  const int d = grid.dim();
  const double n2 = n_squared(grid);
  const auto ex = exponents(net);

  DissipationParts out;
  out.diff = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
               double s = 0.0;
               for (std::size_t i = 0; i < I; ++i) {
                 for (int e = 0; e < d; ++e) {
                   const double weight = n2 * net.diffusion()[i] * std::sqrt(c(i, k) * c(i, grid.forward(k, e)));
                   if (weight == 0.0) continue;
                   s += weight * cosh::cstar(xi(i, k, e));
                 }
               }
               return s;
             });
  out.react = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
                double s = 0.0;
                for (std::size_t r = 0; r < net.reaction_count(); ++r) {
                  const double weight = net.reaction(r).kappa * cell_power(c, nullptr, k, ex.half_sum[r]);
                  if (weight == 0.0) continue;
                  s += weight * cosh::cstar(zeta(r, k));
                }
                return s;
              });
  return out;
}

DissipationParts primal_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                    const ReactField& flux_react) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const std::size_t I = sys.species();
  const int d = grid.dim();
  const double n2 = n_squared(grid);
  const auto ex = exponents(net);

  DissipationParts out;
  out.diff = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
               double s = 0.0;
               for (std::size_t i = 0; i < I; ++i) {
                 for (int e = 0; e < d; ++e) {
                   const double weight = n2 * net.diffusion()[i] * std::sqrt(c(i, k) * c(i, grid.forward(k, e)));
                   const double f = flux_diff(i, k, e);
                   if (weight == 0.0) {
                     if (f != 0.0) return kInf;
                     continue;
                   }
                   s += cosh::perspective(f, weight);
                 }
               }
               return s;
             });
  out.react = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
                double s = 0.0;
                for (std::size_t r = 0; r < net.reaction_count(); ++r) {
                  const double weight = net.reaction(r).kappa * cell_power(c, nullptr, k, ex.half_sum[r]);
                  const double j = flux_react(r, k);
                  if (weight == 0.0) {
                    if (j != 0.0) return kInf;
                    continue;
                  }
                  s += cosh::perspective(j, weight);
                }
                return s;
              });
  return out;
}

SlopeParts slope(const DiscreteSystem& sys, const CellField& c) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const auto& w = sys.weights;
  const std::size_t I = sys.species();
  const int d = grid.dim();
  const double n2 = n_squared(grid);
  const auto ex = exponents(net);

  SlopeParts out;
  out.diff = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
               double s = 0.0;
               for (std::size_t i = 0; i < I; ++i) {
                 const double uk = std::sqrt(c(i, k) / w(i, k));
                 for (int e = 0; e < d; ++e) {
                   const std::size_t kp = grid.forward(k, e);
                   const double diff = std::sqrt(c(i, kp) / w(i, kp)) - uk;
                   s += 2.0 * net.diffusion()[i] * n2 * std::sqrt(w(i, kp) * w(i, k)) * diff * diff;
                 }
               }
               return s;
             });
  out.react = grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) {
                double s = 0.0;
                for (std::size_t r = 0; r < net.reaction_count(); ++r) {
                  const double diff = cell_power(c, &w, k, ex.half_alpha[r]) - cell_power(c, &w, k, ex.half_beta[r]);
                  s += 2.0 * net.reaction(r).kappa * cell_power(w, nullptr, k, ex.half_sum[r]) * diff * diff;
                }
                return s;
              });
  return out;
}

Fluxes constitutive_fluxes(const DiscreteSystem& sys, const CellField& c) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const auto& w = sys.weights;
  const std::size_t I = sys.species();
  const std::size_t R = sys.reactions();
  const int d = grid.dim();
  const double n2 = n_squared(grid);
  const auto ex = exponents(net);

  Fluxes out{make_edge_field(grid, I), make_react_field(grid, R)};
  parallel::for_each_index(grid.cells(), [&](std::size_t k) {
    for (std::size_t i = 0; i < I; ++i) {
      const double dn2 = net.diffusion()[i] * n2;
      for (int e = 0; e < d; ++e) out.diff(i, k, e) = kernels::edge_flux(dn2, c, w, i, k, grid.forward(k, e));
    }
    for (std::size_t r = 0; r < R; ++r) out.react(r, k) = kernels::reaction_flux(net.reaction(r).kappa, ex, r, c, w, k);
  });
  if (mutation::current() == mutation::Kind::flux_sign) {
    out.diff *= -1.0;
    out.react *= -1.0;
  }
  return out;
}

double b_rate(const DiscreteSystem& sys, const CellField& c, const CellField& v) {
  const std::size_t I = sys.species();
  const auto& w = sys.weights;
  return sys.grid.cell_volume() * parallel::block_sum(sys.grid.cells(), [&](std::size_t k) {
           double s = 0.0;
           for (std::size_t i = 0; i < I; ++i) s += cosh::b_pairing(c(i, k) / w(i, k), v(i, k));
           return s;
         });
}

double fenchel_gap(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                   const ReactField& flux_react) {
  require_non_negative(c, "fenchel_gap");
  const CellField v = ce_adjoint(sys.grid, sys.network, flux_diff, flux_react);
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t k = 0; k < c.cells(); ++k) {
      if (c(i, k) == 0.0 && v(i, k) != 0.0)
        throw DomainError("fenchel_gap: nonzero rate at vanishing concentration (species " + std::to_string(i) +
                          ", cell " + std::to_string(k) + ")");
    }
  }
  const double r = primal_dissipation(sys, c, flux_diff, flux_react).total();
  const double s = slope(sys, c).total();
  return r + s + b_rate(sys, c, v);
}

FunctionalReport evaluate_functionals(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                      const ReactField& flux_react) {
  FunctionalReport rep;
  rep.energy = energy(sys, c);
  const auto r = primal_dissipation(sys, c, flux_diff, flux_react);
  const auto s = slope(sys, c);
  rep.r_diff = r.diff;
  rep.r_react = r.react;
  rep.s_diff = s.diff;
  rep.s_react = s.react;
  return rep;
}

double l1_norm(const TorusGrid& grid, const CellField& c) {
  const auto f = c.flat();
  return grid.cell_volume() * parallel::block_sum(f.size(), [&](std::size_t m) { return std::fabs(f[m]); });
}

}  // namespace edpflow
