#pragma once

// Per-cell kernels shared by the functionals and the fused right-hand side, so that
// rhs(c) and ce_adjoint(constitutive_fluxes(c)) agree bit for bit.

#include <cmath>
#include <vector>

#include "edpflow/grid.hpp"
#include "edpflow/network.hpp"

namespace edpflow::kernels {

// prod_i (c_{i,k} / w_{i,k})^expo_i; pass w = nullptr for plain c^expo.
inline double cell_power(const CellField& c, const CellField* w, std::size_t k, const std::vector<double>& expo) {
  double p = 1.0;
  for (std::size_t i = 0; i < expo.size(); ++i) {
    const double g = expo[i];
    if (g == 0.0) continue;
    const double x = w ? c(i, k) / (*w)(i, k) : c(i, k);
    p *= g == 1.0 ? x : std::pow(x, g);
  }
  return p;
}

struct ReactionExponents {
  std::vector<std::vector<double>> alpha, beta, half_sum, half_alpha, half_beta;
};

inline ReactionExponents exponents(const ReactionNetwork& net) {
  ReactionExponents ex;
  for (const auto& rx : net.reactions()) {
    ex.alpha.push_back(rx.alpha);
    ex.beta.push_back(rx.beta);
    std::vector<double> hs(rx.alpha.size()), ha(rx.alpha.size()), hb(rx.alpha.size());
    for (std::size_t i = 0; i < rx.alpha.size(); ++i) {
      hs[i] = 0.5 * (rx.alpha[i] + rx.beta[i]);
      ha[i] = 0.5 * rx.alpha[i];
      hb[i] = 0.5 * rx.beta[i];
    }
    ex.half_sum.push_back(std::move(hs));
    ex.half_alpha.push_back(std::move(ha));
    ex.half_beta.push_back(std::move(hb));
  }
  return ex;
}

/// F_{i,k,e} for the edge k -> kp.
inline double edge_flux(double delta_n2, const CellField& c, const CellField& w, std::size_t i, std::size_t k,
                        std::size_t kp) {
  return delta_n2 * std::sqrt(w(i, k) * w(i, kp)) * (c(i, k) / w(i, k) - c(i, kp) / w(i, kp));
}

/// J_{r,k}.
inline double reaction_flux(double kappa, const ReactionExponents& ex, std::size_t r, const CellField& c,
                            const CellField& w, std::size_t k) {
  return kappa * cell_power(w, nullptr, k, ex.half_sum[r]) *
         (cell_power(c, &w, k, ex.beta[r]) - cell_power(c, &w, k, ex.alpha[r]));
}

}  // namespace edpflow::kernels
