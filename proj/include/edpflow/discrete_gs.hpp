#pragma once

// Discrete gradient system on Z^d_N: relative entropy E_N, cosh-type dual dissipation
// R*_N, its primal R_N, the relaxed slope S_N, constitutive fluxes, the B-pairing
// and the energy-dissipation residuals used to certify EDB solutions.
//
// All sums carry the cell volume 1/N^d. The B-pairing carries it too, so that
// d/dt E_N(c) = B(c, dc/dt) holds along curves.

#include <span>
#include <utility>

#include "edpflow/grid.hpp"
#include "edpflow/network.hpp"

namespace edpflow {

/// Network + lattice + discrete reference weights w^N: everything the functionals need.
struct DiscreteSystem {
  ReactionNetwork network;
  TorusGrid grid;
  CellField weights;

  std::size_t species() const noexcept { return network.species(); }
  std::size_t reactions() const noexcept { return network.reaction_count(); }
};

/// Computes w^N = iota*_N omega for the grid.
DiscreteSystem make_system(ReactionNetwork network, TorusGrid grid);

struct FunctionalReport {
  double energy = 0.0;
  double r_diff = 0.0;
  double r_react = 0.0;
  double s_diff = 0.0;
  double s_react = 0.0;

  double dissipation_rate() const noexcept { return r_diff + r_react + s_diff + s_react; }
};

struct SlopeParts {
  double diff = 0.0;
  double react = 0.0;
  double total() const noexcept { return diff + react; }
};

struct DissipationParts {
  double diff = 0.0;
  double react = 0.0;
  double total() const noexcept { return diff + react; }
};

struct Fluxes {
  EdgeField diff;
  ReactField react;
};

/// (1/N^d) sum lambda_B(c/w) w. Throws DomainError on negative c.
double energy(const DiscreteSystem& sys, const CellField& c);

/// R*_N(c, xi, zeta).
DissipationParts dual_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& xi,
                                  const ReactField& zeta);

/// R_N(c, F, J) with the perspective of C; +inf for flux on a zero-weight edge or cell.
DissipationParts primal_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                    const ReactField& flux_react);

/// Relaxed slope S_N(c).
SlopeParts slope(const DiscreteSystem& sys, const CellField& c);

/// The unique fluxes realising equality in the chain-rule estimate:
///   F_{i,k,e} = delta_i N^2 sqrt(w_k w_{k+e}) (c_k/w_k - c_{k+e}/w_{k+e})
///   J_{r,k}   = kappa_r w_k^((alpha+beta)/2) ((c/w)^beta - (c/w)^alpha)
/// so that ce_adjoint(F, J) is the reaction-diffusion right-hand side.
Fluxes constitutive_fluxes(const DiscreteSystem& sys, const CellField& c);

/// B(c, v) = (1/N^d) sum b(c/w, v).
double b_rate(const DiscreteSystem& sys, const CellField& c, const CellField& v);

/// R_N + S_N + B(c, ce_adjoint(F, J)) >= 0, zero iff (F, J) are the constitutive fluxes.
/// Throws DomainError if ce_adjoint(F, J) is nonzero at a cell where c vanishes.
double fenchel_gap(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                   const ReactField& flux_react);

FunctionalReport evaluate_functionals(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                      const ReactField& flux_react);

/// (1/N^d)-weighted 1-norm.
double l1_norm(const TorusGrid& grid, const CellField& c);

}  // namespace edpflow
