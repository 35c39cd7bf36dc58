#pragma once

// Straight-loop single-threaded versions of the lattice kernels. Written independently
// of the OpenMP kernels (no shared helpers beyond the scalar cosh functions) and kept
// as the comparison baseline for tests and the benchmark.

#include "edpflow/discrete_gs.hpp"

namespace edpflow::serial {

EdgeField disc_gradient(const TorusGrid& grid, const CellField& phi);
ReactField gamma_lift(const ReactionNetwork& net, const CellField& phi);
CellField ce_adjoint(const TorusGrid& grid, const ReactionNetwork& net, const EdgeField& flux_diff,
                     const ReactField& flux_react);

Fluxes constitutive_fluxes(const DiscreteSystem& sys, const CellField& c);
/// Reaction-diffusion right-hand side assembled directly from the stencil, not via fluxes.
CellField rhs(const DiscreteSystem& sys, const CellField& c);

double energy(const DiscreteSystem& sys, const CellField& c);
SlopeParts slope(const DiscreteSystem& sys, const CellField& c);
DissipationParts dual_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& xi,
                                  const ReactField& zeta);
DissipationParts primal_dissipation(const DiscreteSystem& sys, const CellField& c, const EdgeField& flux_diff,
                                    const ReactField& flux_react);

}  // namespace edpflow::serial
