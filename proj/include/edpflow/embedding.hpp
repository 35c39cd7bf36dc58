#pragma once

// Lattice -> torus embeddings: piecewise constant iota_N, the flux embeddings, the
// multilinear interpolant with its hat functions, rho-tilde and the scaled difference
// field nabla_N. Fields are immutable and evaluation is thread-safe.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "edpflow/discrete_gs.hpp"
#include "edpflow/solver.hpp"

namespace edpflow {

/// A scalar field per row on the torus [0,1)^d.
class SpatialField {
 public:
  virtual ~SpatialField() = default;
  virtual std::size_t rows() const = 0;
  virtual double value(std::size_t row, std::span<const double> x) const = 0;
  /// Partial derivative along `axis`; DomainError for fields without one.
  virtual double partial(std::size_t row, int axis, std::span<const double> x) const;
  /// Grid whose cells the field is smooth on; quadrature is done cell by cell on it.
  const TorusGrid& grid() const { return grid_; }

 protected:
  explicit SpatialField(TorusGrid grid) : grid_(std::move(grid)) {}
  TorusGrid grid_;
};

/// Fields determined exactly by lattice data on the cells of their grid.
class PiecewiseField final : public SpatialField {
 public:
  enum class Kind { constant_per_cell, multilinear, edge_profile };

  /// values: rows x cells, the value on Q_k.
  static PiecewiseField constant(const TorusGrid& grid, std::size_t rows, std::vector<double> values);
  /// nodes: rows x cells, the value at the corner k/N.
  static PiecewiseField multilinear(const TorusGrid& grid, std::size_t rows, std::vector<double> nodes);
  /// Embedded diffusive flux; row i*d + e is f_{i,e}.
  static PiecewiseField edge_profile(const TorusGrid& grid, const EdgeField& flux);

  Kind kind() const noexcept { return kind_; }
  std::size_t rows() const override { return rows_; }
  double value(std::size_t row, std::span<const double> x) const override;
  /// Partial derivative along `axis` (zero for constant fields, away from cell faces).
  double partial(std::size_t row, int axis, std::span<const double> x) const override;

  /// Exact integral over the torus.
  double integral(std::size_t row) const;
  /// Exact L1 norm over the torus.
  double l1(std::size_t row) const;

  std::span<const double> data() const noexcept { return data_; }

 private:
  PiecewiseField(TorusGrid grid, Kind kind, std::size_t rows, std::vector<double> data)
      : SpatialField(std::move(grid)), kind_(kind), rows_(rows), data_(std::move(data)) {}

  Kind kind_;
  std::size_t rows_;
  std::vector<double> data_;
};

/// rho-tilde_i = omega_i (iota-tilde_N U_i)^2 with U = sqrt(c/w).
class RhoTilde final : public SpatialField {
 public:
  RhoTilde(const DiscreteSystem& sys, const CellField& c);
  std::size_t rows() const override { return u_.rows(); }
  double value(std::size_t row, std::span<const double> x) const override;
  const PiecewiseField& u() const noexcept { return u_; }

 private:
  const ReferenceDensity* omega_;
  PiecewiseField u_;
};

/// Closed-form field from point functions, with optional partial derivatives
/// (gradient[row][axis]); `grid` only fixes the quadrature cells.
class FunctionField final : public SpatialField {
 public:
  FunctionField(const TorusGrid& grid, std::vector<PointFn> values, std::vector<std::vector<PointFn>> gradient = {})
      : SpatialField(grid), values_(std::move(values)), gradient_(std::move(gradient)) {}
  std::size_t rows() const override { return values_.size(); }
  double value(std::size_t row, std::span<const double> x) const override { return values_[row](x); }
  double partial(std::size_t row, int axis, std::span<const double> x) const override;

 private:
  std::vector<PointFn> values_;
  std::vector<std::vector<PointFn>> gradient_;
};

PiecewiseField embed_pc(const TorusGrid& grid, const CellField& c);
PiecewiseField embed_flux_diff(const TorusGrid& grid, const EdgeField& flux);
PiecewiseField embed_flux_react(const TorusGrid& grid, const ReactField& flux);
PiecewiseField embed_multilinear(const TorusGrid& grid, const CellField& u);

/// f^N_m(x): product of N x_l (m_l = 1) or 1 - N x_l (m_l = 0) on Q^N_0, zero elsewhere.
double hat_f(const TorusGrid& grid, std::span<const int> m, std::span<const double> x);
/// h^N_k(x): the tent of the multilinear interpolant attached to the node k/N.
double hat_h(const TorusGrid& grid, std::size_t k, std::span<const double> x);

/// Per cell and direction N (u_{k+e} - u_k); one row per species.
EdgeField nabla_n(const TorusGrid& grid, const CellField& u);

/// iota*_N phi per species (cell averages, Gauss order `order`).
CellField discretize_fields(const TorusGrid& grid, std::span<const PointFn> phi, int order = 8);

/// int |a_row - b_row| dx by per-cell Gauss quadrature on `grid` (order 5 per axis).
double l1_distance(const TorusGrid& grid, const SpatialField& a, std::size_t row_a, const SpatialField& b,
                   std::size_t row_b, int order = 5);

/// int f_row dx by per-cell Gauss quadrature on the field's grid.
double integrate_field(const SpatialField& f, std::size_t row, int order = 5);

/// Values of one row on the M^d uniform grid x = j/M (last axis fastest).
std::vector<double> sample_uniform(const SpatialField& f, std::size_t row, int m);

/// Distributional continuity-equation defect of the embedded trajectory against test
/// functions phi (one per species):
///   max over interior samples | d/dt <rho, phi> - <f, grad phi> - <j, Gamma phi> |,
/// time derivative by central differences, spatial pairings by quadrature.
/// grad_phi[i][l] is the l-th partial derivative of phi[i].
double embedded_ce_defect(const DiscreteSystem& sys, const Trajectory& traj, std::span<const PointFn> phi,
                          const std::vector<std::vector<PointFn>>& grad_phi);

}  // namespace edpflow
