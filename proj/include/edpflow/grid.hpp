#pragma once

// Periodic lattice Z^d_N, dense lattice arrays and the discrete gradient structure
// operators (forward gradient, stoichiometric lift and their joint adjoint).

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace edpflow {

class ReactionNetwork;

/// The torus lattice (Z/NZ)^d, cells stored row-major (last coordinate fastest).
class TorusGrid {
 public:
  static constexpr int kMaxDim = 3;

  TorusGrid() = default;
  /// Throws ConfigError unless 1 <= dim <= 3 and n >= 1.
  TorusGrid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  std::size_t cells() const noexcept { return cells_; }
  /// Cell volume 1/N^d, the weight of the lattice pairings.
  double cell_volume() const noexcept { return cell_volume_; }

  /// Periodic neighbour k + e_axis.
  std::size_t forward(std::size_t k, int axis) const noexcept { return fwd_[axis][k]; }
  /// Periodic neighbour k - e_axis.
  std::size_t backward(std::size_t k, int axis) const noexcept { return bwd_[axis][k]; }

  std::array<int, kMaxDim> coords(std::size_t k) const noexcept;
  std::size_t index(std::span<const int> coords) const noexcept;

  /// Containing cell of x (coordinates reduced mod 1, half-open cells) and the
  /// local coordinates tau = N x - floor(N x) in [0,1)^d.
  std::size_t locate(std::span<const double> x, std::span<double> tau) const noexcept;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_;
  }

 private:
  int dim_ = 0;
  int n_ = 0;
  std::size_t cells_ = 0;
  double cell_volume_ = 0.0;
  std::array<std::vector<std::uint32_t>, kMaxDim> fwd_, bwd_;
};

struct CellTag {};
struct EdgeTag {};
struct ReactTag {};

/// Dense array over (rows x cells x dirs); rows are species or reactions.
/// The tag keeps concentrations, edge fluxes and reaction fluxes apart.
template <class Tag>
class LatticeArray {
 public:
  LatticeArray() = default;
  LatticeArray(std::size_t rows, std::size_t cells, std::size_t dirs = 1, double fill = 0.0)
      : rows_(rows), cells_(cells), dirs_(dirs), data_(rows * cells * dirs, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cells() const noexcept { return cells_; }
  std::size_t dirs() const noexcept { return dirs_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t row, std::size_t k, std::size_t e = 0) noexcept {
    return data_[(row * cells_ + k) * dirs_ + e];
  }
  double operator()(std::size_t row, std::size_t k, std::size_t e = 0) const noexcept {
    return data_[(row * cells_ + k) * dirs_ + e];
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }
  std::span<const double> row(std::size_t r) const noexcept {
    return std::span<const double>(data_).subspan(r * cells_ * dirs_, cells_ * dirs_);
  }

  bool same_shape(const LatticeArray& o) const noexcept {
    return rows_ == o.rows_ && cells_ == o.cells_ && dirs_ == o.dirs_;
  }

  LatticeArray& operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend bool operator==(const LatticeArray&, const LatticeArray&) = default;

 private:
  std::size_t rows_ = 0, cells_ = 0, dirs_ = 0;
  std::vector<double> data_;
};

/// Concentrations c and potentials phi: species x cells.
using CellField = LatticeArray<CellTag>;
/// Diffusive fluxes F and forces xi: species x cells x forward directions.
using EdgeField = LatticeArray<EdgeTag>;
/// Reactive fluxes J and forces zeta: reactions x cells.
using ReactField = LatticeArray<ReactTag>;

CellField make_cell_field(const TorusGrid& grid, std::size_t species, double fill = 0.0);
EdgeField make_edge_field(const TorusGrid& grid, std::size_t species, double fill = 0.0);
ReactField make_react_field(const TorusGrid& grid, std::size_t reactions, double fill = 0.0);

/// Forward difference phi_{k+e} - phi_k with periodic wrap.
EdgeField disc_gradient(const TorusGrid& grid, const CellField& phi);

/// (Gamma phi)_{r,k} = gamma^r . phi_k
ReactField gamma_lift(const ReactionNetwork& net, const CellField& phi);

/// Adjoint of (disc_gradient, gamma_lift) in the 1/N^d-weighted pairings:
/// -div F + Gamma^T J with (-div F)_{i,k} = sum_e (F_{i,k-e,e} - F_{i,k,e}).
CellField ce_adjoint(const TorusGrid& grid, const ReactionNetwork& net, const EdgeField& flux_diff,
                     const ReactField& flux_react);

/// Weighted pairing (1/N^d) sum a*b over matching arrays.
template <class Tag>
double pairing(const TorusGrid& grid, const LatticeArray<Tag>& a, const LatticeArray<Tag>& b);

/// Tensor Gauss-Legendre rule on [0,1)^d cells.
struct GaussRule {
  std::vector<double> nodes;    // on [0,1]
  std::vector<double> weights;  // sum to 1
};
/// Gauss-Legendre rule with `order` nodes (1..8) mapped to [0,1].
const GaussRule& gauss_rule(int order);

using PointFn = std::function<double(std::span<const double>)>;

/// Cell averages N^d * int_{Q_k} f dx by per-cell tensor Gauss quadrature (order 5 default).
std::vector<double> cell_averages(const TorusGrid& grid, const PointFn& f, int order = 5);

/// Integral of f over the torus with per-cell tensor Gauss quadrature on `grid`.
double integrate(const TorusGrid& grid, const PointFn& f, int order = 5);

/// Discretisation of continuous per-species fields into cell averages.
CellField discretize(const TorusGrid& grid, std::span<const PointFn> fields, int order = 5);

/// Discrete reference weights w^N = iota*_N omega; throws DomainError on a non-positive value.
CellField reference_weights(const ReactionNetwork& net, const TorusGrid& grid);

}  // namespace edpflow
