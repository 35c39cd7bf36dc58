#include "edpflow/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "edpflow/errors.hpp"
#include "edpflow/parallel.hpp"

namespace edpflow {

namespace {

using Point = std::array<double, TorusGrid::kMaxDim>;

// int_0^1 |a + (b - a) t| dt
double affine_abs_integral(double a, double b) {
  if (a * b >= 0.0) return 0.5 * (std::fabs(a) + std::fabs(b));
  return 0.5 * (a * a + b * b) / (std::fabs(a) + std::fabs(b));
}

}  // namespace

double SpatialField::partial(std::size_t, int, std::span<const double>) const {
  throw DomainError("field has no derivative");
}

double FunctionField::partial(std::size_t row, int axis, std::span<const double> x) const {
  if (row >= gradient_.size() || static_cast<std::size_t>(axis) >= gradient_[row].size() || !gradient_[row][axis])
    throw DomainError("FunctionField: no derivative given for this row/axis");
  return gradient_[row][axis](x);
}

PiecewiseField PiecewiseField::constant(const TorusGrid& grid, std::size_t rows, std::vector<double> values) {
  if (values.size() != rows * grid.cells()) throw DomainError("PiecewiseField: size mismatch");
  return PiecewiseField(grid, Kind::constant_per_cell, rows, std::move(values));
}

PiecewiseField PiecewiseField::multilinear(const TorusGrid& grid, std::size_t rows, std::vector<double> nodes) {
  if (nodes.size() != rows * grid.cells()) throw DomainError("PiecewiseField: size mismatch");
  return PiecewiseField(grid, Kind::multilinear, rows, std::move(nodes));
}

PiecewiseField PiecewiseField::edge_profile(const TorusGrid& grid, const EdgeField& flux) {
  if (flux.cells() != grid.cells() || flux.dirs() != static_cast<std::size_t>(grid.dim()))
    throw DomainError("PiecewiseField: flux does not match the grid");
  const auto f = flux.flat();
  return PiecewiseField(grid, Kind::edge_profile, flux.rows() * flux.dirs(), std::vector<double>(f.begin(), f.end()));
}

double PiecewiseField::value(std::size_t row, std::span<const double> x) const {
  Point tau{};
  const std::size_t k = grid_.locate(x, tau);
  const std::size_t cells = grid_.cells();
  switch (kind_) {
    case Kind::constant_per_cell: return data_[row * cells + k];
    case Kind::multilinear: {
      const int d = grid_.dim();
      const auto base = grid_.coords(k);
      double v = 0.0;
      for (int m = 0; m < (1 << d); ++m) {
        std::array<int, TorusGrid::kMaxDim> node = base;
        double weight = 1.0;
        for (int l = 0; l < d; ++l) {
          const bool up = (m >> (d - 1 - l)) & 1;
          node[l] += up ? 1 : 0;
          weight *= up ? tau[l] : 1.0 - tau[l];
        }
        v += weight * data_[row * cells + grid_.index(std::span<const int>(node.data(), d))];
      }
      return v;
    }
    case Kind::edge_profile: {
      const auto d = static_cast<std::size_t>(grid_.dim());
      const std::size_t i = row / d;
      const std::size_t e = row % d;
      const std::size_t kb = grid_.backward(k, static_cast<int>(e));
      const double t = tau[e];
      return (t * data_[(i * cells + k) * d + e] + (1.0 - t) * data_[(i * cells + kb) * d + e]) / grid_.n();
    }
  }
  return 0.0;
}

double PiecewiseField::partial(std::size_t row, int axis, std::span<const double> x) const {
  Point tau{};
  const std::size_t k = grid_.locate(x, tau);
  const std::size_t cells = grid_.cells();
  switch (kind_) {
    case Kind::constant_per_cell: return 0.0;
    case Kind::multilinear: {
      const int d = grid_.dim();
      const auto base = grid_.coords(k);
      double v = 0.0;
      for (int m = 0; m < (1 << d); ++m) {
        std::array<int, TorusGrid::kMaxDim> node = base;
        double weight = 1.0;
        for (int l = 0; l < d; ++l) {
          const bool up = (m >> (d - 1 - l)) & 1;
          node[l] += up ? 1 : 0;
          if (l == axis)
            weight *= up ? grid_.n() : -grid_.n();
          else
            weight *= up ? tau[l] : 1.0 - tau[l];
        }
        v += weight * data_[row * cells + grid_.index(std::span<const int>(node.data(), d))];
      }
      return v;
    }
    case Kind::edge_profile: {
      const auto d = static_cast<std::size_t>(grid_.dim());
      const std::size_t i = row / d;
      const std::size_t e = row % d;
      if (static_cast<std::size_t>(axis) != e) return 0.0;
      const std::size_t kb = grid_.backward(k, axis);
      return data_[(i * cells + k) * d + e] - data_[(i * cells + kb) * d + e];
    }
  }
  return 0.0;
}

double PiecewiseField::integral(std::size_t row) const {
  const std::size_t cells = grid_.cells();
  if (kind_ == Kind::edge_profile) {
    const auto d = static_cast<std::size_t>(grid_.dim());
    const std::size_t i = row / d, e = row % d;
    double s = 0.0;
    for (std::size_t k = 0; k < cells; ++k) s += data_[(i * cells + k) * d + e];
    return s * grid_.cell_volume() / grid_.n();
  }
  // cell values and tent weights both integrate to 1/N^d
  double s = 0.0;
  for (std::size_t k = 0; k < cells; ++k) s += data_[row * cells + k];
  return s * grid_.cell_volume();
}

double PiecewiseField::l1(std::size_t row) const {
  const std::size_t cells = grid_.cells();
  switch (kind_) {
    case Kind::constant_per_cell: {
      double s = 0.0;
      for (std::size_t k = 0; k < cells; ++k) s += std::fabs(data_[row * cells + k]);
      return s * grid_.cell_volume();
    }
    case Kind::edge_profile: {
      const auto d = static_cast<std::size_t>(grid_.dim());
      const std::size_t i = row / d, e = row % d;
      double s = 0.0;
      for (std::size_t k = 0; k < cells; ++k) {
        const std::size_t kb = grid_.backward(k, static_cast<int>(e));
        s += affine_abs_integral(data_[(i * cells + kb) * d + e], data_[(i * cells + k) * d + e]);
      }
      return s * grid_.cell_volume() / grid_.n();
    }
    case Kind::multilinear: {
      if (grid_.dim() == 1) {
        double s = 0.0;
        for (std::size_t k = 0; k < cells; ++k)
          s += affine_abs_integral(data_[row * cells + k], data_[row * cells + grid_.forward(k, 0)]);
        return s * grid_.cell_volume();
      }
      return integrate(grid_, [&](std::span<const double> x) { return std::fabs(value(row, x)); }, 8);
    }
  }
  return 0.0;
}

RhoTilde::RhoTilde(const DiscreteSystem& sys, const CellField& c)
    : SpatialField(sys.grid), omega_(&sys.network.omega()), u_(PiecewiseField::multilinear(sys.grid, 0, {})) {
  CellField u = make_cell_field(sys.grid, sys.species());
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t k = 0; k < u.cells(); ++k) {
      if (!(c(i, k) >= 0.0)) throw DomainError("RhoTilde: concentrations must be non-negative");
      u(i, k) = std::sqrt(c(i, k) / sys.weights(i, k));
    }
  u_ = embed_multilinear(sys.grid, u);
}

double RhoTilde::value(std::size_t row, std::span<const double> x) const {
  const double u = u_.value(row, x);
  return omega_->value(row, x) * u * u;
}

PiecewiseField embed_pc(const TorusGrid& grid, const CellField& c) {
  const auto f = c.flat();
  return PiecewiseField::constant(grid, c.rows(), std::vector<double>(f.begin(), f.end()));
}

PiecewiseField embed_flux_diff(const TorusGrid& grid, const EdgeField& flux) {
  return PiecewiseField::edge_profile(grid, flux);
}

PiecewiseField embed_flux_react(const TorusGrid& grid, const ReactField& flux) {
  const auto f = flux.flat();
  return PiecewiseField::constant(grid, flux.rows(), std::vector<double>(f.begin(), f.end()));
}

PiecewiseField embed_multilinear(const TorusGrid& grid, const CellField& u) {
  const auto f = u.flat();
  return PiecewiseField::multilinear(grid, u.rows(), std::vector<double>(f.begin(), f.end()));
}

double hat_f(const TorusGrid& grid, std::span<const int> m, std::span<const double> x) {
  double p = 1.0;
  for (int l = 0; l < grid.dim(); ++l) {
    double xl = x[l] - std::floor(x[l]);
    if (xl >= 1.0) xl = 0.0;
    const double s = grid.n() * xl;
    if (s >= 1.0) return 0.0;
    p *= m[l] ? s : 1.0 - s;
  }
  return p;
}

double hat_h(const TorusGrid& grid, std::size_t k, std::span<const double> x) {
  // h_k(x) = sum_m f_m(x - k/N + m/N)
  const int d = grid.dim();
  const auto kc = grid.coords(k);
  double s = 0.0;
  for (int mm = 0; mm < (1 << d); ++mm) {
    std::array<int, TorusGrid::kMaxDim> m{};
    Point y{};
    for (int l = 0; l < d; ++l) {
      m[l] = (mm >> (d - 1 - l)) & 1;
      y[l] = x[l] + static_cast<double>(m[l] - kc[l]) / grid.n();
    }
    s += hat_f(grid, std::span<const int>(m.data(), d), std::span<const double>(y.data(), d));
  }
  return s;
}

EdgeField nabla_n(const TorusGrid& grid, const CellField& u) {
  EdgeField g = disc_gradient(grid, u);
  g *= static_cast<double>(grid.n());
  return g;
}

CellField discretize_fields(const TorusGrid& grid, std::span<const PointFn> phi, int order) {
  return discretize(grid, phi, order);
}

double l1_distance(const TorusGrid& grid, const SpatialField& a, std::size_t row_a, const SpatialField& b,
                   std::size_t row_b, int order) {
  return integrate(
      grid, [&](std::span<const double> x) { return std::fabs(a.value(row_a, x) - b.value(row_b, x)); }, order);
}

double integrate_field(const SpatialField& f, std::size_t row, int order) {
  return integrate(f.grid(), [&](std::span<const double> x) { return f.value(row, x); }, order);
}

std::vector<double> sample_uniform(const SpatialField& f, std::size_t row, int m) {
  if (m < 1) throw DomainError("sample_uniform: need at least one point per axis");
  const int d = f.grid().dim();
  std::size_t total = 1;
  for (int l = 0; l < d; ++l) total *= static_cast<std::size_t>(m);
  std::vector<double> out(total);
  parallel::for_each_index(total, [&](std::size_t p) {
    Point x{};
    std::size_t rest = p;
    for (int l = d - 1; l >= 0; --l) {
      x[l] = static_cast<double>(rest % static_cast<std::size_t>(m)) / m;
      rest /= static_cast<std::size_t>(m);
    }
    out[p] = f.value(row, std::span<const double>(x.data(), d));
  });
  return out;
}

double embedded_ce_defect(const DiscreteSystem& sys, const Trajectory& traj, std::span<const PointFn> phi,
                          const std::vector<std::vector<PointFn>>& grad_phi) {
  const auto& grid = sys.grid;
  const auto& net = sys.network;
  const std::size_t I = sys.species();
  const int d = grid.dim();
  const auto& smp = traj.samples;
  if (smp.size() < 3) throw DomainError("embedded_ce_defect: need at least three samples");
  constexpr int kOrder = 8;

  auto mass = [&](const Sample& s) {
    const PiecewiseField rho = embed_pc(grid, s.c);
    double v = 0.0;
    for (std::size_t i = 0; i < I; ++i)
      v += integrate(grid, [&](std::span<const double> x) { return rho.value(i, x) * phi[i](x); }, kOrder);
    return v;
  };
  auto flux_pairing = [&](const Sample& s) {
    const PiecewiseField f = embed_flux_diff(grid, s.flux_diff);
    const PiecewiseField j = embed_flux_react(grid, s.flux_react);
    double v = 0.0;
    for (std::size_t i = 0; i < I; ++i)
      for (int e = 0; e < d; ++e)
        v += integrate(
            grid, [&](std::span<const double> x) { return f.value(i * d + e, x) * grad_phi[i][e](x); }, kOrder);
    for (std::size_t r = 0; r < net.reaction_count(); ++r)
      v += integrate(
          grid,
          [&](std::span<const double> x) {
            double g = 0.0;
            for (std::size_t i = 0; i < I; ++i) g += net.gamma(r, i) * phi[i](x);
            return j.value(r, x) * g;
          },
          kOrder);
    return v;
  };

  std::vector<double> masses(smp.size());
  for (std::size_t m = 0; m < smp.size(); ++m) masses[m] = mass(smp[m]);
  double worst = 0.0;
  for (std::size_t m = 1; m + 1 < smp.size(); ++m) {
    const double rate = (masses[m + 1] - masses[m - 1]) / (smp[m + 1].t - smp[m - 1].t);
    worst = std::max(worst, std::fabs(rate - flux_pairing(smp[m])));
  }
  return worst;
}

}  // namespace edpflow
