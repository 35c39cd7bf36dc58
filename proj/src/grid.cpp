#include "edpflow/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "edpflow/errors.hpp"
#include "edpflow/network.hpp"
#include "edpflow/parallel.hpp"

namespace edpflow {

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n) {
  if (dim < 1 || dim > kMaxDim) throw ConfigError("grid.d", "dimension must be 1, 2 or 3");
  if (n < 1) throw ConfigError("grid.N", "resolution must be positive");
  cells_ = 1;
  for (int l = 0; l < dim; ++l) cells_ *= static_cast<std::size_t>(n);
  if (cells_ > (std::size_t{1} << 31)) throw ConfigError("grid.N", "grid too large");
  cell_volume_ = 1.0 / static_cast<double>(cells_);

  // stride of axis l: last axis is contiguous
  std::array<std::size_t, kMaxDim> stride{};
  std::size_t s = 1;
  for (int l = dim - 1; l >= 0; --l) {
    stride[l] = s;
    s *= static_cast<std::size_t>(n);
  }
  for (int l = 0; l < dim; ++l) {
    fwd_[l].resize(cells_);
    bwd_[l].resize(cells_);
    for (std::size_t k = 0; k < cells_; ++k) {
      const std::size_t kl = (k / stride[l]) % static_cast<std::size_t>(n);
      const std::size_t base = k - kl * stride[l];
      fwd_[l][k] = static_cast<std::uint32_t>(base + ((kl + 1) % n) * stride[l]);
      bwd_[l][k] = static_cast<std::uint32_t>(base + ((kl + n - 1) % n) * stride[l]);
    }
  }
}

std::array<int, TorusGrid::kMaxDim> TorusGrid::coords(std::size_t k) const noexcept {
  std::array<int, kMaxDim> c{};
  for (int l = dim_ - 1; l >= 0; --l) {
    c[l] = static_cast<int>(k % static_cast<std::size_t>(n_));
    k /= static_cast<std::size_t>(n_);
  }
  return c;
}

std::size_t TorusGrid::index(std::span<const int> c) const noexcept {
  std::size_t k = 0;
  for (int l = 0; l < dim_; ++l) {
    const int m = ((c[l] % n_) + n_) % n_;
    k = k * static_cast<std::size_t>(n_) + static_cast<std::size_t>(m);
  }
  return k;
}

std::size_t TorusGrid::locate(std::span<const double> x, std::span<double> tau) const noexcept {
  std::size_t k = 0;
  for (int l = 0; l < dim_; ++l) {
    double xl = x[l] - std::floor(x[l]);
    if (xl >= 1.0) xl = 0.0;
    const double scaled = xl * n_;
    int j = static_cast<int>(std::floor(scaled));
    if (j >= n_) j = n_ - 1;
    tau[l] = scaled - j;
    k = k * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  return k;
}

CellField make_cell_field(const TorusGrid& grid, std::size_t species, double fill) {
  return CellField(species, grid.cells(), 1, fill);
}
EdgeField make_edge_field(const TorusGrid& grid, std::size_t species, double fill) {
  return EdgeField(species, grid.cells(), static_cast<std::size_t>(grid.dim()), fill);
}
ReactField make_react_field(const TorusGrid& grid, std::size_t reactions, double fill) {
  return ReactField(reactions, grid.cells(), 1, fill);
}

EdgeField disc_gradient(const TorusGrid& grid, const CellField& phi) {
  const std::size_t species = phi.rows();
  const int d = grid.dim();
  EdgeField out = make_edge_field(grid, species);
  parallel::for_each_index(grid.cells(), [&](std::size_t k) {
    for (std::size_t i = 0; i < species; ++i)
      for (int e = 0; e < d; ++e) out(i, k, e) = phi(i, grid.forward(k, e)) - phi(i, k);
  });
  return out;
}

ReactField gamma_lift(const ReactionNetwork& net, const CellField& phi) {
  const std::size_t R = net.reaction_count();
  const std::size_t I = net.species();
  ReactField out(R, phi.cells());
  parallel::for_each_index(phi.cells(), [&](std::size_t k) {
    for (std::size_t r = 0; r < R; ++r) {
      double s = 0.0;
      for (std::size_t i = 0; i < I; ++i) s += net.gamma(r, i) * phi(i, k);
      out(r, k) = s;
    }
  });
  return out;
}

CellField ce_adjoint(const TorusGrid& grid, const ReactionNetwork& net, const EdgeField& flux_diff,
                     const ReactField& flux_react) {
  const std::size_t I = net.species();
  const std::size_t R = net.reaction_count();
  const int d = grid.dim();
  CellField out = make_cell_field(grid, I);
  parallel::for_each_index(grid.cells(), [&](std::size_t k) {
    for (std::size_t i = 0; i < I; ++i) {
      double v = 0.0;
      for (int e = 0; e < d; ++e) v += flux_diff(i, grid.backward(k, e), e) - flux_diff(i, k, e);
      for (std::size_t r = 0; r < R; ++r) v += net.gamma(r, i) * flux_react(r, k);
      out(i, k) = v;
    }
  });
  return out;
}

template <class Tag>
double pairing(const TorusGrid& grid, const LatticeArray<Tag>& a, const LatticeArray<Tag>& b) {
  const auto fa = a.flat();
  const auto fb = b.flat();
  return grid.cell_volume() * parallel::block_sum(fa.size(), [&](std::size_t m) { return fa[m] * fb[m]; });
}

template double pairing(const TorusGrid&, const CellField&, const CellField&);
template double pairing(const TorusGrid&, const EdgeField&, const EdgeField&);
template double pairing(const TorusGrid&, const ReactField&, const ReactField&);

// ---------------------------------------------------------------------------
// Quadrature

namespace {

GaussRule build_gauss(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int m = 0; m < order; ++m) {
    double x = std::cos(std::numbers::pi * (m + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // map [-1,1] -> [0,1]
    rule.nodes[order - 1 - m] = 0.5 * (x + 1.0);
    rule.weights[order - 1 - m] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static std::array<GaussRule, 9> rules;
  static std::once_flag once;
  std::call_once(once, [] {
    for (int o = 1; o <= 8; ++o) rules[o] = build_gauss(o);
  });
  if (order < 1 || order > 8) throw DomainError("gauss_rule: order must be in 1..8");
  return rules[order];
}

namespace {

// Average over cell k of f, tensor Gauss rule.
double cell_average(const TorusGrid& grid, std::size_t k, const PointFn& f, const GaussRule& rule) {
  const int d = grid.dim();
  const auto c = grid.coords(k);
  const double h = 1.0 / grid.n();
  const int q = static_cast<int>(rule.nodes.size());
  int total = 1;
  for (int l = 0; l < d; ++l) total *= q;
  std::array<double, TorusGrid::kMaxDim> x{};
  double acc = 0.0;
  for (int p = 0; p < total; ++p) {
    int rest = p;
    double w = 1.0;
    for (int l = d - 1; l >= 0; --l) {
      const int m = rest % q;
      rest /= q;
      x[l] = (c[l] + rule.nodes[m]) * h;
      w *= rule.weights[m];
    }
    acc += w * f(std::span<const double>(x.data(), d));
  }
  return acc;
}

}  // namespace

std::vector<double> cell_averages(const TorusGrid& grid, const PointFn& f, int order) {
  const GaussRule& rule = gauss_rule(order);
  std::vector<double> out(grid.cells());
  parallel::for_each_index(grid.cells(), [&](std::size_t k) { out[k] = cell_average(grid, k, f, rule); });
  return out;
}

double integrate(const TorusGrid& grid, const PointFn& f, int order) {
  const GaussRule& rule = gauss_rule(order);
  return grid.cell_volume() * parallel::block_sum(grid.cells(), [&](std::size_t k) { return cell_average(grid, k, f, rule); });
}

CellField discretize(const TorusGrid& grid, std::span<const PointFn> fields, int order) {
  CellField out = make_cell_field(grid, fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto avg = cell_averages(grid, fields[i], order);
    for (std::size_t k = 0; k < grid.cells(); ++k) out(i, k) = avg[k];
  }
  return out;
}

CellField reference_weights(const ReactionNetwork& net, const TorusGrid& grid) {
  const std::size_t I = net.species();
  CellField w = make_cell_field(grid, I);
  for (std::size_t i = 0; i < I; ++i) {
    if (net.omega().is_constant()) {
      const double v = net.omega().value(i, {});
      for (std::size_t k = 0; k < grid.cells(); ++k) w(i, k) = v;
    } else {
      // Gauss order 8 on cells of width at most 1/16, so coarse grids still get exact-to-rounding
      // averages of smooth densities.
      const int s = std::max(1, (16 + grid.n() - 1) / grid.n());
      const TorusGrid fine(grid.dim(), grid.n() * s);
      const auto avg =
          cell_averages(fine, [&](std::span<const double> x) { return net.omega().value(i, x); }, 8);
      for (std::size_t k = 0; k < grid.cells(); ++k) w(i, k) = 0.0;
      for (std::size_t m = 0; m < fine.cells(); ++m) {
        const auto fc = fine.coords(m);
        std::array<int, TorusGrid::kMaxDim> cc{};
        for (int l = 0; l < grid.dim(); ++l) cc[l] = fc[l] / s;
        w(i, grid.index(std::span<const int>(cc.data(), grid.dim()))) += avg[m];
      }
      const double children = static_cast<double>(fine.cells() / grid.cells());
      for (std::size_t k = 0; k < grid.cells(); ++k) w(i, k) /= children;
    }
    for (std::size_t k = 0; k < grid.cells(); ++k) {
      if (!(w(i, k) > 0.0) || !std::isfinite(w(i, k)))
        throw DomainError("reference_weights: non-positive weight for species " + std::to_string(i) + " in cell " +
                          std::to_string(k));
    }
  }
  return w;
}

}  // namespace edpflow
