#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "edpflow/discrete_gs.hpp"
#include "edpflow/network.hpp"

namespace edpflow::testing {

inline ReactionNetwork exchange_net(double kappa = 1.0, std::vector<double> omega = {1.0, 1.0}) {
  return ReactionNetwork(2, {Reaction{{1, 0}, {0, 1}, kappa}}, {1.0, 1.0}, ReferenceDensity(std::move(omega)));
}

inline ReactionNetwork binary_net() {
  return ReactionNetwork(3, {Reaction{{1, 1, 0}, {0, 0, 1}, 1.0}}, {1.0, 1.0, 1.0},
                         ReferenceDensity(std::vector<double>{1.0, 1.0, 1.0}));
}

inline ReactionNetwork heat_net(double delta = 1.0) {
  return ReactionNetwork(1, {}, {delta}, ReferenceDensity(std::vector<double>{1.0}));
}

inline CellField cells(const TorusGrid& grid, std::size_t species, const std::vector<double>& values) {
  CellField c = make_cell_field(grid, species);
  for (std::size_t j = 0; j < values.size(); ++j) c.flat()[j] = values[j];
  return c;
}

inline CellField random_positive(const TorusGrid& grid, std::size_t species, std::mt19937_64& rng, double lo = 0.1,
                                 double hi = 3.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  CellField c = make_cell_field(grid, species);
  for (double& v : c.flat()) v = u(rng);
  return c;
}

// Owning copy of a field's values, safe to iterate over when the field is a temporary.
template <class Field>
std::vector<double> values(const Field& f) {
  if constexpr (requires { f.flat(); }) {
    const auto v = f.flat();
    return {v.begin(), v.end()};
  } else {
    const auto v = f.data();
    return {v.begin(), v.end()};
  }
}

}  // namespace edpflow::testing
