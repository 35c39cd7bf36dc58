#pragma once

// OpenMP helpers. Reductions are blocked with a block size that does not depend on the
// thread count, and block partials are combined serially, so results are bitwise
// reproducible for any EDPFLOW_THREADS setting.

#include <cstddef>
#include <vector>

namespace edpflow::parallel {

inline constexpr std::size_t kBlock = 1024;
/// Below this many items loops run on the calling thread.
inline constexpr std::size_t kMinParallel = 4096;

/// Applies EDPFLOW_THREADS (if set and positive) as the OpenMP thread cap.
/// Returns the resulting maximum thread count.
int configure_threads_from_env();

int max_threads();

/// sum_{k < n} term(k), deterministic.
template <class Term>
double block_sum(std::size_t n, Term&& term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<long>(blocks);
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += term(k);
    partial[static_cast<std::size_t>(b)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

/// body(k) for k < n; iterations must write disjoint outputs.
template <class Body>
void for_each_index(std::size_t n, Body&& body) {
  const auto nn = static_cast<long>(n);
#pragma omp parallel for schedule(static) if (n >= kMinParallel)
  for (long k = 0; k < nn; ++k) body(static_cast<std::size_t>(k));
}

}  // namespace edpflow::parallel
