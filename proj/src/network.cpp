#include "edpflow/network.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "edpflow/errors.hpp"

namespace edpflow {

// ---------------------------------------------------------------------------
// ReferenceDensity

std::size_t ReferenceDensity::size() const noexcept {
  return std::visit([](const auto& v) { return v.size(); }, repr_);
}

bool ReferenceDensity::is_constant() const noexcept {
  if (std::holds_alternative<std::vector<double>>(repr_)) return true;
  const auto& exprs = std::get<std::vector<Expr>>(repr_);
  return std::all_of(exprs.begin(), exprs.end(), [](const Expr& e) { return e.is_constant(); });
}

double ReferenceDensity::value(std::size_t species, std::span<const double> x) const {
  if (const auto* c = std::get_if<std::vector<double>>(&repr_)) return (*c)[species];
  return std::get<std::vector<Expr>>(repr_)[species](x);
}

const std::vector<double>& ReferenceDensity::constant_values() const {
  if (const auto* c = std::get_if<std::vector<double>>(&repr_)) return *c;
  throw std::logic_error("reference density depends on x");
}

std::vector<std::string> ReferenceDensity::sources() const {
  std::vector<std::string> out;
  if (const auto* c = std::get_if<std::vector<double>>(&repr_)) {
    for (double v : *c) out.push_back(Expr::constant(v).source());
  } else {
    for (const auto& e : std::get<std::vector<Expr>>(repr_)) out.push_back(e.source());
  }
  return out;
}

// ---------------------------------------------------------------------------
// ReactionNetwork

ReactionNetwork::ReactionNetwork(std::size_t species, std::vector<Reaction> reactions, std::vector<double> diffusion,
                                 ReferenceDensity omega)
    : species_(species), reactions_(std::move(reactions)), diffusion_(std::move(diffusion)), omega_(std::move(omega)) {}

namespace {

struct Fnv1a {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  }
  void num(double v) { bytes(&v, sizeof v); }
  void num(std::uint64_t v) { bytes(&v, sizeof v); }
  void str(const std::string& s) {
    num(static_cast<std::uint64_t>(s.size()));
    bytes(s.data(), s.size());
  }
};

}  // namespace

std::uint64_t ReactionNetwork::fingerprint() const {
  Fnv1a f;
  f.num(static_cast<std::uint64_t>(species_));
  for (const auto& r : reactions_) {
    for (double a : r.alpha) f.num(a);
    for (double b : r.beta) f.num(b);
    f.num(r.kappa);
  }
  for (double d : diffusion_) f.num(d);
  for (const auto& s : omega_.sources()) f.str(s);
  return f.h;
}

// ---------------------------------------------------------------------------
// Stoichiometry

std::optional<Rational> to_rational(double x) {
  if (!std::isfinite(x) || std::fabs(x) > 1e12) return std::nullopt;
  constexpr long long kMaxDen = 1'000'000;
  const double tol = 1e-12 * std::max(1.0, std::fabs(x));
  // Continued-fraction convergents h/k.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int it = 0; it < 64; ++it) {
    const double a_d = std::floor(rem);
    if (std::fabs(a_d) > 1e15) break;
    const auto a = static_cast<long long>(a_d);
    const long long h2 = a * h1 + h0;
    const long long k2 = a * k1 + k0;
    if (k2 > kMaxDen) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= tol) return Rational(h1, k1);
    const double frac = rem - a_d;
    if (frac == 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

StoichMatrix stoich_matrix(const ReactionNetwork& net) {
  StoichMatrix m;
  m.rows = net.reaction_count();
  m.cols = net.species();
  m.real.resize(m.rows * m.cols);
  std::vector<Rational> exact(m.rows * m.cols);
  bool all_rational = true;
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto& rx = net.reaction(r);
    for (std::size_t i = 0; i < m.cols; ++i) {
      m.real[r * m.cols + i] = rx.alpha[i] - rx.beta[i];
      const auto a = to_rational(rx.alpha[i]);
      const auto b = to_rational(rx.beta[i]);
      if (a && b) exact[r * m.cols + i] = *a - *b;
      else all_rational = false;
    }
  }
  if (all_rational) m.exact = std::move(exact);
  return m;
}

namespace {

// Null space of a rows x cols matrix; pivots are taken from the last column backwards so
// the leading species become the free variables.
template <class T, class IsZero, class Abs>
std::vector<std::vector<T>> null_space(std::vector<T> a, std::size_t rows, std::size_t cols, IsZero is_zero, Abs abs) {
  auto at = [&](std::size_t r, std::size_t c) -> T& { return a[r * cols + c]; };
  std::vector<std::ptrdiff_t> pivot_row_of_col(cols, -1);
  std::size_t prow = 0;
  for (std::size_t jj = cols; jj-- > 0 && prow < rows;) {
    std::size_t best = rows;
    for (std::size_t r = prow; r < rows; ++r) {
      if (is_zero(at(r, jj))) continue;
      if (best == rows || abs(at(best, jj)) < abs(at(r, jj))) best = r;
    }
    if (best == rows) continue;
    for (std::size_t c = 0; c < cols; ++c) std::swap(at(prow, c), at(best, c));
    const T piv = at(prow, jj);
    for (std::size_t c = 0; c < cols; ++c) at(prow, c) /= piv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == prow || is_zero(at(r, jj))) continue;
      const T factor = at(r, jj);
      for (std::size_t c = 0; c < cols; ++c) at(r, c) -= factor * at(prow, c);
    }
    pivot_row_of_col[jj] = static_cast<std::ptrdiff_t>(prow);
    ++prow;
  }
  std::vector<std::vector<T>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_row_of_col[f] >= 0) continue;
    std::vector<T> q(cols, T(0));
    q[f] = T(1);
    for (std::size_t p = 0; p < cols; ++p) {
      if (pivot_row_of_col[p] < 0) continue;
      q[p] = -at(static_cast<std::size_t>(pivot_row_of_col[p]), f);
    }
    basis.push_back(std::move(q));
  }
  return basis;
}

}  // namespace

std::vector<std::vector<double>> conservation_laws(const StoichMatrix& gamma) {
  std::vector<std::vector<double>> out;
  if (gamma.exact) {
    auto basis = null_space<Rational>(
        *gamma.exact, gamma.rows, gamma.cols, [](const Rational& v) { return v.numerator() == 0; },
        [](const Rational& v) { return boost::abs(v); });
    for (auto& q : basis) {
      long long lcm = 1;
      for (const auto& v : q) lcm = std::lcm(lcm, v.denominator());
      std::vector<double> row;
      for (const auto& v : q) row.push_back(static_cast<double>(v.numerator() * (lcm / v.denominator())));
      out.push_back(std::move(row));
    }
    return out;
  }
  double scale = 0.0;
  for (double v : gamma.real) scale = std::max(scale, std::fabs(v));
  const double tol = 1e-10 * std::max(scale, 1.0);
  return null_space<double>(
      gamma.real, gamma.rows, gamma.cols, [tol](double v) { return std::fabs(v) <= tol; },
      [](double v) { return std::fabs(v); });
}

double monomial(std::span<const double> c, std::span<const double> gamma) {
  double p = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (gamma[i] == 0.0) continue;
    p *= gamma[i] == 1.0 ? c[i] : std::pow(c[i], gamma[i]);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Validation

ValidationReport validate_network(const ReactionNetwork& net, int dim) {
  ValidationReport rep;
  rep.p_crit = 1.0 + 2.0 / static_cast<double>(dim);
  const std::size_t I = net.species();
  auto violate = [&](const std::string& path, const std::string& what) { rep.violations.push_back(path + ": " + what); };

  if (I == 0) violate("network.species", "at least one species required");
  if (dim < 1 || dim > 3) violate("grid.d", "dimension must be 1, 2 or 3");
  if (net.diffusion().size() != I) violate("network.diffusion", "length must equal the species count");
  for (std::size_t i = 0; i < net.diffusion().size(); ++i) {
    const double d = net.diffusion()[i];
    if (!(d > 0.0) || !std::isfinite(d)) violate("network.diffusion[" + std::to_string(i) + "]", "must be positive");
  }

  bool a1 = true, a2 = true;
  for (std::size_t r = 0; r < net.reaction_count(); ++r) {
    const auto& rx = net.reaction(r);
    const std::string base = "network.reactions[" + std::to_string(r) + "]";
    if (!(rx.kappa > 0.0) || !std::isfinite(rx.kappa)) violate(base + ".kappa", "must be positive");
    if (rx.alpha.size() != I) violate(base + ".alpha", "length must equal the species count");
    if (rx.beta.size() != I) violate(base + ".beta", "length must equal the species count");
    double la = 0.0, lb = 0.0;
    for (std::size_t i = 0; i < rx.alpha.size(); ++i) {
      if (!(rx.alpha[i] >= 0.0)) violate(base + ".alpha[" + std::to_string(i) + "]", "must be non-negative");
      la += rx.alpha[i];
    }
    for (std::size_t i = 0; i < rx.beta.size(); ++i) {
      if (!(rx.beta[i] >= 0.0)) violate(base + ".beta[" + std::to_string(i) + "]", "must be non-negative");
      lb += rx.beta[i];
    }
    if (0.5 * (la + lb) > rep.p_crit) a1 = false;
    if (la > rep.p_crit || lb > rep.p_crit) a2 = false;
  }
  rep.growth_a1 = a1;
  rep.growth_a2 = a2;

  if (net.omega().size() != I) {
    violate("network.reference_density", "length must equal the species count");
    return rep;
  }
  // Sample omega on the nodes of a uniform 32^d lattice.
  const int d = std::clamp(dim, 1, 3);
  const int m = 32;
  std::size_t total = 1;
  for (int l = 0; l < d; ++l) total *= m;
  rep.omega_min = std::numeric_limits<double>::infinity();
  rep.omega_max = -std::numeric_limits<double>::infinity();
  std::array<double, 3> x{};
  for (std::size_t i = 0; i < I; ++i) {
    bool bad = false;
    for (std::size_t p = 0; p < total && !bad; ++p) {
      std::size_t rest = p;
      for (int l = d - 1; l >= 0; --l) {
        x[l] = static_cast<double>(rest % m) / m;
        rest /= m;
      }
      const double v = net.omega().value(i, std::span<const double>(x.data(), d));
      if (!(v > 0.0) || !std::isfinite(v)) {
        violate("network.reference_density[" + std::to_string(i) + "]", "must be positive and finite on the torus");
        bad = true;
      }
      rep.omega_min = std::min(rep.omega_min, v);
      rep.omega_max = std::max(rep.omega_max, v);
    }
  }
  return rep;
}

double kappa_from_rates(double k_fw, double k_bw, std::span<const double> omega, std::span<const double> alpha,
                        std::span<const double> beta) {
  if (!(k_fw > 0.0) || !(k_bw > 0.0)) throw ConfigError("", "rate constants must be positive");
  const double lhs = k_fw * monomial(omega, alpha);
  const double rhs = k_bw * monomial(omega, beta);
  if (std::fabs(lhs - rhs) > 1e-10 * std::max(std::fabs(lhs), std::fabs(rhs))) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "detailed balance violated: k_fw*omega^alpha=" << lhs << " but k_bw*omega^beta=" << rhs;
    throw ConfigError("", msg.str());
  }
  std::vector<double> half(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) half[i] = 0.5 * (alpha[i] + beta[i]);
  return std::sqrt(lhs * rhs) / monomial(omega, half);
}

}  // namespace edpflow
