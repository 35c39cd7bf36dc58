#pragma once

// Static problem definition: species, mass-action reactions under detailed balance,
// diffusion coefficients and the reference density omega.

#include <boost/rational.hpp>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "edpflow/expr.hpp"

namespace edpflow {

/// One reversible reaction  alpha  <=>  beta  with symmetric rate kappa.
struct Reaction {
  std::vector<double> alpha;
  std::vector<double> beta;
  double kappa = 1.0;
};

/// omega either as a constant vector or one expression per species.
class ReferenceDensity {
 public:
  ReferenceDensity() = default;
  explicit ReferenceDensity(std::vector<double> constant) : repr_(std::move(constant)) {}
  explicit ReferenceDensity(std::vector<Expr> fields) : repr_(std::move(fields)) {}

  std::size_t size() const noexcept;
  bool is_constant() const noexcept;
  double value(std::size_t species, std::span<const double> x) const;
  /// Constant values; throws std::logic_error when omega depends on x.
  const std::vector<double>& constant_values() const;
  /// Textual form per species (expression source or number).
  std::vector<std::string> sources() const;

 private:
  std::variant<std::vector<double>, std::vector<Expr>> repr_;
};

class ReactionNetwork {
 public:
  ReactionNetwork() = default;
  ReactionNetwork(std::size_t species, std::vector<Reaction> reactions, std::vector<double> diffusion,
                  ReferenceDensity omega);

  std::size_t species() const noexcept { return species_; }
  std::size_t reaction_count() const noexcept { return reactions_.size(); }
  const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
  const Reaction& reaction(std::size_t r) const { return reactions_.at(r); }
  const std::vector<double>& diffusion() const noexcept { return diffusion_; }
  const ReferenceDensity& omega() const noexcept { return omega_; }

  /// gamma^r_i = alpha^r_i - beta^r_i
  double gamma(std::size_t r, std::size_t i) const noexcept {
    return reactions_[r].alpha[i] - reactions_[r].beta[i];
  }

  /// Stable 64-bit fingerprint of all coefficients and omega sources.
  std::uint64_t fingerprint() const;

 private:
  std::size_t species_ = 0;
  std::vector<Reaction> reactions_;
  std::vector<double> diffusion_;
  ReferenceDensity omega_;
};

using Rational = boost::rational<long long>;

/// Rows = reactions, columns = species. Exact rationals when every entry is one.
struct StoichMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> real;  // row-major gamma
  std::optional<std::vector<Rational>> exact;

  double at(std::size_t r, std::size_t i) const { return real[r * cols + i]; }
};

StoichMatrix stoich_matrix(const ReactionNetwork& net);

/// Closest rational with denominator <= 10^6 reproducing x to 1e-12 relative, if any.
std::optional<Rational> to_rational(double x);

struct ValidationReport {
  std::vector<std::string> violations;  // each names the offending field
  bool growth_a1 = false;               // 1/2 |alpha + beta|_1 <= p_crit for all r
  bool growth_a2 = false;               // |alpha|_1, |beta|_1 <= p_crit for all r
  double p_crit = 0.0;
  double omega_min = 0.0;
  double omega_max = 0.0;

  bool valid() const noexcept { return violations.empty(); }
};

/// Checks kappa > 0, delta > 0, alpha, beta >= 0, shapes, and 0 < omega_* <= omega <= omega^* < inf
/// on a sample grid; reports the growth conditions for p_crit = 1 + 2/dim.
ValidationReport validate_network(const ReactionNetwork& net, int dim);

/// kappa = k_fw omega^alpha / omega^((alpha+beta)/2), after checking detailed balance
/// k_fw omega^alpha = k_bw omega^beta to 1e-10 relative (ConfigError otherwise).
double kappa_from_rates(double k_fw, double k_bw, std::span<const double> omega, std::span<const double> alpha,
                        std::span<const double> beta);

/// Basis of {q : q . gamma^r = 0 for all r}.
std::vector<std::vector<double>> conservation_laws(const StoichMatrix& gamma);

/// prod_i c_i^gamma_i with 0^0 = 1.
double monomial(std::span<const double> c, std::span<const double> gamma);

}  // namespace edpflow
