#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mte/prime_prior.hpp"

namespace mte {

/// Empirical survival function P(X > v) of a sample.
class Ccdf {
 public:
  /// Throws DomainError on empty input.
  static Ccdf from_samples(std::vector<double> samples);

  double survival(double v) const;
  std::size_t size() const { return sorted_.size(); }
  std::span<const double> sorted() const { return sorted_; }

  /// Distinct sample values and the survival level at each of them.
  std::vector<std::pair<double, double>> levels() const;

 private:
  std::vector<double> sorted_;
};

/// Least-squares slope of ln s against ln u over points with lo <= u <= hi and s > 0.
/// Needs at least 10 distinct survival levels in the window; throws FitError otherwise.
double loglog_slope(std::span<const double> u, std::span<const double> s, double lo, double hi);
double loglog_slope(const Ccdf& ccdf, double lo, double hi);

/// Hill tail-index estimate 1/gamma from the top k order statistics. Returns +infinity
/// when gamma = 0. Throws DomainError for nonpositive samples or k outside [1, n).
double hill_estimator(std::span<const double> samples, std::size_t k);

/// P(G > u | X = x) = tail_mass(1 + u/x).
double conditional_gap_tail_exact(const PrimePrior& prior, double x, double u);

struct MixingMeasure {
  std::vector<std::pair<double, double>> atoms;  // (x > 0, weight)

  static MixingMeasure make(std::vector<std::pair<double, double>> atoms);
  double sample(Rng& rng) const;
};

/// sum over atoms of weight * P(G > u | X = x).
double mixture_gap_tail(const PrimePrior& prior, const MixingMeasure& nu, double u);

/// Dvoretzky-Kiefer-Wolfowitz half-width for n samples at confidence 1 - alpha.
double dkw_epsilon(std::size_t n, double alpha);

/// Empirical vs exact survival at a set of evaluation points.
struct DkwComparison {
  double sup_distance = 0.0;
  double epsilon = 0.0;
  std::uint64_t violations = 0;  // points where |empirical - exact| > epsilon
  std::uint64_t points = 0;
};

DkwComparison dkw_compare(const Ccdf& empirical, std::span<const double> points,
                          const std::function<double(double)>& exact, double alpha);

/// Every support value x * (p - 1) of the gap law for the given atoms, sorted and unique.
/// The empirical and exact survival functions only jump at these points.
std::vector<double> gap_support_points(const PrimePrior& prior, std::span<const double> xs);

/// How the slowly varying part of the gap survival is divided out before fitting.
enum class SlowVariation {
  none,
  log_power,    // divide by (ln y)^-beta
  omega_exact,  // divide by y^beta 2^(-beta ell_omega(floor y)) / ln y
};

/// Slowly varying factor at y = 1 + u/x (1 for `none`).
double slow_variation_factor(SlowVariation mode, double beta, double y);

struct SlopeFit {
  double slope = 0.0;
  double u_lo = 0.0;
  double u_hi = 0.0;
  double deviation_from_proof = 0.0;      // slope - (1 - beta)
  double deviation_from_statement = 0.0;  // slope - (-beta)
};

/// Regular-variation slope of the exact conditional gap survival over [u_lo, u_hi],
/// sampled on a log grid, after removing the chosen slowly varying factor.
SlopeFit regular_variation_slope(const PrimePrior& prior, double x, double u_lo, double u_hi,
                                 SlowVariation mode, std::size_t grid_points = 200);

/// Default window: one decade ending where the exact survival first drops below 100/n.
std::pair<double, double> default_fit_window(const PrimePrior& prior, double x, std::size_t n);

}  // namespace mte
