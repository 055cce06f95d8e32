#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mte/rng.hpp"

namespace mte {

struct PriorMoments {
  double mean_log2_p = 0.0;  // bits
  double mean_len_p = 0.0;   // bits
  double mean_ln_p = 0.0;    // nats
};

/// Truncated Gibbs prior on primes: pi_p proportional to 2^(-beta * ell_omega(p)) for p <= p_max.
///
/// Immutable after construction. Besides the masses it keeps prefix sums (for sampling)
/// and suffix sums accumulated from the far tail inward, so tail_mass() keeps full
/// relative precision down to the smallest representable masses.
class PrimePrior {
 public:
  /// beta > 0, p_max >= 2. Throws DomainError otherwise, or if a weight underflows.
  static PrimePrior build(double beta, std::uint64_t p_max);
  /// Same, reusing an already sieved ascending prime list (all primes <= p_max).
  static PrimePrior build(double beta, std::uint64_t p_max, std::span<const std::uint64_t> primes);

  /// Round-trips the JSON shape {beta, p_max, primes, masses}.
  static PrimePrior from_json(std::string_view text);
  std::string to_json() const;

  double beta() const { return beta_; }
  std::uint64_t p_max() const { return p_max_; }
  std::span<const std::uint64_t> primes() const { return primes_; }
  std::span<const double> masses() const { return masses_; }
  /// log2 of the pre-normalization weight sum sum_p 2^(-beta ell(p)).
  double log_norm() const { return log_norm_; }
  std::string id() const;

  /// pi_p, or 0 when p is not in the support.
  double mass(std::uint64_t p) const;
  /// Exact sum of pi_p over support primes p > y.
  double tail_mass(double y) const;
  std::uint64_t sample(Rng& rng) const;
  PriorMoments moments() const;

  /// Estimated share of the untruncated weight lying beyond p_max, from prime counts
  /// approximated by the logarithmic integral per bit-length class. Diagnostic only.
  double truncation_bias() const;

 private:
  PrimePrior() = default;
  void finish();

  double beta_ = 1.0;
  std::uint64_t p_max_ = 2;
  double log_norm_ = 0.0;
  std::vector<std::uint64_t> primes_;
  std::vector<double> masses_;
  std::vector<double> cumulative_;  // cumulative_[i] = sum_{j<=i} masses_[j]
  std::vector<double> suffix_;      // suffix_[i] = sum_{j>=i} masses_[j]; one extra 0 at the end
};

/// Convenience wrappers with the operation names used throughout the docs.
inline PrimePrior build_prior(double beta, std::uint64_t p_max) { return PrimePrior::build(beta, p_max); }
inline double prior_mass(const PrimePrior& prior, std::uint64_t p) { return prior.mass(p); }
inline std::uint64_t sample_prime(const PrimePrior& prior, Rng& rng) { return prior.sample(rng); }
inline double tail_mass(const PrimePrior& prior, double y) { return prior.tail_mass(y); }
inline PriorMoments moments(const PrimePrior& prior) { return prior.moments(); }

/// E[ln P] under the prior truncated at each cutoff. With beta = 1 the sequence keeps
/// growing (the first log-moment diverges); with beta > 1 it stabilizes.
std::vector<double> divergence_diagnostic(double beta, std::span<const std::uint64_t> cutoffs);

}  // namespace mte
