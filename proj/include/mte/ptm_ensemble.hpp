#pragma once

#include <cstdint>
#include <vector>

#include "mte/bignat.hpp"
#include "mte/bitstring.hpp"
#include "mte/rng.hpp"

namespace mte {

inline constexpr std::uint64_t kDefaultMaxSteps = 1'000'000;
inline constexpr std::uint64_t kDefaultMaxAttempts = 1'000'000;

/// Three-symbol emitter: 0 and 1 go to the tape, S halts without being written.
struct PtmParams {
  double p0 = 0.0;
  double p1 = 0.0;
  double ps = 0.0;

  /// Each probability strictly inside (0, 1), summing to 1 within 1e-12.
  static PtmParams make(double p0, double p1, double ps);
};

/// Finite mixture of emitters with strictly positive weights summing to 1.
struct Ensemble {
  std::vector<PtmParams> components;
  std::vector<double> weights;

  static Ensemble make(std::vector<PtmParams> components, std::vector<double> weights);
  std::size_t sample_index(Rng& rng) const;
};

/// Probability mass function over an ascending list of primes.
struct PrimeLaw {
  std::vector<std::uint64_t> primes;
  std::vector<double> masses;
  /// Upper bound on the unconditional probability of outputs longer than the
  /// bit length of p_max (the part the truncation cannot see).
  double remainder_bound = 0.0;

  double mass(std::uint64_t p) const;
};

/// Emits i.i.d. symbols until S. Throws AbortError after max_steps emissions.
BitString ptm_run(const PtmParams& params, Rng& rng, std::uint64_t max_steps = kDefaultMaxSteps);

/// Base-2 value; the empty string maps to 0 and leading zeros collapse.
BigNat bin_value(const BitString& bits);

/// p_S * prod p_{x_i}: the string is produced and the machine halts right after.
double string_prob(const PtmParams& params, const BitString& bits);

/// Probability that bin(output) = n, summing over every leading-zero padding.
double integer_prob_exact(const PtmParams& params, const BigNat& n);

/// Prime-filtered law restricted to primes <= p_max and renormalized.
PrimeLaw prime_conditional_exact(const PtmParams& params, std::uint64_t p_max);

/// Rejection-samples runs until bin(output) is prime.
BigNat sample_prime_filtered(const PtmParams& params, Rng& rng,
                             std::uint64_t max_attempts = kDefaultMaxAttempts,
                             std::uint64_t max_steps = kDefaultMaxSteps);

/// sum_i w_i * prime_conditional_exact(component_i, p_max).
PrimeLaw mixture_law(const Ensemble& ens, std::uint64_t p_max);

enum class EnsembleMode {
  A,  // draw a component, then sample its prime-filtered law
  B,  // index pre-randomized on a separate stream, then consecutive runs of that machine
  C,  // one composite machine whose latent component choice is part of its state
};

BigNat ensemble_sample(const Ensemble& ens, EnsembleMode mode, Rng& rng,
                       std::uint64_t max_attempts = kDefaultMaxAttempts);

}  // namespace mte
