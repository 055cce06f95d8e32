#include "mte/ptm_ensemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <span>

#include "mte/errors.hpp"
#include "mte/primes.hpp"
#include "mte/summation.hpp"

namespace mte {
namespace {

constexpr double kSumTolerance = 1e-12;

enum class Symbol { zero, one, halt };

Symbol emit(const PtmParams& params, Rng& rng) {
  const double u = rng.uniform01();
  if (u < params.p0) return Symbol::zero;
  if (u < params.p0 + params.p1) return Symbol::one;
  return Symbol::halt;
}

std::size_t pick(std::span<const double> weights, double u) {
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

// Weight of the canonical representation of p, without the common p_S/(1-p0) factor.
double canonical_weight(const PtmParams& params, std::uint64_t p) {
  const int bits = std::bit_width(p);
  const int ones = std::popcount(p);
  return std::exp(ones * std::log(params.p1) + (bits - ones) * std::log(params.p0));
}

bool is_prime_output(const BigNat& n) {
  if (n < BigNat(2)) return false;
  return n.is_probable_prime();
}

}  // namespace

PtmParams PtmParams::make(double p0, double p1, double ps) {
  for (double p : {p0, p1, ps}) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("PTM probabilities must lie strictly inside (0, 1)");
  }
  if (std::fabs(p0 + p1 + ps - 1.0) > kSumTolerance) throw DomainError("PTM probabilities must sum to 1");
  return PtmParams{p0, p1, ps};
}

Ensemble Ensemble::make(std::vector<PtmParams> components, std::vector<double> weights) {
  if (components.empty()) throw DomainError("ensemble needs at least one component");
  if (components.size() != weights.size()) throw DomainError("ensemble: one weight per component");
  CompensatedSum total;
  for (double w : weights) {
    // Zero weights are accepted so that degenerate mixtures can be expressed; they are
    // never selected.
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("ensemble weights must be nonnegative");
    total += w;
  }
  if (std::fabs(total.value() - 1.0) > kSumTolerance) throw DomainError("ensemble weights must sum to 1");
  for (const auto& c : components) PtmParams::make(c.p0, c.p1, c.ps);
  return Ensemble{std::move(components), std::move(weights)};
}

std::size_t Ensemble::sample_index(Rng& rng) const { return pick(weights, rng.uniform01()); }

double PrimeLaw::mass(std::uint64_t p) const {
  const auto it = std::lower_bound(primes.begin(), primes.end(), p);
  if (it == primes.end() || *it != p) return 0.0;
  return masses[static_cast<std::size_t>(it - primes.begin())];
}

BitString ptm_run(const PtmParams& params, Rng& rng, std::uint64_t max_steps) {
  if (max_steps == 0) throw DomainError("ptm_run: max_steps >= 1 required");
  BitString out;
  for (std::uint64_t step = 0; step < max_steps; ++step) {
    switch (emit(params, rng)) {
      case Symbol::zero: out.push_back(false); break;
      case Symbol::one: out.push_back(true); break;
      case Symbol::halt: return out;
    }
  }
  throw AbortError("ptm_run: no halt symbol within the step budget", max_steps);
}

BigNat bin_value(const BitString& bits) {
  std::size_t first = 0;
  while (first < bits.size() && !bits[first]) ++first;
  const std::size_t width = bits.size() - first;
  if (width == 0) return BigNat(0);
  if (width <= 64) {
    std::uint64_t v = 0;
    for (std::size_t i = first; i < bits.size(); ++i) v = (v << 1) | (bits[i] ? 1U : 0U);
    return BigNat(v);
  }
  std::string digits;
  digits.reserve(width);
  for (std::size_t i = first; i < bits.size(); ++i) digits.push_back(bits[i] ? '1' : '0');
  return BigNat(mpz_class(digits, 2));
}

double string_prob(const PtmParams& params, const BitString& bits) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) ones += bits[i] ? 1 : 0;
  const std::size_t zeros = bits.size() - ones;
  return params.ps * std::pow(params.p1, static_cast<double>(ones)) *
         std::pow(params.p0, static_cast<double>(zeros));
}

double integer_prob_exact(const PtmParams& params, const BigNat& n) {
  // Every padding 0^k x of the canonical string x has the same value; the paddings sum
  // to the geometric factor 1/(1 - p0). For n = 0 the canonical string is empty.
  const double pad = 1.0 / (1.0 - params.p0);
  if (n.is_zero()) return params.ps * pad;
  const auto bits = static_cast<double>(n.bit_length());
  const auto ones = static_cast<double>(mpz_popcount(n.raw().get_mpz_t()));
  return params.ps * std::pow(params.p1, ones) * std::pow(params.p0, bits - ones) * pad;
}

PrimeLaw prime_conditional_exact(const PtmParams& params, std::uint64_t p_max) {
  PrimeLaw law;
  law.primes = sieve_primes(p_max);
  law.masses.resize(law.primes.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < law.primes.size(); ++i) {
    law.masses[i] = canonical_weight(params, law.primes[i]);
    total += law.masses[i];
  }
  const double z = total.value();
  for (double& m : law.masses) m /= z;
  law.remainder_bound = std::pow(1.0 - params.ps, static_cast<double>(std::bit_width(p_max) + 1));
  return law;
}

BigNat sample_prime_filtered(const PtmParams& params, Rng& rng, std::uint64_t max_attempts,
                             std::uint64_t max_steps) {
  for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
    BigNat value = bin_value(ptm_run(params, rng, max_steps));
    if (is_prime_output(value)) return value;
  }
  throw AbortError("sample_prime_filtered: no prime output", max_attempts);
}

PrimeLaw mixture_law(const Ensemble& ens, std::uint64_t p_max) {
  PrimeLaw out;
  for (std::size_t i = 0; i < ens.components.size(); ++i) {
    PrimeLaw component = prime_conditional_exact(ens.components[i], p_max);
    if (out.primes.empty()) {
      out.primes = std::move(component.primes);
      out.masses.assign(out.primes.size(), 0.0);
    }
    for (std::size_t j = 0; j < out.masses.size(); ++j) out.masses[j] += ens.weights[i] * component.masses[j];
    out.remainder_bound += ens.weights[i] * component.remainder_bound;
  }
  return out;
}

BigNat ensemble_sample(const Ensemble& ens, EnsembleMode mode, Rng& rng, std::uint64_t max_attempts) {
  switch (mode) {
    case EnsembleMode::A: {
      const std::size_t i = ens.sample_index(rng);
      return sample_prime_filtered(ens.components[i], rng, max_attempts);
    }
    case EnsembleMode::B: {
      // The index comes from its own stream, fixed before any run is observed.
      Rng index_stream(derive_seed(rng(), 0xB));
      const std::size_t i = ens.sample_index(index_stream);
      return sample_prime_filtered(ens.components[i], rng, max_attempts);
    }
    case EnsembleMode::C: {
      // One machine: its first internal draw sets a latent register that selects the
      // emission probabilities. The register is part of the machine state and survives
      // the restart after a non-prime output.
      const std::size_t latent = pick(ens.weights, rng.uniform01());
      const PtmParams& active = ens.components[latent];
      for (std::uint64_t attempt = 0; attempt < max_attempts; ++attempt) {
        BitString tape;
        for (std::uint64_t step = 0;; ++step) {
          if (step == kDefaultMaxSteps) throw AbortError("latent-choice machine: no halt symbol", step);
          const Symbol s = emit(active, rng);
          if (s == Symbol::halt) break;
          tape.push_back(s == Symbol::one);
        }
        BigNat value = bin_value(tape);
        if (is_prime_output(value)) return value;
      }
      throw AbortError("latent-choice machine: no prime output", max_attempts);
    }
  }
  throw DomainError("ensemble_sample: unknown mode");
}

}  // namespace mte
