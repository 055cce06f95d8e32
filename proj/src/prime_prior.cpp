#include "mte/prime_prior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "mte/errors.hpp"
#include "mte/omega_code.hpp"
#include "mte/primes.hpp"
#include "mte/summation.hpp"

namespace mte {
namespace {

// ell_omega(2) = ell_omega(3) = 3 is the smallest codelength on the primes; weights are
// taken relative to it so that large beta cannot overflow.
constexpr double kMinPrimeLen = 3.0;

void check_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("prime prior: beta must be > 0");
}

}  // namespace

PrimePrior PrimePrior::build(double beta, std::uint64_t p_max) {
  check_beta(beta);
  if (p_max < 2) throw DomainError("prime prior: p_max >= 2 required");
  const auto primes = sieve_primes(p_max);
  return build(beta, p_max, primes);
}

PrimePrior PrimePrior::build(double beta, std::uint64_t p_max, std::span<const std::uint64_t> primes) {
  check_beta(beta);
  if (p_max < 2) throw DomainError("prime prior: p_max >= 2 required");
  PrimePrior prior;
  prior.beta_ = beta;
  prior.p_max_ = p_max;
  const auto end = std::upper_bound(primes.begin(), primes.end(), p_max);
  prior.primes_.assign(primes.begin(), end);
  if (prior.primes_.empty() || prior.primes_.front() != 2) {
    throw DomainError("prime prior: prime list must start at 2");
  }

  std::vector<double> weights(prior.primes_.size());
  CompensatedSum z;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double len = static_cast<double>(omega_len(prior.primes_[i]));
    weights[i] = std::exp2(-beta * (len - kMinPrimeLen));
    if (weights[i] == 0.0) {
      throw DomainError("prime prior: weight of " + std::to_string(prior.primes_[i]) +
                        " underflows in double precision; lower beta or p_max");
    }
    z += weights[i];
  }
  const double total = z.value();
  prior.log_norm_ = std::log2(total) - beta * kMinPrimeLen;
  prior.masses_.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) prior.masses_[i] = weights[i] / total;
  prior.finish();
  return prior;
}

void PrimePrior::finish() {
  const std::size_t n = masses_.size();
  cumulative_.resize(n);
  CompensatedSum running;
  for (std::size_t i = 0; i < n; ++i) {
    running += masses_[i];
    cumulative_[i] = running.value();
  }
  suffix_.assign(n + 1, 0.0);
  CompensatedSum tail;
  for (std::size_t i = n; i-- > 0;) {
    tail += masses_[i];
    suffix_[i] = tail.value();
  }
}

PrimePrior PrimePrior::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prior JSON: ") + e.what(), 0);
  }
  PrimePrior prior;
  try {
    prior.beta_ = doc.at("beta").get<double>();
    prior.p_max_ = doc.at("p_max").get<std::uint64_t>();
    prior.primes_ = doc.at("primes").get<std::vector<std::uint64_t>>();
    prior.masses_ = doc.at("masses").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("prior JSON: ") + e.what(), 0);
  }
  check_beta(prior.beta_);
  if (prior.primes_.empty() || prior.primes_.size() != prior.masses_.size()) {
    throw ParseError("prior JSON: primes and masses must be nonempty and aligned", 0);
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < prior.primes_.size(); ++i) {
    if (i > 0 && prior.primes_[i] <= prior.primes_[i - 1]) {
      throw ParseError("prior JSON: primes must be strictly increasing", 0);
    }
    if (!(prior.masses_[i] > 0.0)) throw ParseError("prior JSON: masses must be positive", 0);
    total += prior.masses_[i];
  }
  if (std::fabs(total.value() - 1.0) > 1e-9) throw ParseError("prior JSON: masses must sum to 1", 0);
  CompensatedSum z;
  for (std::uint64_t p : prior.primes_) {
    z += std::exp2(-prior.beta_ * (static_cast<double>(omega_len(p)) - kMinPrimeLen));
  }
  prior.log_norm_ = std::log2(z.value()) - prior.beta_ * kMinPrimeLen;
  prior.finish();
  return prior;
}

std::string PrimePrior::to_json() const {
  nlohmann::json doc;
  doc["beta"] = beta_;
  doc["p_max"] = p_max_;
  doc["primes"] = primes_;
  doc["masses"] = masses_;
  return doc.dump();
}

std::string PrimePrior::id() const {
  std::ostringstream os;
  os << "beta=" << beta_ << ",p_max=" << p_max_;
  return os.str();
}

double PrimePrior::mass(std::uint64_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) return 0.0;
  return masses_[static_cast<std::size_t>(it - primes_.begin())];
}

double PrimePrior::tail_mass(double y) const {
  if (std::isnan(y)) throw DomainError("tail_mass: y is NaN");
  if (y < static_cast<double>(primes_.front())) return 1.0;
  if (y >= static_cast<double>(primes_.back())) return 0.0;
  // Support points are integers, so p > y iff p > floor(y).
  const auto threshold = static_cast<std::uint64_t>(std::floor(y));
  const auto it = std::upper_bound(primes_.begin(), primes_.end(), threshold);
  return suffix_[static_cast<std::size_t>(it - primes_.begin())];
}

std::uint64_t PrimePrior::sample(Rng& rng) const {
  const double u = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), primes_.size() - 1);
  return primes_[idx];
}

PriorMoments PrimePrior::moments() const {
  CompensatedSum log2_sum, len_sum, ln_sum;
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    const double p = static_cast<double>(primes_[i]);
    log2_sum += masses_[i] * std::log2(p);
    len_sum += masses_[i] * static_cast<double>(omega_len(primes_[i]));
    ln_sum += masses_[i] * std::log(p);
  }
  return PriorMoments{log2_sum.value(), len_sum.value(), ln_sum.value()};
}

double PrimePrior::truncation_bias() const {
  // Weights relative to 2^(-beta*3) as in build(); the truncated sum is 2^(log_norm + 3 beta).
  const double truncated = std::exp2(log_norm_ + beta_ * kMinPrimeLen);
  CompensatedSum beyond;
  const auto first_bits = static_cast<unsigned>(std::bit_width(p_max_));
  for (unsigned b = first_bits; b <= 1000; ++b) {
    // Primes in [lo, hi) ~ (hi - lo) / ln(sqrt(lo * hi)); evaluated in log space.
    const double log2_lo = (b == first_bits) ? std::log2(static_cast<double>(p_max_) + 1.0) : b - 1.0;
    const double log2_hi = b;
    if (log2_hi <= log2_lo) continue;
    const double log2_width = log2_hi + std::log2(1.0 - std::exp2(log2_lo - log2_hi));
    const double ln_mid = 0.5 * (log2_lo + log2_hi) * std::log(2.0);
    const double log2_weight = -beta_ * (static_cast<double>(omega_len_for_bit_length(b)) - kMinPrimeLen);
    const double term = std::exp2(log2_width + log2_weight) / ln_mid;
    beyond += term;
    if (b > first_bits + 8 && term < 1e-18 * (truncated + beyond.value())) break;
  }
  const double tail = beyond.value();
  return tail / (truncated + tail);
}

std::vector<double> divergence_diagnostic(double beta, std::span<const std::uint64_t> cutoffs) {
  check_beta(beta);
  if (cutoffs.empty()) return {};
  for (std::size_t i = 0; i < cutoffs.size(); ++i) {
    if (cutoffs[i] < 2) throw DomainError("divergence_diagnostic: cutoffs must be >= 2");
    if (i > 0 && cutoffs[i] < cutoffs[i - 1]) throw DomainError("divergence_diagnostic: cutoffs must ascend");
  }
  const auto primes = sieve_primes(cutoffs.back());
  std::vector<double> out;
  out.reserve(cutoffs.size());
  CompensatedSum z, weighted;
  std::size_t i = 0;
  for (std::uint64_t cutoff : cutoffs) {
    for (; i < primes.size() && primes[i] <= cutoff; ++i) {
      const double w = std::exp2(-beta * (static_cast<double>(omega_len(primes[i])) - kMinPrimeLen));
      z += w;
      weighted += w * std::log(static_cast<double>(primes[i]));
    }
    out.push_back(weighted.value() / z.value());
  }
  return out;
}

}  // namespace mte
