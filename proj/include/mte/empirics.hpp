#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mte/rng.hpp"

namespace mte {

/// Sizes parsed from a dataset plus the number of entries that were dropped.
struct IngestResult {
  std::vector<std::uint64_t> sizes;
  std::uint64_t skipped = 0;
};

/// Debian Packages index: one size per stanza carrying a Size field. Stanzas without
/// one, and Size: 0, are skipped and counted.
IngestResult ingest_debian(std::string_view text);

struct NamedDocument {
  std::string name;
  std::string text;
};

/// Package-index JSON documents; every release file entry with a numeric "size".
IngestResult ingest_pypi(std::span<const NamedDocument> docs);

/// One decimal size per line; blank lines ignored, zeros skipped.
IngestResult ingest_plain(std::string_view text);

/// Observed ell_omega bins with counts and normalized masses.
struct CodelengthHistogram {
  std::map<std::uint64_t, std::uint64_t> bins;
  std::uint64_t total = 0;

  std::vector<std::uint64_t> lengths() const;
  std::vector<double> probs() const;
};

/// Throws DomainError when no size >= 1 remains.
CodelengthHistogram codelength_histogram(std::span<const std::uint64_t> sizes);

/// A pmf over the observed codelengths, aligned with CodelengthHistogram::lengths().
struct LengthPmf {
  std::vector<std::uint64_t> lengths;
  std::vector<double> probs;
};

struct ScaledFit {
  double a = 0.0;  // per-bit decay, natural-log scale
  double c = 0.0;
  double residual = 0.0;  // RMS of the regression residuals
};

LengthPmf observed_pmf(const CodelengthHistogram& hist);
LengthPmf model_uniform(const CodelengthHistogram& hist);
LengthPmf model_pure_omega(const CodelengthHistogram& hist);

/// OLS of -ln P_obs(l) on l over observed bins. count_weighted switches to
/// count-weighted least squares. Throws FitError with fewer than two bins.
ScaledFit fit_scaled(const CodelengthHistogram& hist, bool count_weighted = false);
LengthPmf model_scaled(const CodelengthHistogram& hist, const ScaledFit& fit);

/// KL(P || Q) in nats (bits when in_bits). Throws DomainError if Q = 0 where P > 0.
double kl_divergence(std::span<const double> p, std::span<const double> q, bool in_bits = false);

struct GibbsAlignment {
  double alignment = 0.0;  // bits; D(mu || 2^-ell)
  double entropy = 0.0;    // bits
  double mean_len = 0.0;   // bits
};

/// Finite-support mu given as (n, mass) pairs with n >= 1.
GibbsAlignment gibbs_alignment(std::span<const std::pair<std::uint64_t, double>> mu);

struct FitReport {
  CodelengthHistogram hist;
  LengthPmf observed, uniform, pure, scaled;
  ScaledFit fit;
  double kl_uniform = 0.0;
  double kl_pure = 0.0;
  double kl_scaled = 0.0;
  std::uint64_t skipped = 0;
  bool in_bits = false;
};

/// Histogram, the three models and their KL divergences from the observed law.
FitReport fit_report(const IngestResult& data, bool in_bits = false, bool count_weighted = false);
std::string fit_report_json(const FitReport& report);
std::string fit_report_csv(const FitReport& report);

/// Sizes whose codelength histogram follows P(l) ∝ exp(-a l) over the realizable
/// codelengths of bit lengths [min_bits, max_bits]; sizes are uniform within a class.
std::vector<std::uint64_t> synthetic_sizes(double a, std::uint64_t count, unsigned min_bits,
                                           unsigned max_bits, Rng& rng);

}  // namespace mte
