#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mte/rng.hpp"

namespace mte {

/// One pass/fail line of a reproduction suite.
struct Check {
  std::string name;
  double value = 0.0;
  std::string requirement;
  bool passed = false;
};

struct SuiteResult {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::string report_json;                   // deterministic; no timestamps
  std::map<std::string, std::string> files;  // file name -> contents (plot-ready CSVs)

  bool passed() const;
};

/// Sizes of the reproduction experiments. Defaults are the acceptance settings.
struct ReproduceOptions {
  std::uint64_t seed = kDefaultSeed;
  // averaging
  double averaging_beta = 2.0;
  std::uint64_t averaging_p_max = 1'000'000;
  std::uint64_t averaging_steps = 10'000;
  std::uint64_t averaging_seeds = 32;
  unsigned workers = 0;
  // tails
  std::uint64_t gap_samples = 1'000'000;
  std::uint64_t gap_p_max = 1'000'000;
  double gap_beta = 2.0;
  std::uint64_t slope_p_max = 10'000'000;
  // empirics-synthetic
  std::uint64_t synthetic_count = 50'000;
  double synthetic_a = 0.45;
  unsigned synthetic_min_bits = 5;
  unsigned synthetic_max_bits = 17;
};

SuiteResult reproduce_averaging(const ReproduceOptions& opt);
SuiteResult reproduce_tails(const ReproduceOptions& opt);
SuiteResult reproduce_empirics_synthetic(const ReproduceOptions& opt);

/// Dispatch by name: "tails", "averaging" or "empirics-synthetic". Throws DomainError
/// for anything else.
SuiteResult reproduce(const std::string& suite, const ReproduceOptions& opt);

/// Writes report.json plus the CSVs into dir (created if missing).
void write_suite(const SuiteResult& result, const std::filesystem::path& dir);

}  // namespace mte
