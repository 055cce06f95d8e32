#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mte/bignat.hpp"
#include "mte/prime_prior.hpp"
#include "mte/rng.hpp"

namespace mte {

struct TrajectoryStep {
  std::uint64_t t = 0;
  std::uint64_t prime = 0;     // P_t
  double log2_x = 0.0;         // sum_{i<=t} log2 P_i (compensated)
  std::uint64_t len_x = 0;     // ell_omega of the exact state X_t
  std::uint64_t sum_len_p = 0; // sum_{i<=t} ell_omega(P_i)
};

/// Sample path of X_{t+1} = X_t * P_{t+1}, X_0 = 1. Only every thin-th step and the
/// final step are recorded; the exact final state is kept.
struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::uint64_t seed = 0;
  std::string prior_id;
  BigNat final_state{1};
};

/// Runs T steps with the given stream. thin >= 1, T >= 1.
Trajectory simulate(const PrimePrior& prior, std::uint64_t steps, Rng& rng, std::uint64_t thin = 100);

/// K independent trajectories; trajectory k uses seed derive_seed(master_seed, k). Output
/// is ordered by k and identical for every worker count.
std::vector<Trajectory> simulate_many(const PrimePrior& prior, std::uint64_t steps,
                                      std::uint64_t master_seed, std::uint64_t count,
                                      std::uint64_t thin = 100, unsigned workers = 0);

struct AveragingRow {
  std::uint64_t t = 0;
  double len_x_per_t = 0.0;
  double mean_len_p = 0.0;  // (1/t) sum ell_omega(P_i)
  double log2_x_per_t = 0.0;
};

std::vector<AveragingRow> averaging_series(const Trajectory& traj);

/// ln(X_T) / T in nats per step.
double growth_rate(const Trajectory& traj);

/// N i.i.d. gaps x * (P - 1) conditional on the current state x.
std::vector<BigNat> gap_samples(const PrimePrior& prior, const BigNat& x, std::uint64_t count, Rng& rng);

}  // namespace mte
