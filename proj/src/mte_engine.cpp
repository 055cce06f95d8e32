#include "mte/mte_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "mte/errors.hpp"
#include "mte/omega_code.hpp"
#include "mte/summation.hpp"

namespace mte {

Trajectory simulate(const PrimePrior& prior, std::uint64_t steps, Rng& rng, std::uint64_t thin) {
  if (steps == 0) throw DomainError("simulate: T >= 1 required");
  if (thin == 0) throw DomainError("simulate: thin >= 1 required");
  Trajectory traj;
  traj.seed = rng.seed();
  traj.prior_id = prior.id();
  traj.steps.reserve(steps / thin + 1);

  BigNat state(1);
  CompensatedSum log2_state;
  std::uint64_t sum_len_p = 0;
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const std::uint64_t p = prior.sample(rng);
    state *= p;
    log2_state += std::log2(static_cast<double>(p));
    sum_len_p += omega_len(p);
    if (t % thin == 0 || t == steps) {
      traj.steps.push_back(TrajectoryStep{t, p, log2_state.value(), omega_len(state), sum_len_p});
    }
  }
  traj.final_state = std::move(state);
  return traj;
}

std::vector<Trajectory> simulate_many(const PrimePrior& prior, std::uint64_t steps,
                                      std::uint64_t master_seed, std::uint64_t count,
                                      std::uint64_t thin, unsigned workers) {
  std::vector<Trajectory> out(count);
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::uint64_t k = next++; k < count; k = next++) {
      try {
        Rng rng(derive_seed(master_seed, k));
        out[k] = simulate(prior, steps, rng, thin);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<AveragingRow> averaging_series(const Trajectory& traj) {
  if (traj.steps.empty()) throw DomainError("averaging_series: empty trajectory");
  std::vector<AveragingRow> rows;
  rows.reserve(traj.steps.size());
  for (const auto& s : traj.steps) {
    const auto t = static_cast<double>(s.t);
    rows.push_back(AveragingRow{s.t, static_cast<double>(s.len_x) / t, static_cast<double>(s.sum_len_p) / t,
                                s.log2_x / t});
  }
  return rows;
}

double growth_rate(const Trajectory& traj) {
  if (traj.steps.empty()) throw DomainError("growth_rate: empty trajectory");
  const auto& last = traj.steps.back();
  return last.log2_x * std::log(2.0) / static_cast<double>(last.t);
}

std::vector<BigNat> gap_samples(const PrimePrior& prior, const BigNat& x, std::uint64_t count, Rng& rng) {
  if (x.is_zero()) throw DomainError("gap_samples: x >= 1 required");
  if (count == 0) throw DomainError("gap_samples: N >= 1 required");
  std::vector<BigNat> gaps;
  gaps.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    BigNat g = x;
    g *= prior.sample(rng) - 1;
    gaps.push_back(std::move(g));
  }
  return gaps;
}

}  // namespace mte
