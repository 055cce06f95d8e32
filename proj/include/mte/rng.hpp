#pragma once

#include <cstdint>
#include <random>

namespace mte {

inline constexpr std::uint64_t kDefaultSeed = 20250101;

/// splitmix64 finalizer; maps (master seed, task index) to independent stream seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded random stream. Owned by exactly one worker.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t operator()() { return engine_(); }
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }

  /// Uniform in [0, 1) with 53 random bits. Platform independent, unlike
  /// std::uniform_real_distribution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace mte
