#include "mte/primes.hpp"

#include <algorithm>
#include <cmath>

#include "mte/errors.hpp"

namespace mte {

std::vector<std::uint64_t> sieve_primes(std::uint64_t p_max) {
  if (p_max < 2) throw DomainError("sieve_primes: p_max >= 2 required");

  // Base primes up to sqrt(p_max) with a plain sieve.
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(p_max)));
  while (root * root > p_max) --root;
  while ((root + 1) * (root + 1) <= p_max) ++root;
  std::vector<bool> small(root + 1, true);
  std::vector<std::uint64_t> base;
  for (std::uint64_t i = 3; i <= root; i += 2) {
    if (!small[i]) continue;
    base.push_back(i);
    for (std::uint64_t j = i * i; j <= root; j += 2 * i) small[j] = false;
  }

  std::vector<std::uint64_t> primes{2};
  if (p_max > 2) {
    const double estimate = static_cast<double>(p_max) / std::log(static_cast<double>(p_max));
    primes.reserve(static_cast<std::size_t>(estimate * 1.2) + 16);
  }

  // Odd-only segments: index i in a segment starting at odd `lo` stands for lo + 2i.
  constexpr std::uint64_t kSegment = 1 << 18;
  std::vector<char> composite(kSegment);
  for (std::uint64_t lo = 3; lo <= p_max; lo += 2 * kSegment) {
    const std::uint64_t hi = std::min(p_max, lo + 2 * kSegment - 1);
    const std::uint64_t len = (hi - lo) / 2 + 1;
    std::fill(composite.begin(), composite.begin() + static_cast<std::ptrdiff_t>(len), 0);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      if (start % 2 == 0) start += p;
      for (std::uint64_t j = (start - lo) / 2; j < len; j += p) composite[j] = 1;
    }
    for (std::uint64_t j = 0; j < len; ++j) {
      if (!composite[j]) primes.push_back(lo + 2 * j);
    }
  }
  return primes;
}

}  // namespace mte
