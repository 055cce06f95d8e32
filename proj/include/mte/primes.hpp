#pragma once

#include <cstdint>
#include <vector>

namespace mte {

/// All primes in [2, p_max], ascending. Segmented odd-only sieve of Eratosthenes.
/// Throws DomainError for p_max < 2.
std::vector<std::uint64_t> sieve_primes(std::uint64_t p_max);

}  // namespace mte
