#pragma once

// Independent reference implementations used by the tests. Kept deliberately naive.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace oracle {

inline std::string binary(std::uint64_t n) {
  std::string s;
  while (n > 0) {
    s.insert(s.begin(), static_cast<char>('0' + (n & 1)));
    n >>= 1;
  }
  return s;
}

inline std::string binary(const mpz_class& n) { return n.get_str(2); }

// Prepend the binary form of n, recurse on (its length - 1), stop at 1.
inline std::string omega_encode(mpz_class n) {
  std::string code = "0";
  while (n > 1) {
    const std::string b = binary(n);
    code = b + code;
    n = static_cast<unsigned long>(b.size() - 1);
  }
  return code;
}

inline std::uint64_t omega_len(std::uint64_t n) { return omega_encode(mpz_class(static_cast<unsigned long>(n))).size(); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 2; k <= n; ++k) {
    if (is_prime(k)) out.push_back(k);
  }
  return out;
}

}  // namespace oracle
