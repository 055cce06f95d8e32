#pragma once

#include <cstddef>
#include <cstdint>

#include "mte/bignat.hpp"
#include "mte/bitstring.hpp"

namespace mte {

// Elias omega code. Codewords are written as the recursion groups from the
// innermost (shortest) to the outermost (n itself), each group MSB first, and
// terminated by a single '0':
//
//   1 -> 0,  2 -> 10 0,  4 -> 10 100 0,  16 -> 10 100 10000 0
//
// Lengths follow n_0 = n, n_{j+1} = floor(log2 n_j), stopping at 1:
//   ell(n) = 1 + sum_j (floor(log2 n_j) + 1).

BitString omega_encode(const BigNat& n);

struct OmegaDecoded {
  BigNat value;
  std::size_t consumed = 0;
};

/// Decodes one codeword starting at `offset`; trailing bits are left alone.
OmegaDecoded omega_decode(const BitString& bits, std::size_t offset = 0);

/// Codelength from bit lengths only; never materializes the codeword.
std::uint64_t omega_len(const BigNat& n);
std::uint64_t omega_len(std::uint64_t n);

/// ell_omega of any n with the given bit length (ell depends on nothing else).
std::uint64_t omega_len_for_bit_length(std::uint64_t bit_length);

/// sum_{n=1..N} 2^-ell(n), computed per bit-length class in O(log N).
double kraft_partial_sum(std::uint64_t n_max);

/// ell(ab) - ell(a) - ell(b), for a, b >= 2.
std::int64_t near_additivity_defect(const BigNat& a, const BigNat& b);
std::int64_t near_additivity_defect(std::uint64_t a, std::uint64_t b);

/// ell(2^m n) - (ell(n) + m + ell(m)): the binary-scaling axiom slack.
std::int64_t compressing_defect(const BigNat& n, std::uint64_t m);

/// log2 n + log2 log2 n, n >= 2. Diagnostic only.
double omega_len_approx(const BigNat& n);

}  // namespace mte
