#include "mte/omega_code.hpp"

#include <bit>
#include <cmath>
#include <vector>

#include "mte/errors.hpp"

namespace mte {
namespace {

std::uint64_t bit_length_u64(std::uint64_t n) { return static_cast<std::uint64_t>(std::bit_width(n)); }

void require_positive(const BigNat& n, const char* op) {
  if (n.is_zero()) throw DomainError(std::string(op) + ": omega code is undefined at 0");
}

// Appends the binary expansion of n (MSB first).
void append_binary(BitString& out, const BigNat& n) {
  for (std::size_t i = n.bit_length(); i-- > 0;) out.push_back(n.bit(i));
}

void append_binary(BitString& out, std::uint64_t n) {
  for (std::uint64_t i = bit_length_u64(n); i-- > 0;) out.push_back(((n >> i) & 1U) != 0);
}

}  // namespace

std::uint64_t omega_len_for_bit_length(std::uint64_t bit_length) {
  if (bit_length == 0) throw DomainError("omega_len: omega code is undefined at 0");
  // n with bit length b >= 2 contributes a b-bit group and recurses on b - 1.
  std::uint64_t len = 1;
  std::uint64_t b = bit_length;
  while (b >= 2) {
    len += b;
    b = bit_length_u64(b - 1);
  }
  return len;
}

std::uint64_t omega_len(std::uint64_t n) {
  if (n == 0) throw DomainError("omega_len: omega code is undefined at 0");
  return omega_len_for_bit_length(bit_length_u64(n));
}

std::uint64_t omega_len(const BigNat& n) {
  require_positive(n, "omega_len");
  return omega_len_for_bit_length(n.bit_length());
}

BitString omega_encode(const BigNat& n) {
  require_positive(n, "omega_encode");
  // Groups from the outermost (n) inward; emitted in reverse.
  std::vector<std::uint64_t> inner;
  std::uint64_t next = 1;
  if (n.bit_length() >= 2) {
    next = n.bit_length() - 1;
    while (next >= 2) {
      inner.push_back(next);
      next = bit_length_u64(next) - 1;
    }
  }
  BitString out;
  out.reserve(omega_len(n));
  for (auto it = inner.rbegin(); it != inner.rend(); ++it) append_binary(out, *it);
  if (n.bit_length() >= 2) append_binary(out, n);
  out.push_back(false);
  return out;
}

OmegaDecoded omega_decode(const BitString& bits, std::size_t offset) {
  std::size_t pos = offset;
  // Group widths stay small until the final group, so keep them in a machine word and
  // only read the last (possibly huge) group into a BigNat.
  std::uint64_t n = 1;
  while (true) {
    if (pos >= bits.size()) throw DecodeError("truncated omega codeword", pos);
    if (!bits[pos]) {
      ++pos;
      return OmegaDecoded{BigNat(n), pos - offset};
    }
    const std::uint64_t width = n + 1;
    if (width > bits.size() - pos) throw DecodeError("truncated omega codeword", bits.size());
    if (width <= 63) {
      std::uint64_t v = 0;
      for (std::uint64_t i = 0; i < width; ++i) v = (v << 1) | (bits[pos + i] ? 1U : 0U);
      pos += width;
      n = v;
      continue;
    }
    // Wide group: its value can only be the final one if the next bit is the
    // terminator, because a following group would need more than 2^63 bits.
    std::string digits;
    digits.reserve(width);
    for (std::uint64_t i = 0; i < width; ++i) digits.push_back(bits[pos + i] ? '1' : '0');
    pos += width;
    BigNat value(mpz_class(digits, 2));
    if (pos >= bits.size()) throw DecodeError("truncated omega codeword", pos);
    if (bits[pos]) {
      auto small = value.to_u64();
      if (!small || *small + 1 > bits.size() - pos - 1) {
        throw DecodeError("truncated omega codeword", bits.size());
      }
      n = *small;
      continue;
    }
    ++pos;
    return OmegaDecoded{std::move(value), pos - offset};
  }
}

double kraft_partial_sum(std::uint64_t n_max) {
  if (n_max == 0) return 0.0;
  // Every n in the bit-length class b shares ell(n); sum class by class. All terms are
  // dyadic, so the sum is exact while ell stays below the double mantissa width.
  double sum = 0.0;
  const std::uint64_t top = bit_length_u64(n_max);
  for (std::uint64_t b = 1; b <= top; ++b) {
    const std::uint64_t lo = std::uint64_t{1} << (b - 1);
    const std::uint64_t hi = (b == 64) ? n_max : std::min(n_max, (std::uint64_t{1} << b) - 1);
    const double count = static_cast<double>(hi - lo + 1);
    sum += std::ldexp(count, -static_cast<int>(omega_len_for_bit_length(b)));
  }
  return sum;
}

std::int64_t near_additivity_defect(const BigNat& a, const BigNat& b) {
  if (a < BigNat(2) || b < BigNat(2)) throw DomainError("near_additivity_defect: a, b >= 2 required");
  return static_cast<std::int64_t>(omega_len(a * b)) - static_cast<std::int64_t>(omega_len(a)) -
         static_cast<std::int64_t>(omega_len(b));
}

std::int64_t near_additivity_defect(std::uint64_t a, std::uint64_t b) {
  if (a < 2 || b < 2) throw DomainError("near_additivity_defect: a, b >= 2 required");
  // bit_length(ab) is bit_length(a) + bit_length(b) or one less; avoid the overflowing
  // product by asking GMP only when it might not fit.
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
  const std::uint64_t lo = static_cast<std::uint64_t>(prod);
  const std::uint64_t bits = hi ? 64 + bit_length_u64(hi) : bit_length_u64(lo);
  return static_cast<std::int64_t>(omega_len_for_bit_length(bits)) -
         static_cast<std::int64_t>(omega_len(a)) - static_cast<std::int64_t>(omega_len(b));
}

std::int64_t compressing_defect(const BigNat& n, std::uint64_t m) {
  require_positive(n, "compressing_defect");
  if (m == 0) throw DomainError("compressing_defect: m >= 1 required");
  const std::uint64_t scaled = omega_len_for_bit_length(n.bit_length() + m);
  return static_cast<std::int64_t>(scaled) -
         static_cast<std::int64_t>(omega_len(n) + m + omega_len(m));
}

double omega_len_approx(const BigNat& n) {
  if (n < BigNat(2)) throw DomainError("omega_len_approx: n >= 2 required");
  const double l2 = n.log2();
  return l2 + std::log2(l2);
}

}  // namespace mte
