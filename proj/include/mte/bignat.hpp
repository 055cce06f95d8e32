#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mte {

/// Arbitrary-precision natural number. Thin value wrapper over a GMP integer that
/// refuses to go negative.
class BigNat {
 public:
  BigNat() = default;
  BigNat(std::uint64_t v);  // NOLINT(google-explicit-constructor)
  explicit BigNat(mpz_class v);

  /// Parses a base-10 string of digits. Throws DomainError on anything else.
  static BigNat from_decimal(std::string_view text);
  static BigNat pow2(std::size_t exponent);

  /// floor(log2 n) + 1 for n >= 1, and 0 for n = 0.
  std::size_t bit_length() const;
  /// Bit i counted from the least significant end.
  bool bit(std::size_t i) const;
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_probable_prime() const;

  std::optional<std::uint64_t> to_u64() const;
  double to_double() const;
  /// log2 of the value; -inf for zero. Accurate for arbitrarily large values.
  double log2() const;
  std::string to_decimal() const;

  const mpz_class& raw() const { return value_; }

  BigNat& operator*=(const BigNat& rhs);
  BigNat& operator*=(std::uint64_t rhs);
  BigNat& operator+=(const BigNat& rhs);
  friend BigNat operator*(BigNat lhs, const BigNat& rhs) { return lhs *= rhs; }
  friend BigNat operator+(BigNat lhs, const BigNat& rhs) { return lhs += rhs; }

  friend bool operator==(const BigNat& a, const BigNat& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpz_class value_{0};
};

}  // namespace mte
