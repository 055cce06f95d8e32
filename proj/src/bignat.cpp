#include "mte/bignat.hpp"

#include <cmath>
#include <limits>

#include "mte/errors.hpp"

namespace mte {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "GMP ui functions assumed 64-bit");

BigNat::BigNat(std::uint64_t v) : value_(static_cast<unsigned long>(v)) {}

BigNat::BigNat(mpz_class v) : value_(std::move(v)) {
  if (sgn(value_) < 0) throw DomainError("BigNat cannot be negative");
}

BigNat BigNat::from_decimal(std::string_view text) {
  if (text.empty()) throw DomainError("empty decimal string");
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw DomainError("not a decimal natural number: '" + std::string(text) + "'");
  }
  return BigNat(mpz_class(std::string(text), 10));
}

BigNat BigNat::pow2(std::size_t exponent) {
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, exponent);
  return BigNat(std::move(v));
}

std::size_t BigNat::bit_length() const {
  if (is_zero()) return 0;
  return mpz_sizeinbase(value_.get_mpz_t(), 2);
}

bool BigNat::bit(std::size_t i) const { return mpz_tstbit(value_.get_mpz_t(), i) != 0; }

bool BigNat::is_probable_prime() const { return mpz_probab_prime_p(value_.get_mpz_t(), 25) > 0; }

std::optional<std::uint64_t> BigNat::to_u64() const {
  if (!mpz_fits_ulong_p(value_.get_mpz_t())) return std::nullopt;
  return mpz_get_ui(value_.get_mpz_t());
}

double BigNat::to_double() const { return mpz_get_d(value_.get_mpz_t()); }

double BigNat::log2() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, value_.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

std::string BigNat::to_decimal() const { return value_.get_str(10); }

BigNat& BigNat::operator*=(const BigNat& rhs) {
  value_ *= rhs.value_;
  return *this;
}

BigNat& BigNat::operator*=(std::uint64_t rhs) {
  mpz_mul_ui(value_.get_mpz_t(), value_.get_mpz_t(), rhs);
  return *this;
}

BigNat& BigNat::operator+=(const BigNat& rhs) {
  value_ += rhs.value_;
  return *this;
}

}  // namespace mte
