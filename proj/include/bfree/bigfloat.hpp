#pragma once

// Minimal RAII wrapper over an MPFR value with a fixed working precision.
// All operations round to nearest, so results are reproducible bit for bit.

#include <mpfr.h>

#include <bfree/exact.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

namespace bfree {

/// Working precision in bits for a requested number of decimal digits.
inline mpfr_prec_t bits_for_digits(unsigned digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

class BigFloat {
public:
  explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }

  BigFloat(mpfr_prec_t bits, const Rational& r) : BigFloat(bits) { mpfr_set_q(v_, r.get_mpq_t(), MPFR_RNDN); }
  BigFloat(mpfr_prec_t bits, const Integer& z) : BigFloat(bits) { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  BigFloat(mpfr_prec_t bits, std::uint64_t u) : BigFloat(bits, from_u64(u)) {}

  BigFloat(const BigFloat& o) : BigFloat(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept : BigFloat(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
  BigFloat& operator=(BigFloat o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
    BigFloat out(a.precision());
    mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
  }
  friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
    BigFloat out(a.precision());
    mpfr_div(out.v_, a.v_, b.v_, MPFR_RNDN);
    return out;
  }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }

  /// base^exponent for base > 0 and rational exponent.
  static BigFloat power(mpfr_prec_t bits, const Integer& base, const Rational& exponent) {
    BigFloat out(bits);
    if (exponent.get_den() == 1 && exponent.get_num().fits_slong_p()) {
      BigFloat b(bits, base);
      mpfr_pow_si(out.v_, b.v_, exponent.get_num().get_si(), MPFR_RNDN);
      return out;
    }
    BigFloat b(bits, base);
    BigFloat e(bits, exponent);
    mpfr_pow(out.v_, b.v_, e.v_, MPFR_RNDN);
    return out;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Decimal rendering with `digits` significant digits.
  std::string to_decimal(unsigned digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*RNg", static_cast<int>(digits), v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

private:
  mpfr_t v_;
};

} // namespace bfree
