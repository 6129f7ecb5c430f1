#pragma once

// Exact integer/rational kernel: parsing and printing of arbitrary-precision
// values, modular exponentiation, multiplicative orders and exact comparison
// of a rational against q^(-tau) for rational tau.

#include <gmpxx.h>

#include <bfree/errors.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bfree {

using Integer = mpz_class;
/// Always canonical: gcd(|num|, den) = 1, den >= 1, zero is 0/1.
using Rational = mpq_class;

// ---------------------------------------------------------------------------
// Construction, parsing, printing

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0)
    throw DomainError("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer parse_integer(std::string_view text) {
  std::string s(text);
  if (s.empty())
    throw DomainError("empty integer literal");
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size())
    throw DomainError("malformed integer literal '" + s + "'");
  for (std::size_t i = start; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9')
      throw DomainError("malformed integer literal '" + s + "'");
  if (s[0] == '+')
    s.erase(0, 1);
  return Integer(s, 10);
}

/// Accepts "p" or "p/q" with q != 0.
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return Rational(parse_integer(text));
  return make_rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

inline std::string to_string(const Integer& n) { return n.get_str(10); }

/// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1)
    return r.get_num().get_str(10);
  return r.get_num().get_str(10) + "/" + r.get_den().get_str(10);
}

inline bool fits_u64(const Integer& n) {
  return sgn(n) >= 0 && mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Integer& n) {
  if (!fits_u64(n))
    throw DomainError("value " + (mpz_sizeinbase(n.get_mpz_t(), 10) < 40 ? to_string(n) : std::string("(large)")) +
                      " does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, n.get_mpz_t());
  return out;
}

inline Integer from_u64(std::uint64_t v) {
  Integer out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

inline Integer pow(const Integer& base, unsigned long exponent) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
  return out;
}

inline Integer abs(const Integer& n) { return n < 0 ? Integer(-n) : n; }
inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// Number of decimal digits of |n| (1 for zero).
inline std::size_t decimal_digits(const Integer& n) {
  if (n == 0)
    return 1;
  // mpz_sizeinbase may overestimate by one in base 10.
  std::size_t guess = mpz_sizeinbase(n.get_mpz_t(), 10);
  Integer threshold = pow(Integer(10), static_cast<unsigned long>(guess - 1));
  return abs(n) >= threshold ? guess : guess - 1;
}

/// log2(n) for n > 0, accurate to double precision for any size.
inline double log2(const Integer& n) {
  long exp = 0;
  double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log2(mant) + static_cast<double>(exp);
}

inline Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

/// Nearest integer, ties rounded up.
inline Integer round_nearest(const Rational& r) { return floor(r + Rational(1, 2)); }

// ---------------------------------------------------------------------------
// Primes

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1)
      r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

} // namespace detail

/// Deterministic Miller-Rabin; exact for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2)
    return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0)
      return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::pow_mod_u64(a, d, n);
    if (x == 1 || x == n - 1)
      continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite)
      return false;
  }
  return true;
}

/// Sieve of Eratosthenes; primes in [2, limit].
inline std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2)
    return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i])
      continue;
    out.push_back(i);
    if (i <= limit / i)
      for (std::uint64_t j = i * i; j <= limit; j += i)
        composite[j] = true;
  }
  return out;
}

/// Prime factorisation of a 64-bit value by trial division (small inputs only).
inline std::vector<std::pair<std::uint64_t, unsigned>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    if (n % p)
      continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
    if (n > 1 && is_prime(n))
      break;
  }
  if (n > 1)
    out.emplace_back(n, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Modular arithmetic

/// base^exponent mod modulus, in [0, modulus).
inline Integer mod_pow(const Integer& base, const Integer& exponent, const Integer& modulus) {
  if (modulus < 2)
    throw DomainError("mod_pow: modulus must be >= 2");
  if (sgn(exponent) < 0)
    throw DomainError("mod_pow: exponent must be a natural number");
  Integer out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

struct OrderOptions {
  /// Iteration cap for the brute-force path (general composite moduli).
  std::uint64_t brute_force_cap = 10'000'000;
  /// Trial-division bound used to recognise prime-power moduli.
  std::uint64_t trial_division_limit = 1'000'000;
};

/// Order of `base` modulo the prime `prime`, found among the divisors of prime - 1.
inline std::uint64_t order_mod_prime(std::uint64_t prime, const Integer& base) {
  if (!is_prime(prime))
    throw DomainError("order_mod_prime: modulus is not prime");
  std::uint64_t b = mpz_fdiv_ui(base.get_mpz_t(), prime);
  if (b == 0)
    throw DomainError("multiplicative_order: base and modulus are not coprime");
  std::uint64_t order = prime - 1;
  for (auto [f, e] : factor_u64(prime - 1)) {
    (void)e;
    while (order % f == 0 && detail::pow_mod_u64(b, order / f, prime) == 1)
      order /= f;
  }
  return order;
}

/// Order of `base` modulo prime^exponent. The order modulo prime is found by
/// search, then lifted one power at a time: the order modulo prime^(j+1) is the
/// order modulo prime^j times 1 or prime. Once a lift multiplies at a level
/// where prime is odd (or prime = 2 and j >= 2), every later lift multiplies as
/// well, so the remaining levels are applied at once.
inline Integer order_mod_prime_power(std::uint64_t prime, std::uint64_t exponent, const Integer& base) {
  if (exponent == 0)
    throw DomainError("order_mod_prime_power: exponent must be >= 1");
  Integer order = from_u64(order_mod_prime(prime, base));
  const Integer p = from_u64(prime);
  Integer modulus = p;
  for (std::uint64_t j = 1; j < exponent; ++j) {
    modulus *= p; // prime^(j+1)
    if (mod_pow(base, order, modulus) == 1)
      continue;
    order *= p;
    if (prime != 2 || j >= 2) {
      std::uint64_t remaining = exponent - 1 - j;
      if (remaining > 0) {
        Integer scale;
        mpz_pow_ui(scale.get_mpz_t(), p.get_mpz_t(), remaining);
        order *= scale;
      }
      break;
    }
  }
  return order;
}

/// If n = prime^e with prime <= trial_limit (or n itself a 64-bit prime),
/// returns (prime, e).
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> as_prime_power(const Integer& n,
                                                                            std::uint64_t trial_limit) {
  if (n < 2)
    return std::nullopt;
  if (fits_u64(n) && is_prime(to_u64(n)))
    return std::make_pair(to_u64(n), std::uint64_t{1});
  for (std::uint64_t p = 2; p <= trial_limit; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0)
      continue;
    Integer rest;
    Integer prime = from_u64(p);
    auto e = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
    if (rest == 1)
      return std::make_pair(p, static_cast<std::uint64_t>(e));
    return std::nullopt;
  }
  return std::nullopt;
}

/// Least w >= 1 with base^w = 1 (mod modulus).
inline Integer multiplicative_order(const Integer& modulus, const Integer& base, const OrderOptions& options = {}) {
  if (modulus < 2)
    throw DomainError("multiplicative_order: modulus must be >= 2");
  if (gcd(base, modulus) != 1)
    throw DomainError("multiplicative_order: base and modulus are not coprime");
  if (auto pp = as_prime_power(modulus, options.trial_division_limit))
    return order_mod_prime_power(pp->first, pp->second, base);

  Integer b = base % modulus;
  if (b < 0)
    b += modulus;
  Integer acc = b;
  for (std::uint64_t w = 1; w <= options.brute_force_cap; ++w) {
    if (acc == 1)
      return from_u64(w);
    acc = (acc * b) % modulus;
  }
  throw BudgetExceeded("multiplicative_order: brute-force cap of " + std::to_string(options.brute_force_cap) +
                       " iterations exceeded");
}

// ---------------------------------------------------------------------------
// Comparisons against q^(-tau)

/// Largest admissible denominator of tau; bounds the bit growth of r^den.
inline constexpr unsigned long kMaxTauDenominator = 8;

inline void require_tau(const Rational& tau, const char* who) {
  if (sgn(tau) <= 0)
    throw DomainError(std::string(who) + ": tau must be positive");
  if (tau.get_den() > kMaxTauDenominator)
    throw DomainError(std::string(who) + ": tau denominator exceeds " + std::to_string(kMaxTauDenominator));
  if (!tau.get_num().fits_ulong_p())
    throw DomainError(std::string(who) + ": tau numerator too large");
}

/// Orders r against q^(-tau) exactly: with r = m/d and tau = a/b, compares
/// m^b * q^a with d^b.
inline std::strong_ordering compare_to_power(const Rational& r, const Integer& q, const Rational& tau) {
  if (sgn(r) <= 0)
    throw DomainError("compare_to_power: r must be positive");
  if (q < 2)
    throw DomainError("compare_to_power: q must be >= 2");
  require_tau(tau, "compare_to_power");
  const unsigned long a = tau.get_num().get_ui();
  const unsigned long b = tau.get_den().get_ui();
  Integer lhs = pow(r.get_num(), b) * pow(q, a);
  Integer rhs = pow(r.get_den(), b);
  int c = cmp(lhs, rhs);
  return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

/// Least integer q >= 1 with q^exponent > bound, for rational exponent > 0 and
/// bound >= 0. Decided by comparing q^c with bound^d where exponent = c/d.
inline Integer least_base_with_power_above(const Rational& exponent, const Integer& bound) {
  if (sgn(exponent) <= 0)
    throw DomainError("least_base_with_power_above: exponent must be positive");
  if (sgn(bound) < 0)
    throw DomainError("least_base_with_power_above: bound must be >= 0");
  if (!exponent.get_num().fits_ulong_p() || !exponent.get_den().fits_ulong_p())
    throw DomainError("least_base_with_power_above: exponent too large");
  const unsigned long c = exponent.get_num().get_ui();
  const unsigned long d = exponent.get_den().get_ui();
  const Integer target = pow(bound, d);
  auto above = [&](const Integer& q) { return pow(q, c) > target; };
  Integer hi = 1;
  while (!above(hi))
    hi *= 2;
  if (hi == 1)
    return hi;
  Integer lo = hi / 2; // !above(lo)
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    if (above(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

} // namespace bfree
