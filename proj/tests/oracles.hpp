#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond the GMP number types.

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// b^e mod m by repeated multiplication, one factor at a time.
inline u64 slow_pow_mod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  for (u64 i = 0; i < e; ++i)
    r = static_cast<u64>(static_cast<u128>(r) * (b % m) % m);
  return r;
}

/// Least t >= 1 with b^t = 1 mod m, stepping t one at a time (0 if none).
inline u64 brute_order(u64 m, u64 b) {
  if (std::gcd(m, b % m) != 1)
    return 0;
  u64 r = b % m;
  for (u64 t = 1; t <= m; ++t) {
    if (r == 1 % m)
      return t;
    r = static_cast<u64>(static_cast<u128>(r) * (b % m) % m);
  }
  return 0;
}

inline bool trial_is_prime(u64 n) {
  if (n < 2)
    return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0)
      return false;
  return true;
}

/// Continued fraction of p/q (q > 0) with mpz floor division.
inline std::vector<mpz_class> euclid(mpz_class p, mpz_class q) {
  std::vector<mpz_class> out;
  while (q != 0) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    out.push_back(a);
    mpz_class r = p - a * q;
    p = q;
    q = r;
  }
  return out;
}

/// Value of [a0; a1, ..., ak] evaluated from the bottom up.
inline mpq_class evaluate(const std::vector<mpz_class>& a, std::size_t k) {
  mpq_class x(a[k]);
  for (std::size_t i = k; i-- > 0;)
    x = mpq_class(a[i]) + 1 / x;
  x.canonicalize();
  return x;
}

/// Every reduced p/q, q <= q_max, with |x - p/q| < 1/(2q^2).
inline std::vector<mpq_class> brute_legendre(const mpq_class& x, u64 q_max) {
  std::vector<mpq_class> out;
  for (u64 q = 1; q <= q_max; ++q) {
    mpz_class base;
    mpz_class xq = mpz_class(x.get_num() * q);
    mpz_fdiv_q(base.get_mpz_t(), xq.get_mpz_t(), x.get_den().get_mpz_t());
    for (mpz_class p = base - 2; p <= base + 3; ++p) {
      mpq_class c(p, q);
      c.canonicalize();
      if (c.get_den() != q)
        continue;
      mpq_class d = x - c;
      if (d < 0)
        d = -d;
      if (d < mpq_class(1, 2 * q * q))
        out.push_back(c);
    }
  }
  return out;
}

/// Exponents of the prime factorisation, by trial division.
inline std::vector<std::pair<u64, unsigned>> factor(u64 n) {
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 d = 2; d * d <= n; ++d) {
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e)
      out.emplace_back(d, e);
  }
  if (n > 1)
    out.emplace_back(n, 1);
  return out;
}

inline bool is_kfree(u64 q, unsigned k) {
  for (auto [p, e] : factor(q))
    if (e >= k)
      return false;
  return true;
}

inline bool is_coprime(u64 q, u64 m) { return std::gcd(q, m) == 1; }

inline bool is_bfree(u64 q, const std::vector<u64>& b) {
  for (u64 x : b)
    if (q % x == 0)
      return false;
  return true;
}

inline mpq_class abs_q(const mpq_class& v) { return v < 0 ? mpq_class(-v) : v; }

} // namespace oracle
