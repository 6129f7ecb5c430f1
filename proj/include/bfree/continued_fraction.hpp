#pragma once

// Finite continued-fraction prefixes with cached convergents, exact error
// brackets for every continuation of the prefix, and the Legendre filter.

#include <bfree/enclosure.hpp>
#include <bfree/exact.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace bfree {

/// How the stored quotients relate to the number x they describe.
enum class Presentation {
  /// x is exactly [a0; a1, ..., aS].
  exact,
  /// x is any irrational whose expansion starts with [a0; a1, ..., aS].
  prefix,
};

class ContinuedFraction {
public:
  ContinuedFraction() : ContinuedFraction(Integer(0), {}, Presentation::exact) {}

  /// Builds convergents with p_s = a_s p_{s-1} + p_{s-2}, q_s = a_s q_{s-1} + q_{s-2},
  /// p_{-1} = 1, q_{-1} = 0, p_0 = a0, q_0 = 1. Every quotient must be >= 1.
  static ContinuedFraction from_quotients(Integer a0, std::vector<Integer> quotients,
                                          Presentation presentation = Presentation::prefix) {
    return ContinuedFraction(std::move(a0), std::move(quotients), presentation);
  }

  /// Exact expansion of a rational, canonical form (last quotient >= 2).
  static ContinuedFraction of_rational(const Rational& r);

  const Integer& a0() const { return a0_; }
  const std::vector<Integer>& quotients() const { return quotients_; }
  Presentation presentation() const { return presentation_; }
  bool is_exact() const { return presentation_ == Presentation::exact; }

  /// S: index of the last stored convergent.
  std::size_t last_index() const { return quotients_.size(); }

  /// a_s for 0 <= s <= S.
  const Integer& quotient(std::size_t s) const { return s == 0 ? a0_ : quotients_.at(s - 1); }

  /// p_s, q_s for -1 <= s <= S.
  const Integer& p(std::ptrdiff_t s) const { return p_.at(static_cast<std::size_t>(s + 1)); }
  const Integer& q(std::ptrdiff_t s) const { return q_.at(static_cast<std::size_t>(s + 1)); }

  Rational convergent(std::size_t s) const { return make_rational(p(static_cast<std::ptrdiff_t>(s)), q(static_cast<std::ptrdiff_t>(s))); }

  /// Index s with p_s/q_s == r, if any.
  std::optional<std::size_t> convergent_index(const Rational& r) const {
    for (std::size_t s = 0; s <= last_index(); ++s) {
      const auto i = static_cast<std::ptrdiff_t>(s);
      if (q(i) == r.get_den() && p(i) == r.get_num())
        return s;
    }
    return std::nullopt;
  }

  /// The value for exact presentations; for prefixes, the open interval between
  /// p_S/q_S and (p_S + p_{S-1})/(q_S + q_{S-1}) swept by every continuation.
  Enclosure enclosure() const {
    const auto S = static_cast<std::ptrdiff_t>(last_index());
    if (is_exact())
      return Enclosure::point(convergent(last_index()));
    return Enclosure::open(make_rational(p(S), q(S)), make_rational(p(S) + p(S - 1), q(S) + q(S - 1)));
  }

private:
  ContinuedFraction(Integer a0, std::vector<Integer> quotients, Presentation presentation)
      : a0_(std::move(a0)), quotients_(std::move(quotients)), presentation_(presentation) {
    for (std::size_t i = 0; i < quotients_.size(); ++i)
      if (quotients_[i] < 1)
        throw DomainError("continued fraction: partial quotient a_" + std::to_string(i + 1) + " must be >= 1");
    p_.reserve(quotients_.size() + 2);
    q_.reserve(quotients_.size() + 2);
    p_.emplace_back(1);
    q_.emplace_back(0);
    p_.push_back(a0_);
    q_.emplace_back(1);
    for (const Integer& a : quotients_) {
      const std::size_t n = p_.size();
      p_.push_back(a * p_[n - 1] + p_[n - 2]);
      q_.push_back(a * q_[n - 1] + q_[n - 2]);
    }
  }

  Integer a0_;
  std::vector<Integer> quotients_;
  Presentation presentation_;
  std::vector<Integer> p_; // index s + 1
  std::vector<Integer> q_;
};

struct Expansion {
  Integer a0;
  std::vector<Integer> quotients;
};

/// Euclidean expansion of r; the last quotient is >= 2 unless there are none.
inline Expansion quotients_of_rational(const Rational& r) {
  Expansion out;
  Integer num = r.get_num();
  Integer den = r.get_den();
  out.a0 = floor(r);
  num -= out.a0 * den;
  while (num != 0) {
    // current value is den/num > 1
    Integer a;
    Integer rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
    out.quotients.push_back(a);
    den = num;
    num = rem;
  }
  // Euclid always ends with a quotient >= 2 (the last step divides by a
  // remainder smaller than the divisor), so the expansion is canonical.
  return out;
}

inline ContinuedFraction ContinuedFraction::of_rational(const Rational& r) {
  Expansion e = quotients_of_rational(r);
  return from_quotients(std::move(e.a0), std::move(e.quotients), Presentation::exact);
}

/// Convergents from quotients; the free-function spelling of
/// ContinuedFraction::from_quotients.
inline ContinuedFraction convergents_from_quotients(Integer a0, std::vector<Integer> quotients,
                                                    Presentation presentation = Presentation::prefix) {
  return ContinuedFraction::from_quotients(std::move(a0), std::move(quotients), presentation);
}

// ---------------------------------------------------------------------------
// Error brackets

/// lo < |x - p_s/q_s| < hi for every irrational x whose expansion starts with
/// the quotients a_0 .. a_{s+depth+1}. Writes x_{s+1} = [a_{s+1}; ..., a_{s+depth+1}, t]
/// with t in (1, inf) and uses |x - p_s/q_s| = 1 / (q_s (x_{s+1} q_s + q_{s-1})).
/// depth = 0 gives 1/(q_s (q_s + q_{s+1})) < |x - p_s/q_s| < 1/(q_s q_{s+1}).
inline DistanceBracket error_bracket(const ContinuedFraction& cf, std::size_t s, std::size_t depth) {
  if (s + depth + 1 > cf.last_index())
    throw RangeError("error_bracket: need quotients up to index " + std::to_string(s + depth + 1) + ", have " +
                     std::to_string(cf.last_index()));
  const std::size_t last = s + depth + 1;
  // Complete quotient x_{s+1} as the tail t -> infinity and t -> 1.
  Rational at_inf(cf.quotient(last));
  Rational at_one(cf.quotient(last) + 1);
  for (std::size_t j = last; j-- > s + 1;) {
    at_inf = Rational(cf.quotient(j)) + 1 / at_inf;
    at_one = Rational(cf.quotient(j)) + 1 / at_one;
  }
  const Rational& big = at_inf > at_one ? at_inf : at_one;
  const Rational& small = at_inf > at_one ? at_one : at_inf;
  const auto si = static_cast<std::ptrdiff_t>(s);
  const Rational qs(cf.q(si));
  const Rational qprev(cf.q(si - 1));
  auto err = [&](const Rational& complete) -> Rational { return 1 / (qs * (complete * qs + qprev)); };
  return {err(big), err(small), false};
}

/// Bracket for the last stored convergent, using only x_{S+1} > 1:
/// 0 < |x - p_S/q_S| < 1/(q_S (q_S + q_{S-1})).
inline DistanceBracket tail_bracket(const ContinuedFraction& cf) {
  const auto S = static_cast<std::ptrdiff_t>(cf.last_index());
  return {Rational(0), Rational(1) / Rational(cf.q(S) * (cf.q(S) + cf.q(S - 1))), false};
}

// ---------------------------------------------------------------------------
// Legendre filter

struct LegendreEntry {
  Integer p;
  std::uint64_t q = 0;
  /// holds: |x - p/q| < 1/(2q^2) is proven; inconclusive: undecided at this depth.
  Verdict within = Verdict::holds;
  bool is_convergent = false;
};

/// Every reduced p/q with 1 <= q <= q_max that lies provably (or possibly,
/// marked inconclusive) within 1/(2q^2) of x, each flagged with whether it is
/// one of the stored convergents.
inline std::vector<LegendreEntry> legendre_filter(const ContinuedFraction& cf, std::uint64_t q_max) {
  std::vector<LegendreEntry> out;
  const Enclosure x = cf.enclosure();
  for (std::uint64_t qq = 1; qq <= q_max; ++qq) {
    const Integer q = from_u64(qq);
    const Rational radius(1, 2 * q * q);
    // |x - p/q| < 1/(2q^2) forces p into (q lo - 1/(2q), q hi + 1/(2q)).
    const Integer p_lo = floor(Rational(q * x.lo) - Rational(1, 2 * q));
    const Integer p_hi = floor(Rational(q * x.hi) + Rational(1, 2 * q)) + 1;
    for (Integer p = p_lo; p <= p_hi; ++p) {
      if (gcd(p, q) != 1)
        continue;
      const Rational c = make_rational(p, q);
      const Verdict v = distance_below(x, c, radius);
      if (v == Verdict::fails)
        continue;
      out.push_back({p, qq, v, cf.convergent_index(c).has_value()});
    }
  }
  return out;
}

} // namespace bfree
