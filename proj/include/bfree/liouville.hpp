#pragma once

// Continued fractions whose convergent denominators alternate between powers
// of two primes: q_{2s} = pi0^alpha_{2s}, q_{2s+1} = pi1^alpha_{2s+1}.
//
// Step t (i = t mod 2) needs q_t = a_t q_{t-1} + q_{t-2}, i.e.
//     a_t * pi_{1-i}^alpha_{t-1} = pi_i^alpha_{t-2} (pi_i^(alpha_t - alpha_{t-2}) - 1),
// which has an integral solution a_t exactly when
//     pi_i^(alpha_t - alpha_{t-2}) = 1  (mod pi_{1-i}^alpha_{t-1}).
// So alpha_t = alpha_{t-2} + k * ord(pi_i mod pi_{1-i}^alpha_{t-1}) with k >= 1
// chosen so that alpha_t > alpha_{t-1}.

#include <bfree/continued_fraction.hpp>
#include <bfree/enclosure.hpp>
#include <bfree/errors.hpp>
#include <bfree/exact.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

enum class ConstructionStatus { active, growth_exceeded };

inline std::string_view to_string(ConstructionStatus s) {
  return s == ConstructionStatus::active ? "active" : "growth-exceeded";
}

inline constexpr std::uint64_t kDefaultDigitBudget = 1'000'000;

class PrimePairConstruction {
public:
  /// q_0 = 1, q_1 = a_1 = pi1^alpha1, a_0 = 0.
  static PrimePairConstruction init(std::uint64_t pi0, std::uint64_t pi1, std::uint64_t alpha1,
                                    std::uint64_t digit_budget = kDefaultDigitBudget) {
    if (!is_prime(pi0) || !is_prime(pi1))
      throw DomainError("liouville init: both pi0 and pi1 must be prime");
    if (pi0 == pi1)
      throw DomainError("liouville init: pi0 and pi1 must be distinct");
    if (alpha1 < 1)
      throw DomainError("liouville init: alpha1 must be >= 1");
    PrimePairConstruction c;
    c.pi_ = {pi0, pi1};
    c.digit_budget_ = digit_budget;
    if (digits_of_power(pi1, Integer(from_u64(alpha1))) > static_cast<double>(digit_budget))
      throw DomainError("liouville init: q_1 already exceeds the digit budget");
    c.alpha_ = {Integer(0), from_u64(alpha1)};
    const Integer q1 = pow(from_u64(pi1), alpha1);
    c.a_ = {Integer(0), q1};
    c.q_ = {Integer(1), q1};
    c.p_ = {Integer(0), Integer(1)}; // p_0 = a_0, p_1 = a_1 p_0 + p_{-1}
    return c;
  }

  /// Rebuilds a state from stored fields without checking them (certificates,
  /// fault injection). Run verify() before trusting it.
  static PrimePairConstruction from_parts(std::uint64_t pi0, std::uint64_t pi1, std::vector<Integer> alpha,
                                          std::vector<Integer> k, std::vector<Integer> a, std::vector<Integer> q,
                                          ConstructionStatus status = ConstructionStatus::active,
                                          std::uint64_t digit_budget = kDefaultDigitBudget) {
    PrimePairConstruction c;
    c.pi_ = {pi0, pi1};
    c.alpha_ = std::move(alpha);
    c.k_ = std::move(k);
    c.a_ = std::move(a);
    c.q_ = std::move(q);
    c.status_ = status;
    c.digit_budget_ = digit_budget;
    c.p_.clear();
    Integer pm2 = 1;
    Integer pm1 = c.a_.empty() ? Integer(0) : c.a_[0];
    if (!c.a_.empty())
      c.p_.push_back(pm1);
    for (std::size_t t = 1; t < c.a_.size(); ++t) {
      Integer pt = c.a_[t] * pm1 + pm2;
      c.p_.push_back(pt);
      pm2 = pm1;
      pm1 = pt;
    }
    return c;
  }

  std::uint64_t pi(int i) const { return pi_[static_cast<std::size_t>(i)]; }
  const std::vector<Integer>& alpha() const { return alpha_; }
  /// k_t for t = 2, 3, ... (index 0 is k_2).
  const std::vector<Integer>& k_choices() const { return k_; }
  const std::vector<Integer>& a() const { return a_; }
  const std::vector<Integer>& q() const { return q_; }
  const std::vector<Integer>& p() const { return p_; }
  ConstructionStatus status() const { return status_; }
  std::uint64_t digit_budget() const { return digit_budget_; }
  std::size_t terms() const { return q_.size(); }

  /// The continued-fraction prefix [0; a_1, ..., a_T].
  ContinuedFraction continued_fraction() const {
    return ContinuedFraction::from_quotients(a_.front(), std::vector<Integer>(a_.begin() + 1, a_.end()),
                                             Presentation::prefix);
  }

  /// Decimal digits of pi^exponent, as a real number (floor(e log10 pi) + 1).
  static double digits_of_power(std::uint64_t prime, const Integer& exponent) {
    if (mpz_sizeinbase(exponent.get_mpz_t(), 2) > 62)
      return std::numeric_limits<double>::infinity();
    return std::floor(exponent.get_d() * std::log10(static_cast<double>(prime))) + 1;
  }

  /// Appends term t = terms(). With k unset the least k >= 1 giving
  /// alpha_t > alpha_{t-1} is used. If q_t would exceed the digit budget,
  /// nothing is appended and the status becomes growth-exceeded.
  PrimePairConstruction extended(std::optional<Integer> k = std::nullopt) const {
    if (status_ != ConstructionStatus::active)
      throw DomainError("liouville extend: construction is not active (" + std::string(to_string(status_)) + ")");
    if (k && *k < 1)
      throw DomainError("liouville extend: k must be >= 1");
    const std::size_t t = terms();
    const int i = static_cast<int>(t % 2);
    const std::uint64_t own = pi_[static_cast<std::size_t>(i)];
    const std::uint64_t other = pi_[static_cast<std::size_t>(1 - i)];
    const Integer& alpha_prev = alpha_[t - 1];
    const Integer& alpha_prev2 = alpha_[t - 2];

    // q_{t-1} = other^alpha_{t-1} is within budget, so alpha_{t-1} fits in 64 bits.
    const Integer omega = order_mod_prime_power(other, to_u64(alpha_prev), from_u64(own));
    Integer kk;
    if (k) {
      kk = *k;
    } else {
      // least k >= 1 with alpha_{t-2} + k omega > alpha_{t-1}
      Integer gap = alpha_prev - alpha_prev2;
      kk = sgn(gap) < 0 ? Integer(1) : Integer(gap / omega + 1);
      if (kk < 1)
        kk = 1;
    }
    const Integer alpha_t = alpha_prev2 + kk * omega;
    if (alpha_t <= alpha_prev)
      throw DomainError("liouville extend: k = " + to_string(kk) + " gives alpha_" + std::to_string(t) +
                        " <= alpha_" + std::to_string(t - 1));

    PrimePairConstruction next = *this;
    if (digits_of_power(own, alpha_t) > static_cast<double>(digit_budget_)) {
      next.status_ = ConstructionStatus::growth_exceeded;
      next.pending_alpha_bits_ = mpz_sizeinbase(alpha_t.get_mpz_t(), 2);
      return next;
    }

    const Integer own_z = from_u64(own);
    const Integer q_t = pow(own_z, to_u64(alpha_t));
    const Integer numerator = q_t - q_[t - 2];
    if (mpz_divisible_p(numerator.get_mpz_t(), q_[t - 1].get_mpz_t()) == 0)
      throw InternalConsistencyError("liouville extend: a_" + std::to_string(t) + " is not integral");
    Integer a_t;
    mpz_divexact(a_t.get_mpz_t(), numerator.get_mpz_t(), q_[t - 1].get_mpz_t());
    if (a_t < 1 || a_t * q_[t - 1] + q_[t - 2] != q_t)
      throw InternalConsistencyError("liouville extend: recurrence fails at t = " + std::to_string(t));

    next.alpha_.push_back(alpha_t);
    next.k_.push_back(kk);
    next.a_.push_back(a_t);
    next.q_.push_back(q_t);
    next.p_.push_back(a_t * p_[t - 1] + p_[t - 2]);
    return next;
  }

  /// Bit length of the exponent that tripped the digit budget (0 if none).
  std::size_t pending_alpha_bits() const { return pending_alpha_bits_; }

private:
  PrimePairConstruction() = default;

  std::vector<std::uint64_t> pi_{0, 0};
  std::vector<Integer> alpha_;
  std::vector<Integer> k_;
  std::vector<Integer> a_;
  std::vector<Integer> q_;
  std::vector<Integer> p_;
  ConstructionStatus status_ = ConstructionStatus::active;
  std::uint64_t digit_budget_ = kDefaultDigitBudget;
  std::size_t pending_alpha_bits_ = 0;
};

inline PrimePairConstruction extend(const PrimePairConstruction& c, std::optional<Integer> k = std::nullopt) {
  return c.extended(std::move(k));
}

// ---------------------------------------------------------------------------
// Verification

struct Check {
  std::string name;
  std::size_t index = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed)
        return false;
    return true;
  }
  /// First failing check with the given name, if any.
  const Check* first_failure(std::string_view name) const {
    for (const auto& c : checks)
      if (!c.passed && c.name == name)
        return &c;
    return nullptr;
  }
};

/// Re-derives every invariant of the construction with exact arithmetic.
inline VerifyReport verify(const PrimePairConstruction& c) {
  VerifyReport r;
  auto add = [&](std::string name, std::size_t idx, bool ok) { r.checks.push_back({std::move(name), idx, ok}); };
  const auto& q = c.q();
  const auto& a = c.a();
  const auto& alpha = c.alpha();
  const auto& p = c.p();
  const std::size_t n = q.size();

  add("shape", 0, n >= 2 && a.size() == n && alpha.size() == n && p.size() == n);
  if (n < 2 || a.size() != n || alpha.size() != n || p.size() != n)
    return r;
  add("primes-distinct", 0, is_prime(c.pi(0)) && is_prime(c.pi(1)) && c.pi(0) != c.pi(1));
  add("q0-is-one", 0, q[0] == 1 && alpha[0] == 0);
  add("alpha1-positive", 1, alpha[1] >= 1);
  add("a1-equals-q1", 1, a[1] == q[1]);

  Integer p_prev2 = 1, p_prev = a[0];
  add("p-recurrence", 0, p[0] == a[0]);
  for (std::size_t t = 1; t < n; ++t) {
    const std::uint64_t own = c.pi(static_cast<int>(t % 2));
    const Integer q_prev2 = t >= 2 ? q[t - 2] : Integer(0);

    add("alpha-increasing", t, alpha[t] > alpha[t - 1]);
    add("prime-power-form", t, fits_u64(alpha[t]) && q[t] == pow(from_u64(own), to_u64(alpha[t])));
    add("a-positive", t, a[t] >= 1);
    add("q-recurrence", t, q[t] == a[t] * q[t - 1] + q_prev2);
    add("q-coprime", t, gcd(q[t], q[t - 1]) == 1);
    if (t >= 2 && alpha[t] > alpha[t - 2] && q[t - 1] >= 2) {
      add("congruence", t, mod_pow(from_u64(own), alpha[t] - alpha[t - 2], q[t - 1]) == 1);
    } else if (t >= 2) {
      add("congruence", t, false);
    }
    const Integer p_t = a[t] * p_prev + p_prev2;
    add("p-recurrence", t, p[t] == p_t);
    const Integer det = p[t] * q[t - 1] - p[t - 1] * q[t];
    add("determinant", t, det == ((t + 1) % 2 == 0 ? 1 : -1));
    add("p-q-coprime", t, gcd(p[t], q[t]) == 1);
    p_prev2 = p_prev;
    p_prev = p_t;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Evidence for membership in W*_tau({pi0, pi1})

struct ConvergentEvidence {
  std::size_t s = 0;
  Verdict hit = Verdict::inconclusive; // holds: |x - p_s/q_s| < q_s^-tau proven
  /// Quotients beyond index s used by the deciding bracket; -1 for the tail bound.
  long depth = -1;
  Rational lo;
  Rational hi;
};

struct WStarEvidence {
  Rational tau;
  std::uint64_t modulus = 0; // pi0 * pi1
  /// (a) every q_s, s >= 1, shares a prime with pi0 * pi1.
  std::vector<std::size_t> outside_q;
  bool all_outside_q = false;
  /// (b) per-convergent verdicts.
  std::vector<ConvergentEvidence> convergents;
  std::vector<std::size_t> hits;
  std::vector<std::size_t> misses;
  std::vector<std::size_t> inconclusive;
  /// (c) least q with q^(tau-2) > 2; any tau-approximation with q >= q* is a convergent.
  Integer legendre_cutoff;
  /// Proven convergent hits (s >= 1) whose denominator lies in Q(pi0 pi1).
  std::size_t in_q_convergent_hits = 0;
  /// Denominators in Q(pi0 pi1) that can carry a tau-approximation are < q*.
  Integer exceptional_bound;
};

inline WStarEvidence wstar_evidence(const PrimePairConstruction& c, const Rational& tau) {
  if (tau <= 2)
    throw DomainError("wstar_evidence: tau must be > 2");
  require_tau(tau, "wstar_evidence");
  if (c.terms() < 4)
    throw DomainError("wstar_evidence: construction needs at least 4 terms");

  WStarEvidence ev;
  ev.tau = tau;
  ev.modulus = c.pi(0) * c.pi(1);
  const Integer m = from_u64(ev.modulus);
  const auto cf = c.continued_fraction();
  const std::size_t S = cf.last_index();

  ev.all_outside_q = true;
  for (std::size_t s = 1; s <= S; ++s) {
    if (gcd(c.q()[s], m) != 1)
      ev.outside_q.push_back(s);
    else
      ev.all_outside_q = false;
  }

  for (std::size_t s = 1; s <= S; ++s) {
    const Integer& qs = c.q()[s];
    ConvergentEvidence e;
    e.s = s;
    auto decide = [&](const DistanceBracket& b, long depth) {
      e.lo = b.lo;
      e.hi = b.hi;
      e.depth = depth;
      if (compare_to_power(b.hi, qs, tau) <= 0)
        e.hit = Verdict::holds;
      else if (sgn(b.lo) > 0 && compare_to_power(b.lo, qs, tau) >= 0)
        e.hit = Verdict::fails;
      else
        e.hit = Verdict::inconclusive;
    };
    if (s == S) {
      decide(tail_bracket(cf), -1);
    } else {
      for (std::size_t depth = 0; s + depth + 1 <= S; ++depth) {
        decide(error_bracket(cf, s, depth), static_cast<long>(depth));
        if (e.hit != Verdict::inconclusive)
          break;
      }
    }
    switch (e.hit) {
    case Verdict::holds:
      ev.hits.push_back(s);
      if (gcd(qs, m) == 1)
        ++ev.in_q_convergent_hits;
      break;
    case Verdict::fails: ev.misses.push_back(s); break;
    case Verdict::inconclusive: ev.inconclusive.push_back(s); break;
    }
    ev.convergents.push_back(std::move(e));
  }

  ev.legendre_cutoff = least_base_with_power_above(tau - 2, Integer(2));
  ev.exceptional_bound = ev.legendre_cutoff - 1;
  return ev;
}

// ---------------------------------------------------------------------------
// Irrationality profile

struct ProfilePoint {
  std::size_t s = 0;
  double w = 0; // 1 + log q_{s+1} / log q_s
};

/// w_s = 1 + log q_{s+1} / log q_s for every s >= 1 with q_s >= 2 and q_{s+1}
/// known. A lower-bound witness for the irrationality exponent along the prefix.
inline std::vector<ProfilePoint> irrationality_profile(const std::vector<Integer>& q) {
  std::vector<ProfilePoint> out;
  for (std::size_t s = 1; s + 1 < q.size(); ++s) {
    if (q[s] < 2)
      continue;
    out.push_back({s, 1.0 + log2(q[s + 1]) / log2(q[s])});
  }
  return out;
}

inline std::vector<ProfilePoint> irrationality_profile(const PrimePairConstruction& c) {
  if (c.terms() < 3)
    throw DomainError("irrationality_profile: need at least q_0, q_1, q_2");
  return irrationality_profile(c.q());
}

} // namespace bfree
