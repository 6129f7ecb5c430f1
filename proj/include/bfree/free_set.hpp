#pragma once

// Denominator sets Q described by divisibility rules, and the questions asked
// of them: membership, the fixed-point property
//     q in Q  <=>  no non-member v divides q,
// prime support, exponent of convergence, and the Euler-product sandwich
//     sum_{p in Supp} p^-nu <= sum_{q in Q} q^-nu <= prod_{p in Supp} (1 + 1/(p^nu - 1)).

#include <bfree/bigfloat.hpp>
#include <bfree/errors.hpp>
#include <bfree/exact.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace bfree {

/// q with no k-th power divisor > 1.
struct KFree {
  unsigned k = 2;
};

/// q with gcd(q, m) = 1.
struct CoprimeTo {
  std::uint64_t m = 2;
};

/// q divisible by no element of b.
struct BFree {
  std::vector<std::uint64_t> b; // sorted, unique, all >= 2
};

/// Membership rule beyond an explicit table's range.
struct TableTail {
  enum class Kind { none, all, smooth };
  Kind kind = Kind::none;
  /// For smooth: q > limit is a member iff every prime factor of q is listed.
  std::vector<std::uint64_t> primes;
};

/// Membership bitmap on [1, limit] plus a declared tail rule.
struct ExplicitTable {
  std::uint64_t limit = 1;
  std::vector<bool> bits; // index q in [0, limit]; bits[0] unused
  TableTail tail;
  std::string source; // how the table was named, e.g. a file path
};

class FreeSetSpec {
public:
  using Variant = std::variant<KFree, CoprimeTo, BFree, ExplicitTable>;

  static FreeSetSpec kfree(unsigned k) {
    if (k < 2)
      throw DomainError("kfree: k must be >= 2");
    return FreeSetSpec(KFree{k});
  }

  static FreeSetSpec coprime_to(std::uint64_t m) {
    if (m < 2)
      throw DomainError("coprime: m must be >= 2");
    return FreeSetSpec(CoprimeTo{m});
  }

  static FreeSetSpec bfree(std::vector<std::uint64_t> b) {
    if (b.empty())
      throw DomainError("bfree: B must be non-empty");
    for (auto x : b)
      if (x < 2)
        throw DomainError("bfree: elements of B must be >= 2");
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return FreeSetSpec(BFree{std::move(b)});
  }

  /// Members listed explicitly on [1, limit]. 1 must be listed.
  static FreeSetSpec table(std::uint64_t limit, const std::vector<std::uint64_t>& members, TableTail tail,
                           std::string source = {}) {
    if (limit < 1)
      throw DomainError("table: limit must be >= 1");
    ExplicitTable t;
    t.limit = limit;
    t.bits.assign(limit + 1, false);
    for (auto m : members) {
      if (m < 1 || m > limit)
        throw DomainError("table: member " + std::to_string(m) + " outside [1, " + std::to_string(limit) + "]");
      t.bits[m] = true;
    }
    if (!t.bits[1])
      throw DomainError("table: 1 must be a member of every divisor-free set");
    for (auto p : tail.primes)
      if (!is_prime(p))
        throw DomainError("table: smooth tail entry " + std::to_string(p) + " is not prime");
    std::sort(tail.primes.begin(), tail.primes.end());
    tail.primes.erase(std::unique(tail.primes.begin(), tail.primes.end()), tail.primes.end());
    t.tail = std::move(tail);
    t.source = std::move(source);
    return FreeSetSpec(std::move(t));
  }

  const Variant& variant() const { return v_; }

  /// Canonical CLI literal, e.g. "kfree:2", "bfree:4,9", "table:@file.json".
  std::string literal() const {
    return std::visit(
        [](const auto& s) -> std::string {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, KFree>) {
            return "kfree:" + std::to_string(s.k);
          } else if constexpr (std::is_same_v<T, CoprimeTo>) {
            return "coprime:" + std::to_string(s.m);
          } else if constexpr (std::is_same_v<T, BFree>) {
            std::string out = "bfree:";
            for (std::size_t i = 0; i < s.b.size(); ++i)
              out += (i ? "," : "") + std::to_string(s.b[i]);
            return out;
          } else {
            return "table:@" + (s.source.empty() ? std::string("inline") : s.source);
          }
        },
        v_);
  }

private:
  explicit FreeSetSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

inline constexpr std::string_view kSpecGrammar = "kfree:k | coprime:m | bfree:b1,b2,... | table:@file";

// ---------------------------------------------------------------------------
// Membership

namespace detail {

inline bool kfree_member(std::uint64_t q, unsigned k) {
  for (std::uint64_t p = 2; p <= q / p; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (q % p == 0) {
      q /= p;
      if (++e >= k)
        return false;
    }
  }
  return true; // what remains is 1 or a prime to the first power
}

inline bool smooth_over(std::uint64_t q, const std::vector<std::uint64_t>& primes) {
  for (auto p : primes)
    while (q % p == 0)
      q /= p;
  return q == 1;
}

} // namespace detail

inline bool member(const FreeSetSpec& spec, std::uint64_t q) {
  if (q < 1)
    throw DomainError("member: q must be >= 1");
  return std::visit(
      [q](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KFree>) {
          return detail::kfree_member(q, s.k);
        } else if constexpr (std::is_same_v<T, CoprimeTo>) {
          return std::gcd(q, s.m) == 1;
        } else if constexpr (std::is_same_v<T, BFree>) {
          return std::none_of(s.b.begin(), s.b.end(), [q](std::uint64_t b) { return q % b == 0; });
        } else {
          if (q <= s.limit)
            return s.bits[q];
          switch (s.tail.kind) {
          case TableTail::Kind::none:
            throw DomainError("member: table queried at " + std::to_string(q) + " beyond its limit " +
                              std::to_string(s.limit) + " with no tail rule");
          case TableTail::Kind::all: return true;
          case TableTail::Kind::smooth: return detail::smooth_over(q, s.tail.primes);
          }
          return false;
        }
      },
      spec.variant());
}

/// Membership flags for every q in [0, n] (index 0 is always false), built by
/// striking out multiples of the excluded divisors.
inline std::vector<char> sieve_members(const FreeSetSpec& spec, std::uint64_t n) {
  std::vector<char> in(n + 1, 1);
  in[0] = 0;
  auto strike = [&](std::uint64_t d, std::uint64_t from) {
    std::uint64_t start = (from + d - 1) / d * d;
    for (std::uint64_t j = std::max(start, d); j <= n; j += d)
      in[j] = 0;
  };
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KFree>) {
          for (auto p : primes_up_to(static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / s.k)) + 2)) {
            std::uint64_t pk = 1;
            bool overflow = false;
            for (unsigned i = 0; i < s.k; ++i) {
              if (pk > n / p) {
                overflow = true;
                break;
              }
              pk *= p;
            }
            if (!overflow)
              strike(pk, 1);
          }
        } else if constexpr (std::is_same_v<T, CoprimeTo>) {
          for (auto [p, e] : factor_u64(s.m)) {
            (void)e;
            strike(p, 1);
          }
        } else if constexpr (std::is_same_v<T, BFree>) {
          for (auto b : s.b)
            strike(b, 1);
        } else {
          const std::uint64_t top = std::min(n, s.limit);
          for (std::uint64_t q = 1; q <= top; ++q)
            in[q] = s.bits[q] ? 1 : 0;
          if (n > s.limit) {
            switch (s.tail.kind) {
            case TableTail::Kind::none:
              throw DomainError("sieve: table range " + std::to_string(s.limit) + " exceeded with no tail rule");
            case TableTail::Kind::all: break;
            case TableTail::Kind::smooth:
              for (auto p : primes_up_to(n))
                if (!std::binary_search(s.tail.primes.begin(), s.tail.primes.end(), p))
                  strike(p, s.limit + 1);
              break;
            }
          }
        }
      },
      spec.variant());
  return in;
}

// ---------------------------------------------------------------------------
// Fixed-point property

struct FreePropertyReport {
  std::string spec;
  std::uint64_t checked_up_to = 0;
  /// Members q <= N with a non-member divisor.
  std::vector<std::uint64_t> violations;
};

/// Checks (q in Q) <=> (no v not in Q divides q) for every q <= n. The
/// reverse implication always holds with v = q, so a violation is a member
/// with a non-member divisor. Table specs without a tail are checked up to
/// their limit.
inline FreePropertyReport verify_free_property(const FreeSetSpec& spec, std::uint64_t n) {
  if (n < 1)
    throw DomainError("verify_free_property: N must be >= 1");
  if (const auto* t = std::get_if<ExplicitTable>(&spec.variant()); t && t->tail.kind == TableTail::Kind::none)
    n = std::min(n, t->limit);
  const auto in = sieve_members(spec, n);
  std::vector<char> flagged(n + 1, 0);
  FreePropertyReport report{spec.literal(), n, {}};
  for (std::uint64_t v = 2; v <= n; ++v) {
    if (in[v])
      continue;
    for (std::uint64_t q = 2 * v; q <= n; q += v)
      if (in[q])
        flagged[q] = 1;
  }
  for (std::uint64_t q = 1; q <= n; ++q)
    if (flagged[q])
      report.violations.push_back(q);
  return report;
}

// ---------------------------------------------------------------------------
// Support

struct SupportReport {
  std::string spec;
  std::uint64_t bound = 0;
  std::vector<std::uint64_t> primes;
  /// Primes whose status the multiple scan could not settle.
  std::vector<std::uint64_t> inconclusive;
};

inline constexpr std::uint64_t kDefaultSupportScanBound = 1'000'000;

/// Primes <= bound dividing some member of Q.
inline SupportReport support_primes(const FreeSetSpec& spec, std::uint64_t bound,
                                    std::uint64_t scan_bound = kDefaultSupportScanBound) {
  if (bound < 2)
    throw DomainError("support_primes: P must be >= 2");
  SupportReport report{spec.literal(), bound, {}, {}};
  const auto primes = primes_up_to(bound);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KFree>) {
          report.primes = primes; // every prime is k-free
        } else if constexpr (std::is_same_v<T, CoprimeTo>) {
          for (auto p : primes)
            if (s.m % p != 0)
              report.primes.push_back(p);
        } else {
          // Scan multiples of p for a member; a missing member is settled only
          // where the rule proves that no multiple can be a member.
          std::uint64_t scan_top = scan_bound;
          if constexpr (std::is_same_v<T, ExplicitTable>)
            if (s.tail.kind == TableTail::Kind::none)
              scan_top = std::min(scan_top, s.limit);
          for (auto p : primes) {
            bool found = false;
            for (std::uint64_t j = p; j <= scan_top && !found; j += p)
              found = member(spec, j);
            if (found) {
              report.primes.push_back(p);
              continue;
            }
            bool excluded = false;
            if constexpr (std::is_same_v<T, BFree>) {
              excluded = std::binary_search(s.b.begin(), s.b.end(), p);
            } else {
              const bool table_covered = scan_top >= s.limit;
              if (s.tail.kind == TableTail::Kind::none)
                excluded = table_covered;
              else if (s.tail.kind == TableTail::Kind::smooth)
                excluded = table_covered && !std::binary_search(s.tail.primes.begin(), s.tail.primes.end(), p);
            }
            if (!excluded)
              report.inconclusive.push_back(p);
          }
        }
      },
      spec.variant());
  return report;
}

// ---------------------------------------------------------------------------
// Exponent of convergence

struct ConvergenceExponent {
  enum class Method { exact_by_support, counting_fit };
  Method method = Method::exact_by_support;
  /// Exact method: the value when the support rule decides it.
  std::optional<Rational> exact;
  /// Counting fit: least-squares slope of log #(Q ∩ [1,N]) against log N.
  double fitted = std::numeric_limits<double>::quiet_NaN();
  std::string note;
  std::vector<std::uint64_t> grid;
  std::vector<std::uint64_t> counts;
  std::vector<double> residuals;
};

inline std::string_view to_string(ConvergenceExponent::Method m) {
  return m == ConvergenceExponent::Method::exact_by_support ? "exact-by-support" : "counting-fit";
}

/// nu(Q) from the support alone: 0 for finite support, 1 when the support
/// contains all but finitely many primes. Anything else is left undecided.
inline ConvergenceExponent convergence_exponent(const FreeSetSpec& spec) {
  ConvergenceExponent out;
  out.method = ConvergenceExponent::Method::exact_by_support;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, KFree>) {
          out.exact = Rational(1);
          out.note = "support is every prime";
        } else if constexpr (std::is_same_v<T, CoprimeTo>) {
          out.exact = Rational(1);
          out.note = "support is every prime not dividing m (cofinite)";
        } else if constexpr (std::is_same_v<T, BFree>) {
          out.exact = Rational(1);
          out.note = "support is every prime outside the finite set B (cofinite)";
        } else {
          switch (s.tail.kind) {
          case TableTail::Kind::none:
            out.exact = Rational(0);
            out.note = "finite set, finite support";
            break;
          case TableTail::Kind::smooth:
            out.exact = Rational(0);
            out.note = "support lies in the tail primes and the primes below the table limit (finite)";
            break;
          case TableTail::Kind::all:
            out.exact = Rational(1);
            out.note = "tail contains every integer, support is cofinite";
            break;
          }
        }
      },
      spec.variant());
  return out;
}

/// Estimates the counting exponent (an upper bound for nu(Q) that usually
/// equals it) as the least-squares slope of log count against log N.
template <typename Oracle>
  requires std::is_invocable_r_v<bool, Oracle&, std::uint64_t>
ConvergenceExponent counting_exponent_fit(Oracle&& is_member, const std::vector<std::uint64_t>& grid) {
  if (grid.size() < 3)
    throw DomainError("counting_exponent_fit: grid needs at least 3 points");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] < 1 || (i > 0 && grid[i] <= grid[i - 1]))
      throw DomainError("counting_exponent_fit: grid must be strictly increasing naturals");

  ConvergenceExponent out;
  out.method = ConvergenceExponent::Method::counting_fit;
  out.grid = grid;
  std::uint64_t count = 0;
  std::uint64_t q = 0;
  for (auto n : grid) {
    while (q < n) {
      ++q;
      if (is_member(q))
        ++count;
    }
    out.counts.push_back(count);
  }
  if (out.counts.back() < 2)
    throw UndefinedFit("counting_exponent_fit: fewer than two members on [1, " + std::to_string(grid.back()) +
                       "], slope undefined");
  if (out.counts.front() == 0)
    throw UndefinedFit("counting_exponent_fit: empty count at N = " + std::to_string(grid.front()));

  const std::size_t m = grid.size();
  std::vector<double> xs(m), ys(m);
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = std::log(static_cast<double>(grid[i]));
    ys[i] = std::log(static_cast<double>(out.counts[i]));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.fitted = sxy / sxx;
  const double intercept = my - out.fitted * mx;
  for (std::size_t i = 0; i < m; ++i)
    out.residuals.push_back(ys[i] - (intercept + out.fitted * xs[i]));
  out.note = "estimator of the counting exponent, not nu(Q) itself";
  return out;
}

inline ConvergenceExponent counting_exponent_fit(const FreeSetSpec& spec, const std::vector<std::uint64_t>& grid) {
  if (grid.empty())
    throw DomainError("counting_exponent_fit: empty grid");
  const auto in = sieve_members(spec, grid.back());
  return counting_exponent_fit([&](std::uint64_t q) { return in[q] != 0; }, grid);
}

// ---------------------------------------------------------------------------
// Euler-product sandwich

struct EulerPartial {
  std::string spec;
  Rational nu;
  std::uint64_t bound = 0;
  unsigned precision = 0; // significant decimal digits
  std::string left_sum;   // sum over support primes <= P of p^-nu
  std::string q_partial_sum;
  std::string right_product;
  bool left_le_middle = false;
  bool middle_le_right = false;
  std::size_t support_size = 0;
  std::size_t support_inconclusive = 0;
};

inline EulerPartial euler_product_partial(const FreeSetSpec& spec, const Rational& nu, std::uint64_t bound,
                                          unsigned digits = 50) {
  if (sgn(nu) <= 0)
    throw DomainError("euler_product_partial: nu must be > 0");
  if (bound < 2)
    throw DomainError("euler_product_partial: P must be >= 2");
  const mpfr_prec_t bits = bits_for_digits(digits);
  const Rational minus_nu = -nu;
  const auto support = support_primes(spec, bound);
  const auto in = sieve_members(spec, bound);

  BigFloat left(bits), middle(bits), right(bits, Integer(1));
  const BigFloat one(bits, Integer(1));
  for (auto p : support.primes) {
    const Integer pz = from_u64(p);
    left += BigFloat::power(bits, pz, minus_nu);
    const BigFloat pnu = BigFloat::power(bits, pz, nu);
    right *= one + one / (pnu - one);
  }
  for (std::uint64_t q = 1; q <= bound; ++q)
    if (in[q])
      middle += BigFloat::power(bits, from_u64(q), minus_nu);

  EulerPartial out;
  out.spec = spec.literal();
  out.nu = nu;
  out.bound = bound;
  out.precision = digits;
  out.left_sum = left.to_decimal(digits);
  out.q_partial_sum = middle.to_decimal(digits);
  out.right_product = right.to_decimal(digits);
  out.left_le_middle = left <= middle;
  out.middle_le_right = middle <= right;
  out.support_size = support.primes.size();
  out.support_inconclusive = support.inconclusive.size();
  return out;
}

} // namespace bfree
