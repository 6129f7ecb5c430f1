#pragma once

// Rational hyperplanes sum a_i x_i = u/v, the dependence-transfer property
// (good simultaneous approximations to points on the hyperplane lie on it once
// q is large enough), and finite-range scans for simultaneous approximations.

#include <bfree/continued_fraction.hpp>
#include <bfree/enclosure.hpp>
#include <bfree/errors.hpp>
#include <bfree/exact.hpp>
#include <bfree/free_set.hpp>
#include <bfree/liouville.hpp>
#include <bfree/parallel.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bfree {

class Hyperplane {
public:
  /// a_n must be non-zero, v >= 1 and gcd(|u|, v) = 1.
  static Hyperplane make(std::vector<Integer> a, Integer u, Integer v) {
    if (a.size() < 2)
      throw DomainError("hyperplane: dimension must be >= 2");
    if (a.back() == 0)
      throw DomainError("hyperplane: last coefficient a_n must be non-zero (relabel the axes)");
    if (v < 1)
      throw DomainError("hyperplane: v must be >= 1");
    if (gcd(u, v) != 1)
      throw DomainError("hyperplane: u and v must be coprime");
    Hyperplane h;
    h.a_ = std::move(a);
    h.u_ = std::move(u);
    h.v_ = std::move(v);
    return h;
  }

  std::size_t dimension() const { return a_.size(); }
  const std::vector<Integer>& coefficients() const { return a_; }
  const Integer& u() const { return u_; }
  const Integer& v() const { return v_; }
  Rational target() const { return make_rational(u_, v_); }

  Integer coefficient_norm() const {
    Integer s = 0;
    for (const auto& x : a_)
      s += abs(x);
    return s;
  }

  std::string describe() const {
    std::string out;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (a_[i] == 0)
        continue;
      const Integer mag = abs(a_[i]);
      if (out.empty())
        out = sgn(a_[i]) < 0 ? "-" : "";
      else
        out += sgn(a_[i]) < 0 ? " - " : " + ";
      out += (mag == 1 ? std::string() : to_string(mag) + "*") + "x" + std::to_string(i + 1);
    }
    return out + " = " + to_string(target());
  }

private:
  Hyperplane() = default;
  std::vector<Integer> a_;
  Integer u_;
  Integer v_;
};

/// K(A) = (sum |a_i|) / |a_n|.
inline Rational lipschitz_constant(const Hyperplane& h) {
  return make_rational(h.coefficient_norm(), abs(h.coefficients().back()));
}

/// The unique x_n with sum a_i x_i = u/v given x_1 .. x_{n-1}.
inline Rational lift(const Hyperplane& h, const std::vector<Rational>& y) {
  const auto& a = h.coefficients();
  if (y.size() + 1 != a.size())
    throw DomainError("lift: expected " + std::to_string(a.size() - 1) + " coordinates");
  Rational rest = h.target();
  for (std::size_t i = 0; i < y.size(); ++i)
    rest -= Rational(a[i]) * y[i];
  return rest / Rational(a.back());
}

/// Interval version of lift: an enclosure of x_n from enclosures of x_1 .. x_{n-1}.
inline Enclosure lift(const Hyperplane& h, const std::vector<Enclosure>& y) {
  const auto& a = h.coefficients();
  if (y.size() + 1 != a.size())
    throw DomainError("lift: expected " + std::to_string(a.size() - 1) + " coordinates");
  Rational lo = h.target(), hi = h.target();
  bool exact = true;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (a[i] == 0)
      continue;
    const Rational ai(a[i]);
    // subtract a_i * y_i
    if (ai > 0) {
      lo -= ai * y[i].hi;
      hi -= ai * y[i].lo;
    } else {
      lo -= ai * y[i].lo;
      hi -= ai * y[i].hi;
    }
    exact = exact && y[i].exact;
  }
  const Rational an(a.back());
  Rational l = lo / an, r = hi / an;
  if (exact)
    return Enclosure::point(l);
  return Enclosure::open(l, r);
}

/// Least q0 with q0^(tau-1) > sum |a_i|: for q >= q0 the integer
/// |q b - sum a_i p_i| is below 1 and must vanish.
inline Integer dependence_threshold(const std::vector<Integer>& a, const Rational& tau) {
  if (tau <= 1)
    throw DomainError("dependence_threshold: tau must be > 1");
  Integer norm = 0;
  for (const auto& x : a)
    norm += abs(x);
  return least_base_with_power_above(tau - 1, norm);
}

/// Threshold for the plane itself. Its integer relation is sum (v a_i) x_i = u,
/// so the coefficient norm is scaled by v.
inline Integer dependence_threshold(const Hyperplane& h, const Rational& tau) {
  std::vector<Integer> scaled;
  for (const auto& x : h.coefficients())
    scaled.push_back(x * h.v());
  return dependence_threshold(scaled, tau);
}

/// True iff (p_1/q, ..., p_n/q) lies on the hyperplane: v * sum a_i p_i = u q.
inline bool check_transfer(const Hyperplane& h, const Integer& q, const std::vector<Integer>& p) {
  const auto& a = h.coefficients();
  if (p.size() != a.size())
    throw DomainError("check_transfer: expected " + std::to_string(a.size()) + " numerators");
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * p[i];
  return h.v() * s == h.u() * q;
}

struct Box {
  std::vector<std::pair<Integer, Integer>> bounds; // inclusive [lo, hi] per coordinate
};

/// All integer vectors p in the box with v * sum a_i p_i = u q.
inline std::vector<std::vector<Integer>> rational_points(const Hyperplane& h, const Integer& q, const Box& box) {
  if (q < 1)
    throw DomainError("rational_points: q must be >= 1");
  const auto& a = h.coefficients();
  const std::size_t n = a.size();
  if (box.bounds.size() != n)
    throw DomainError("rational_points: box must have one range per coordinate");
  std::vector<std::vector<Integer>> out;

  // sum a_i p_i = u q / v needs v | u q and gcd(a) | u q / v.
  const Integer uq = h.u() * q;
  if (mpz_divisible_p(uq.get_mpz_t(), h.v().get_mpz_t()) == 0)
    return out;
  const Integer rhs = uq / h.v();
  Integer g = 0;
  for (const auto& x : a)
    g = gcd(g, x);
  if (mpz_divisible_p(rhs.get_mpz_t(), g.get_mpz_t()) == 0)
    return out;
  for (const auto& [lo, hi] : box.bounds)
    if (lo > hi)
      return out;

  std::vector<Integer> p(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    p[i] = box.bounds[i].first;
  const auto& [last_lo, last_hi] = box.bounds[n - 1];
  while (true) {
    Integer rest = rhs;
    for (std::size_t i = 0; i + 1 < n; ++i)
      rest -= a[i] * p[i];
    if (mpz_divisible_p(rest.get_mpz_t(), a[n - 1].get_mpz_t()) != 0) {
      Integer pn = rest / a[n - 1];
      if (pn >= last_lo && pn <= last_hi) {
        p[n - 1] = pn;
        out.push_back(p);
      }
    }
    // odometer over the first n-1 coordinates
    std::size_t i = 0;
    while (i + 1 < n) {
      if (p[i] < box.bounds[i].second) {
        ++p[i];
        break;
      }
      p[i] = box.bounds[i].first;
      ++i;
    }
    if (i + 1 == n)
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scans

/// A point coordinate: exact rational or CF-presented (open enclosure).
struct Coordinate {
  Enclosure value;
  std::string presentation;

  static Coordinate exact(const Rational& r) { return {Enclosure::point(r), to_string(r)}; }
  static Coordinate from_cf(const ContinuedFraction& cf, std::string label) { return {cf.enclosure(), std::move(label)}; }
};

using Point = std::vector<Coordinate>;

/// Enclosure of the point on h with the given first n-1 coordinates.
inline Point point_on(const Hyperplane& h, std::vector<Coordinate> first) {
  std::vector<Enclosure> y;
  for (const auto& c : first)
    y.push_back(c.value);
  Enclosure xn = lift(h, y);
  std::string label = xn.exact ? to_string(xn.lo) : std::string("lift");
  first.push_back({xn, label});
  return first;
}

enum class Proof { proven, numeric, inconclusive };

inline std::string_view to_string(Proof p) {
  switch (p) {
  case Proof::proven: return "proven";
  case Proof::numeric: return "numeric";
  case Proof::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct ScanHit {
  Integer q;
  std::vector<Integer> p;
  /// Per coordinate: sup of |x_i - p_i/q| over the enclosure.
  std::vector<Rational> error_bound;
  std::optional<bool> in_q; // set when a denominator set was supplied
  Proof proof = Proof::inconclusive;
  bool on_hyperplane = false;
};

/// Simultaneous approximations with denominator q:
///   |x_i - p_i/q| < scale_i * q^-tau for every i,
/// where scale_i = 1/K(A) for i < n when `strengthened`, and 1 otherwise.
/// Only round(q x_i) and its two neighbours are tried per coordinate: the
/// target radius is below 1/2.
inline std::vector<ScanHit> scan_denominator(const Hyperplane& h, const Point& x, const Integer& q,
                                             const Rational& tau, bool strengthened = false) {
  const std::size_t n = x.size();
  if (n != h.dimension())
    throw DomainError("scan: point dimension does not match the hyperplane");
  const Rational K = lipschitz_constant(h);
  std::vector<std::vector<std::pair<Integer, Verdict>>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Rational scale = (strengthened && i + 1 < n) ? K : Rational(1);
    const Integer centre = round_nearest(Rational(q) * x[i].value.midpoint());
    for (int d = -1; d <= 1; ++d) {
      const Integer p = centre + d;
      const Rational c = make_rational(p, q);
      Verdict v = q == 1 ? distance_below(x[i].value, c, Rational(1) / scale)
                         : distance_below_power(x[i].value, c, scale, q, tau);
      if (v != Verdict::fails)
        options[i].emplace_back(p, v);
    }
    if (options[i].empty())
      return {};
  }

  std::vector<ScanHit> hits;
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    ScanHit hit;
    hit.q = q;
    bool proven = true;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& [p, v] = options[i][idx[i]];
      hit.p.push_back(p);
      hit.error_bound.push_back(distance_bracket(x[i].value, make_rational(p, q)).hi);
      proven = proven && v == Verdict::holds;
    }
    hit.proof = proven ? Proof::proven : Proof::inconclusive;
    hit.on_hyperplane = check_transfer(h, q, hit.p);
    hits.push_back(std::move(hit));
    std::size_t i = 0;
    while (i < n && ++idx[i] == options[i].size()) {
      idx[i] = 0;
      ++i;
    }
    if (i == n)
      break;
  }
  return hits;
}

struct ScanReport {
  std::string hyperplane;
  std::vector<std::string> x;
  Rational tau;
  Integer q_max;
  Integer threshold; // dependence_threshold(vA, tau)
  std::vector<ScanHit> hits;
  std::size_t in_q_count = 0;
  std::size_t out_q_count = 0;
  /// Proven hits with q >= threshold that are off the hyperplane (must be empty).
  std::vector<Integer> violations_above_threshold;
  /// Proven hits with q < threshold that are off the hyperplane (allowed).
  std::vector<Integer> failures_below_threshold;
  std::size_t inconclusive_hits = 0;
};

/// Scans the listed denominators in parallel; hits are merged in q order.
inline ScanReport scan_denominators(const Hyperplane& h, const Point& x, const Rational& tau,
                                    const std::vector<Integer>& denominators, bool strengthened,
                                    const FreeSetSpec* spec = nullptr) {
  ScanReport report;
  report.hyperplane = h.describe();
  for (const auto& c : x)
    report.x.push_back(c.presentation);
  report.tau = tau;
  report.q_max = denominators.empty() ? Integer(0) : *std::max_element(denominators.begin(), denominators.end());
  report.threshold = dependence_threshold(h, tau);

  std::vector<std::vector<ScanHit>> per_q(denominators.size());
  parallel_for(denominators.size(),
               [&](std::size_t i) { per_q[i] = scan_denominator(h, x, denominators[i], tau, strengthened); });

  for (auto& hits : per_q) {
    for (auto& hit : hits) {
      if (spec) {
        hit.in_q = fits_u64(hit.q) ? member(*spec, to_u64(hit.q)) : std::optional<bool>();
        if (hit.in_q && *hit.in_q)
          ++report.in_q_count;
        else if (hit.in_q)
          ++report.out_q_count;
      }
      if (hit.proof != Proof::proven) {
        ++report.inconclusive_hits;
      } else if (!hit.on_hyperplane) {
        if (hit.q >= report.threshold)
          report.violations_above_threshold.push_back(hit.q);
        else
          report.failures_below_threshold.push_back(hit.q);
      }
      report.hits.push_back(std::move(hit));
    }
  }
  return report;
}

/// Every q in [1, q_max] around a point of h: any proven approximation with
/// q >= dependence_threshold must satisfy check_transfer.
inline ScanReport transfer_property_test(const Hyperplane& h, const Point& x, const Rational& tau,
                                         std::uint64_t q_max) {
  if (tau <= 1)
    throw DomainError("transfer_property_test: tau must be > 1");
  std::vector<Integer> qs;
  qs.reserve(q_max);
  for (std::uint64_t q = 1; q <= q_max; ++q)
    qs.push_back(from_u64(q));
  return scan_denominators(h, x, tau, qs, false);
}

struct WStarPointReport {
  ScanReport scan;
  /// Proven hits with q >= threshold all have v | q.
  bool large_hits_multiple_of_v = true;
  /// ... and therefore none of them lies in Q.
  bool large_hits_outside_q = true;
  std::size_t seed_depth = 0;
};

/// Label for a seed construction, e.g. "cf(2,3;alpha1=1;k=1,1,1)".
inline std::string seed_label(const PrimePairConstruction& c) {
  std::string out = "cf(" + std::to_string(c.pi(0)) + "," + std::to_string(c.pi(1)) + ";alpha1=" +
                    to_string(c.alpha()[1]) + ";k=";
  for (std::size_t i = 0; i < c.k_choices().size(); ++i)
    out += (i ? "," : "") + to_string(c.k_choices()[i]);
  return out + ")";
}

/// Builds (x_1, ..., x_{n-1}, lift) with x_i given by seed constructions and
/// scans q in [1, q_max] plus every multiple m q_s (1 <= m <= v |a_n|) of the
/// seeds' convergent denominators, using the error K(A)^-1 q^-tau on the first
/// n-1 coordinates. v must lie outside Q.
inline WStarPointReport wstar_point_from_seed(const Hyperplane& h, const std::vector<PrimePairConstruction>& seeds,
                                              const Rational& tau, const FreeSetSpec& spec,
                                              std::uint64_t q_max = 200) {
  if (tau <= 2)
    throw DomainError("wstar_point_from_seed: tau must be > 2");
  if (seeds.size() + 1 != h.dimension())
    throw DomainError("wstar_point_from_seed: need n-1 seed constructions");
  if (!fits_u64(h.v()) || member(spec, to_u64(h.v())))
    throw DomainError("wstar_point_from_seed: v = " + to_string(h.v()) +
                      " lies in Q; choose v outside Q (v = 1 is always in Q)");
  const std::size_t depth = seeds.front().terms();
  for (const auto& s : seeds)
    if (s.terms() != depth)
      throw RangeError("wstar_point_from_seed: seeds have unequal usable depth");

  std::vector<Coordinate> first;
  for (const auto& s : seeds)
    first.push_back(Coordinate::from_cf(s.continued_fraction(), seed_label(s)));
  const Point x = point_on(h, std::move(first));

  std::set<Integer> qs;
  for (std::uint64_t q = 1; q <= q_max; ++q)
    qs.insert(from_u64(q));
  const Integer mult = h.v() * abs(h.coefficients().back());
  for (const auto& s : seeds)
    for (std::size_t t = 1; t < s.terms(); ++t)
      for (Integer m = 1; m <= mult; ++m)
        qs.insert(m * s.q()[t]);

  WStarPointReport out;
  out.seed_depth = depth;
  out.scan = scan_denominators(h, x, tau, std::vector<Integer>(qs.begin(), qs.end()), true, &spec);
  for (const auto& hit : out.scan.hits) {
    if (hit.proof != Proof::proven || hit.q < out.scan.threshold)
      continue;
    if (mpz_divisible_p(hit.q.get_mpz_t(), h.v().get_mpz_t()) == 0)
      out.large_hits_multiple_of_v = false;
    if (hit.in_q && *hit.in_q)
      out.large_hits_outside_q = false;
  }
  return out;
}

} // namespace bfree
