#pragma once

// Exact enclosures of real numbers and three-valued verdicts on strict
// inequalities |x - c| < bound.

#include <bfree/exact.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace bfree {

enum class Verdict { holds, fails, inconclusive };

inline std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::holds: return "holds";
  case Verdict::fails: return "fails";
  case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Either an exact rational point or an open interval (lo, hi) known to
/// contain the value.
struct Enclosure {
  Rational lo;
  Rational hi;
  bool exact = true;

  static Enclosure point(const Rational& x) { return {x, x, true}; }

  static Enclosure open(const Rational& a, const Rational& b) {
    if (a == b)
      throw DomainError("open enclosure with equal endpoints");
    return a < b ? Enclosure{a, b, false} : Enclosure{b, a, false};
  }

  Rational width() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
};

/// Bounds on |x - c| over the enclosure. For an open interval neither bound
/// is attained; for an exact point both equal the distance.
struct DistanceBracket {
  Rational lo;
  Rational hi;
  bool attained = true;
};

inline DistanceBracket distance_bracket(const Enclosure& x, const Rational& c) {
  if (x.exact) {
    Rational d = abs(x.lo - c);
    return {d, d, true};
  }
  Rational dl = abs(x.lo - c);
  Rational dh = abs(x.hi - c);
  Rational sup = dl > dh ? dl : dh;
  Rational inf = (c >= x.lo && c <= x.hi) ? Rational(0) : (dl < dh ? dl : dh);
  return {inf, sup, false};
}

/// Is |x - c| < bound ?
inline Verdict distance_below(const Enclosure& x, const Rational& c, const Rational& bound) {
  DistanceBracket d = distance_bracket(x, c);
  if (d.attained)
    return d.hi < bound ? Verdict::holds : Verdict::fails;
  if (d.hi <= bound)
    return Verdict::holds;
  if (d.lo >= bound)
    return Verdict::fails;
  return Verdict::inconclusive;
}

/// Is scale * |x - c| < q^(-tau) ?  (scale > 0, q >= 2)
inline Verdict distance_below_power(const Enclosure& x, const Rational& c, const Rational& scale, const Integer& q,
                                    const Rational& tau) {
  DistanceBracket d = distance_bracket(x, c);
  auto below = [&](const Rational& r) { return sgn(r) == 0 || compare_to_power(r * scale, q, tau) < 0; };
  auto at_most = [&](const Rational& r) { return sgn(r) == 0 || compare_to_power(r * scale, q, tau) <= 0; };
  if (d.attained)
    return below(d.hi) ? Verdict::holds : Verdict::fails;
  if (at_most(d.hi))
    return Verdict::holds;
  if (sgn(d.lo) > 0 && !below(d.lo))
    return Verdict::fails;
  return Verdict::inconclusive;
}

/// Is |x - c| < 1/q^tau, for q = 1? (q^(-tau) = 1.)
inline Verdict distance_below_one(const Enclosure& x, const Rational& c, const Rational& scale) {
  return distance_below(x, c, Rational(1) / scale);
}

} // namespace bfree
