#include <bfree/hyperplane.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace bfree;

namespace {

std::vector<Integer> ints(std::initializer_list<long> v) {
  std::vector<Integer> out;
  for (long x : v)
    out.emplace_back(x);
  return out;
}

} // namespace

TEST(Hyperplane, Validation) {
  EXPECT_THROW(Hyperplane::make(ints({1, 0}), Integer(1), Integer(2)), DomainError);
  EXPECT_THROW(Hyperplane::make(ints({1}), Integer(1), Integer(2)), DomainError);
  EXPECT_THROW(Hyperplane::make(ints({1, 1}), Integer(2), Integer(4)), DomainError);
  EXPECT_THROW(Hyperplane::make(ints({1, 1}), Integer(1), Integer(0)), DomainError);
  EXPECT_NO_THROW(Hyperplane::make(ints({1, -1}), Integer(0), Integer(1)));
}

TEST(Hyperplane, LipschitzAndLift) {
  const auto h = Hyperplane::make(ints({2, 3}), Integer(1), Integer(2));
  EXPECT_EQ(lipschitz_constant(h), Rational(5, 3));
  EXPECT_EQ(lift(h, std::vector<Rational>{Rational(1, 4)}), Rational(0));
  const auto h3 = Hyperplane::make(ints({1, 1, -2}), Integer(3), Integer(5));
  const Rational x3 = lift(h3, std::vector<Rational>{Rational(1, 3), Rational(2, 7)});
  EXPECT_EQ(Rational(1, 3) + Rational(2, 7) - 2 * x3, Rational(3, 5));
}

TEST(Hyperplane, IntervalLiftEnclosesPointLifts) {
  const auto h = Hyperplane::make(ints({3, -2, 5}), Integer(1), Integer(3));
  const Enclosure y1 = Enclosure::open(Rational(1, 3), Rational(1, 2));
  const Enclosure y2 = Enclosure::point(Rational(2, 7));
  const Enclosure xn = lift(h, std::vector<Enclosure>{y1, y2});
  EXPECT_FALSE(xn.exact);
  for (int i = 1; i < 20; ++i) {
    const Rational t = Rational(1, 3) + Rational(i, 120);
    const Rational v = lift(h, std::vector<Rational>{t, Rational(2, 7)});
    EXPECT_GT(v, xn.lo);
    EXPECT_LT(v, xn.hi);
  }
}

TEST(Threshold, Examples) {
  EXPECT_EQ(dependence_threshold(ints({1}), Rational(3)), Integer(2));
  EXPECT_EQ(dependence_threshold(ints({1, 1}), Rational(3)), Integer(2));
  EXPECT_EQ(dependence_threshold(ints({10, -10, 10}), Rational(3)), Integer(6));
  EXPECT_EQ(dependence_threshold(ints({1, 1}), Rational(3, 2)), Integer(5));
  EXPECT_THROW(dependence_threshold(ints({1}), Rational(1)), DomainError);
  // 2x1 + 3x2 = 1/2 is 4x1 + 6x2 = 1 over the integers
  EXPECT_EQ(dependence_threshold(Hyperplane::make(ints({2, 3}), Integer(1), Integer(2)), Rational(3)), Integer(4));
}

TEST(Threshold, TargetDenominatorMatters) {
  // x1 + x2 = 1/3 at x1 = -1/20: p/q = (0, 1)/2 is a cubic approximation off the
  // plane, and q = 2 already reaches the threshold of A = (1, 1) alone.
  const auto h = Hyperplane::make(ints({1, 1}), Integer(1), Integer(3));
  const Rational tau(3);
  const Point x = point_on(h, {Coordinate::exact(Rational(-1, 20))});
  EXPECT_LT(oracle::abs_q(x[1].value.lo - Rational(1, 2)), Rational(1, 8));
  EXPECT_FALSE(check_transfer(h, Integer(2), ints({0, 1})));
  EXPECT_EQ(dependence_threshold(ints({1, 1}), tau), Integer(2));
  const auto r = transfer_property_test(h, x, tau, 200);
  EXPECT_EQ(r.threshold, Integer(3));
  EXPECT_TRUE(r.violations_above_threshold.empty());
  EXPECT_NE(std::find(r.failures_below_threshold.begin(), r.failures_below_threshold.end(), Integer(2)),
            r.failures_below_threshold.end());
}

TEST(Transfer, Identity) {
  const auto h = Hyperplane::make(ints({2, 3}), Integer(1), Integer(2));
  EXPECT_TRUE(check_transfer(h, Integer(2), ints({-1, 1})));
  EXPECT_FALSE(check_transfer(h, Integer(2), ints({1, 1})));
  const auto h0 = Hyperplane::make(ints({1, -1}), Integer(0), Integer(1));
  EXPECT_TRUE(check_transfer(h0, Integer(7), ints({3, 3})));
}

TEST(RationalPoints, MatchBoxEnumeration) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const long a1 = static_cast<long>(rng() % 11) - 5, a2 = static_cast<long>(rng() % 11) - 5;
    long a3 = static_cast<long>(rng() % 11) - 5;
    if (a3 == 0)
      a3 = 1;
    const long u = static_cast<long>(rng() % 7) - 3, v = 1 + static_cast<long>(rng() % 3);
    if (std::gcd(std::abs(u), v) != 1)
      continue;
    const auto h = Hyperplane::make(ints({a1, a2, a3}), Integer(u), Integer(v));
    const long q = 1 + static_cast<long>(rng() % 12);
    Box box;
    for (int i = 0; i < 3; ++i)
      box.bounds.emplace_back(Integer(-8), Integer(8));
    auto got = rational_points(h, Integer(q), box);
    std::sort(got.begin(), got.end());
    std::vector<std::vector<Integer>> ref;
    for (long p1 = -8; p1 <= 8; ++p1)
      for (long p2 = -8; p2 <= 8; ++p2)
        for (long p3 = -8; p3 <= 8; ++p3)
          if (v * (a1 * p1 + a2 * p2 + a3 * p3) == u * q)
            ref.push_back(ints({p1, p2, p3}));
    ASSERT_EQ(got, ref) << h.describe() << " q=" << q;
  }
}

TEST(BiLipschitz, SandwichOnRandomPairs) {
  std::mt19937_64 rng(23);
  for (int plane = 0; plane < 5; ++plane) {
    std::vector<Integer> a;
    for (int i = 0; i < 3; ++i)
      a.emplace_back(static_cast<long>(rng() % 21) - 10);
    if (a.back() == 0)
      a.back() = 3;
    const auto h = Hyperplane::make(a, Integer(1), Integer(2));
    const Rational K = lipschitz_constant(h);
    for (int k = 0; k < 500; ++k) {
      std::vector<Rational> x, y;
      for (int i = 0; i < 2; ++i) {
        x.push_back(make_rational(from_u64(rng() % 1000), from_u64(1 + rng() % 97)));
        y.push_back(make_rational(from_u64(rng() % 1000), from_u64(1 + rng() % 97)));
      }
      const Rational dxy = std::max(oracle::abs_q(x[0] - y[0]), oracle::abs_q(x[1] - y[1]));
      const Rational dn = oracle::abs_q(lift(h, x) - lift(h, y));
      const Rational full = std::max(dxy, dn);
      ASSERT_LE(dxy, full);
      ASSERT_LE(full, K * dxy);
    }
  }
}

TEST(Scan, ExactPointTransferProperty) {
  const auto h = Hyperplane::make(ints({1, 2}), Integer(1), Integer(3));
  const Point x = point_on(h, {Coordinate::exact(Rational(1, 7))});
  const auto r = transfer_property_test(h, x, Rational(3), 300);
  EXPECT_TRUE(r.violations_above_threshold.empty());
  EXPECT_EQ(r.inconclusive_hits, 0u);
  // the point itself (q = 21) is a hit lying on the plane
  bool saw = false;
  for (const auto& hit : r.hits)
    if (hit.q == 21) {
      saw = true;
      EXPECT_TRUE(hit.on_hyperplane);
      EXPECT_EQ(hit.proof, Proof::proven);
    }
  EXPECT_TRUE(saw);
}

TEST(Scan, HitsAgreeWithBruteForce) {
  const auto h = Hyperplane::make(ints({3, -1}), Integer(2), Integer(5));
  const Rational x1(2, 9);
  const Point x = point_on(h, {Coordinate::exact(x1)});
  const Rational x2 = x[1].value.lo;
  const Rational tau(3);
  const auto r = transfer_property_test(h, x, tau, 120);
  std::size_t count = 0;
  for (long q = 1; q <= 120; ++q) {
    const Rational bound = Rational(1) / (Rational(q) * q * q);
    for (long p1 = -q; p1 <= 2 * q; ++p1)
      for (long p2 = -2 * q; p2 <= 2 * q; ++p2)
        if (oracle::abs_q(x1 - Rational(p1, q)) < bound && oracle::abs_q(x2 - Rational(p2, q)) < bound)
          ++count;
  }
  EXPECT_EQ(r.hits.size(), count);
}

TEST(WStar, SeededPoint) {
  const auto h = Hyperplane::make(ints({1, 1}), Integer(1), Integer(2));
  auto seed = PrimePairConstruction::init(2, 3, 1);
  for (int t = 0; t < 3; ++t)
    seed = extend(seed);
  const auto spec = FreeSetSpec::coprime_to(6);
  const auto r = wstar_point_from_seed(h, {seed}, Rational(5, 2), spec, 100);
  EXPECT_TRUE(r.large_hits_multiple_of_v);
  EXPECT_TRUE(r.large_hits_outside_q);
  EXPECT_TRUE(r.scan.violations_above_threshold.empty());
  EXPECT_THROW(wstar_point_from_seed(Hyperplane::make(ints({1, 1}), Integer(1), Integer(5)), {seed}, Rational(5, 2), spec),
               DomainError);
  EXPECT_THROW(wstar_point_from_seed(Hyperplane::make(ints({1, 1}), Integer(1), Integer(1)), {seed}, Rational(5, 2), spec),
               DomainError);
}

TEST(WStar, UnequalSeedDepth) {
  const auto h = Hyperplane::make(ints({1, 1, 1}), Integer(1), Integer(2));
  auto s1 = extend(PrimePairConstruction::init(2, 3, 1));
  auto s2 = extend(s1);
  EXPECT_THROW(wstar_point_from_seed(h, {s1, s2}, Rational(3), FreeSetSpec::coprime_to(6)), RangeError);
}
