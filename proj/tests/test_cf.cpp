#include <bfree/continued_fraction.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bfree;

TEST(ContinuedFraction, ExpansionMatchesEuclid) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const long long den = 1 + static_cast<long long>(rng() % 100000);
    const long long num = static_cast<long long>(rng() % 2000000) - 1000000;
    const Rational x = make_rational(Integer(std::to_string(num)), Integer(std::to_string(den)));
    const auto e = quotients_of_rational(x);
    const auto ref = oracle::euclid(x.get_num(), x.get_den());
    ASSERT_EQ(e.a0, ref.front());
    ASSERT_EQ(e.quotients, std::vector<Integer>(ref.begin() + 1, ref.end()));
  }
}

TEST(ContinuedFraction, ConvergentsMatchBottomUpEvaluation) {
  const std::vector<Integer> a{Integer(3), Integer(7), Integer(15), Integer(1), Integer(292), Integer(1), Integer(1)};
  const auto cf = ContinuedFraction::from_quotients(a[0], std::vector<Integer>(a.begin() + 1, a.end()));
  for (std::size_t s = 0; s < a.size(); ++s)
    EXPECT_EQ(cf.convergent(s), oracle::evaluate(a, s)) << s;
  EXPECT_EQ(cf.p(-1), Integer(1));
  EXPECT_EQ(cf.q(-1), Integer(0));
  EXPECT_EQ(cf.convergent(3), Rational(355, 113));
}

TEST(ContinuedFraction, DeterminantIdentity) {
  std::mt19937_64 rng(5);
  std::vector<Integer> q;
  for (int i = 0; i < 40; ++i)
    q.push_back(from_u64(1 + rng() % 50));
  const auto cf = ContinuedFraction::from_quotients(Integer(2), q);
  for (std::ptrdiff_t s = 0; s <= static_cast<std::ptrdiff_t>(cf.last_index()); ++s) {
    Integer det = cf.p(s) * cf.q(s - 1) - cf.p(s - 1) * cf.q(s);
    EXPECT_EQ(det, (s % 2 == 0) ? Integer(-1) : Integer(1));
  }
}

TEST(ContinuedFraction, RejectsNonPositiveQuotients) {
  EXPECT_THROW(ContinuedFraction::from_quotients(Integer(0), {Integer(2), Integer(0)}), DomainError);
}

TEST(ContinuedFraction, PrefixEnclosureContainsContinuations) {
  const auto cf = ContinuedFraction::from_quotients(Integer(0), {Integer(3), Integer(1), Integer(6)});
  const Enclosure e = cf.enclosure();
  EXPECT_FALSE(e.exact);
  for (int t = 1; t < 50; ++t) {
    const auto longer = ContinuedFraction::from_quotients(Integer(0), {Integer(3), Integer(1), Integer(6), Integer(t), Integer(2)});
    const Rational v = longer.convergent(longer.last_index());
    EXPECT_GT(v, e.lo);
    EXPECT_LT(v, e.hi);
  }
}

TEST(ErrorBracket, EnclosesTrueErrorOfContinuations) {
  const std::vector<Integer> head{Integer(3), Integer(1), Integer(6), Integer(38836), Integer(2)};
  const auto cf = ContinuedFraction::from_quotients(Integer(0), head);
  std::mt19937_64 rng(3);
  for (std::size_t s = 0; s + 1 <= cf.last_index(); ++s) {
    for (std::size_t depth = 0; s + depth + 1 <= cf.last_index(); ++depth) {
      const auto b = error_bracket(cf, s, depth);
      EXPECT_LT(b.lo, b.hi);
      for (int trial = 0; trial < 20; ++trial) {
        auto tail = head;
        for (int k = 0; k < 4; ++k)
          tail.push_back(from_u64(1 + rng() % 9));
        const auto longer = ContinuedFraction::from_quotients(Integer(0), tail);
        const Rational err = oracle::abs_q(longer.convergent(longer.last_index()) - cf.convergent(s));
        EXPECT_GT(err, b.lo) << s << " " << depth;
        EXPECT_LT(err, b.hi) << s << " " << depth;
      }
    }
  }
  EXPECT_THROW(error_bracket(cf, 4, 1), RangeError);
  const auto t = tail_bracket(cf);
  EXPECT_EQ(t.lo, 0);
  EXPECT_EQ(t.hi, Rational(1) / Rational(cf.q(5) * (cf.q(5) + cf.q(4))));
}

TEST(Legendre, ExactRationalsMatchBruteForce) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 60; ++i) {
    const std::uint64_t den = 1 + rng() % 10000;
    const std::uint64_t num = rng() % (3 * den);
    const Rational x = make_rational(from_u64(num), from_u64(den));
    const auto cf = ContinuedFraction::of_rational(x);
    const auto got = legendre_filter(cf, 200);
    const auto ref = oracle::brute_legendre(x, 200);
    ASSERT_EQ(got.size(), ref.size()) << x;
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ(make_rational(got[k].p, from_u64(got[k].q)), ref[k]);
      EXPECT_EQ(got[k].within, Verdict::holds);
      EXPECT_TRUE(got[k].is_convergent) << x << " " << ref[k];
    }
  }
}

TEST(Legendre, PrefixMarksUndecidedEntries) {
  // [1; 2, 2] has enclosure (7/5, 10/7); 3/2 is decided, 7/5 sits on the boundary.
  const auto cf = ContinuedFraction::from_quotients(Integer(1), {Integer(2), Integer(2)});
  const auto got = legendre_filter(cf, 5);
  bool saw_inconclusive = false;
  for (const auto& e : got)
    if (e.within == Verdict::inconclusive)
      saw_inconclusive = true;
  EXPECT_TRUE(saw_inconclusive);
}
