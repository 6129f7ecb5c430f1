#include <bfree/dimension.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace bfree;

namespace {

FreeSetSpec all_integers() { return FreeSetSpec::table(1, {1}, TableTail{TableTail::Kind::all, {}}, "all"); }

FreeSetSpec powers_of_two() {
  return FreeSetSpec::table(1, {1}, TableTail{TableTail::Kind::smooth, {2}}, "pow2");
}

} // namespace

TEST(Formula, Examples) {
  const auto w = theoretical_dimension(1, Rational(3), DimensionSet::w, {Rational(1), true});
  EXPECT_EQ(*w.value, Rational(2, 3));
  EXPECT_TRUE(w.asserted);

  const auto ws = theoretical_dimension(2, Rational(3), DimensionSet::wstar, NuInput::from_spec(FreeSetSpec::coprime_to(6)));
  ASSERT_TRUE(ws.interval.has_value());
  EXPECT_EQ(ws.interval->first, Rational(2, 3));
  EXPECT_EQ(ws.interval->second, Rational(1));
  EXPECT_TRUE(ws.asserted);
  EXPECT_FALSE(ws.value.has_value());

  const auto wq = theoretical_dimension(1, Rational(3), DimensionSet::wq, {Rational(0), true});
  EXPECT_EQ(*wq.value, Rational(1, 3));
  EXPECT_TRUE(wq.asserted);
}

TEST(Formula, GatesFlagViolations) {
  const auto w = theoretical_dimension(1, Rational(3, 2), DimensionSet::w, {Rational(1), true});
  EXPECT_FALSE(w.asserted);
  EXPECT_FALSE(w.note.empty());
  const auto ws1 = theoretical_dimension(1, Rational(3), DimensionSet::wstar, {Rational(1), true});
  EXPECT_FALSE(ws1.asserted);
  const auto ws0 = theoretical_dimension(2, Rational(3), DimensionSet::wstar, {Rational(0), true});
  EXPECT_EQ(*ws0.value, Rational(1));
  EXPECT_TRUE(ws0.asserted);
  const auto finite = theoretical_dimension(2, Rational(3), DimensionSet::wstar,
                                            NuInput::from_spec(FreeSetSpec::table(4, {1, 2}, TableTail{})));
  EXPECT_FALSE(finite.asserted);
  EXPECT_THROW(theoretical_dimension(1, Rational(1), DimensionSet::w, {Rational(1), true}), DomainError);
}

TEST(CoverSeries, DirectSummation) {
  const auto r = cover_series(all_integers(), 1, Rational(3), Rational(1), 1, 10, 30);
  double ref = 0;
  for (int q = 1; q <= 10; ++q)
    ref += 2.0 / (q * q);
  EXPECT_NEAR(std::stod(r.value), ref, 1e-15);
  EXPECT_EQ(r.members, 10u);
  EXPECT_EQ(r.value.substr(0, 18), "3.0995354623330813");
}

TEST(CoverSeries, AdditiveAndMonotone) {
  const auto spec = FreeSetSpec::kfree(2);
  const unsigned digits = 40;
  const auto whole = cover_series(spec, 2, Rational(3), Rational(1, 2), 1, 50000, digits);
  const auto left = cover_series(spec, 2, Rational(3), Rational(1, 2), 1, 20000, digits);
  const auto right = cover_series(spec, 2, Rational(3), Rational(1, 2), 20001, 50000, digits);
  EXPECT_NEAR(std::stod(whole.value), std::stod(left.value) + std::stod(right.value), 1e-6);
  const auto smaller = cover_series(spec, 2, Rational(3), Rational(3, 5), 1, 50000, digits);
  EXPECT_LT(std::stod(smaller.value), std::stod(whole.value));
}

TEST(CoverSeries, PowersOfTwoGeometric) {
  // 2^(1/2) * sum_{j=0}^{9} 2^(-j/2)
  const auto r = cover_series(powers_of_two(), 1, Rational(3), Rational(1, 2), 1, 1023, 30);
  double ref = 0;
  for (int j = 0; j < 10; ++j)
    ref += std::pow(2.0, -0.5 * j);
  ref *= std::sqrt(2.0);
  EXPECT_NEAR(std::stod(r.value), ref, 1e-13);
  EXPECT_EQ(r.members, 10u);
}

TEST(CoverSeries, ThreadCountDoesNotChangeDigits) {
  const auto spec = FreeSetSpec::kfree(2);
  setenv("BFREE_LAB_THREADS", "1", 1);
  const auto a = cover_series(spec, 1, Rational(3), Rational(2, 3), 1, 100000, 50);
  setenv("BFREE_LAB_THREADS", "4", 1);
  const auto b = cover_series(spec, 1, Rational(3), Rational(2, 3), 1, 100000, 50);
  unsetenv("BFREE_LAB_THREADS");
  EXPECT_EQ(a.value, b.value);
}

TEST(Critical, AllIntegersSmall) {
  const auto r = critical_exponent(all_integers(), 1, Rational(3), std::uint64_t{1} << 16);
  ASSERT_TRUE(r.s_star.has_value());
  EXPECT_NEAR(*r.s_star, 2.0 / 3.0, 0.05);
  EXPECT_EQ(r.exact_value, Rational(2, 3));
}

TEST(Critical, PowersOfTwoSkipsNothingAndFindsOneThird) {
  const auto r = critical_exponent(powers_of_two(), 1, Rational(3), std::uint64_t{1} << 16);
  ASSERT_TRUE(r.s_star.has_value());
  EXPECT_NEAR(*r.s_star, 1.0 / 3.0, 0.05);
  for (const auto& b : r.grid.front().blocks)
    EXPECT_EQ(b.members, 1u);
}

TEST(Critical, Validation) {
  EXPECT_THROW(critical_exponent(all_integers(), 1, Rational(3), 1000), DomainError);
  EXPECT_THROW(critical_exponent(all_integers(), 1, Rational(3), 1 << 16, {Rational(3)}), DomainError);
  EXPECT_THROW(critical_exponent(all_integers(), 1, Rational(3), 1 << 16, {Rational(1, 2), Rational(1, 4)}), DomainError);
}

TEST(Critical, MarksEmptyBlocks) {
  // powers of 3: the block [4, 8) has no member
  const auto spec = FreeSetSpec::table(1, {1}, TableTail{TableTail::Kind::smooth, {3}});
  const auto r = critical_exponent(spec, 1, Rational(3), std::uint64_t{1} << 16);
  std::size_t skipped = 0;
  for (const auto& b : r.grid.front().blocks) {
    EXPECT_EQ(b.skipped, b.members == 0);
    skipped += b.skipped;
  }
  EXPECT_GT(skipped, 0u);
  EXPECT_TRUE(r.grid.front().blocks[2].skipped);
}
