#include <bfree/free_set.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bfree;

namespace {

FreeSetSpec powers_of_two() {
  return FreeSetSpec::table(64, {1, 2, 4, 8, 16, 32, 64}, TableTail{TableTail::Kind::smooth, {2}}, "pow2");
}

} // namespace

TEST(Membership, KFreeMatchesFactorisation) {
  for (unsigned k : {2u, 3u}) {
    const auto spec = FreeSetSpec::kfree(k);
    const auto sieve = sieve_members(spec, 20000);
    for (std::uint64_t q = 1; q <= 20000; ++q) {
      ASSERT_EQ(member(spec, q), oracle::is_kfree(q, k)) << q;
      ASSERT_EQ(sieve[q] != 0, oracle::is_kfree(q, k)) << q;
    }
  }
  EXPECT_FALSE(member(FreeSetSpec::kfree(2), 12));
  EXPECT_TRUE(member(FreeSetSpec::kfree(2), 30));
}

TEST(Membership, CoprimeAndBFree) {
  const auto c = FreeSetSpec::coprime_to(30);
  const auto b = FreeSetSpec::bfree({25, 4, 9, 4});
  const auto sc = sieve_members(c, 5000), sb = sieve_members(b, 5000);
  for (std::uint64_t q = 1; q <= 5000; ++q) {
    ASSERT_EQ(member(c, q), oracle::is_coprime(q, 30));
    ASSERT_EQ(sc[q] != 0, oracle::is_coprime(q, 30));
    ASSERT_EQ(member(b, q), oracle::is_bfree(q, {4, 9, 25}));
    ASSERT_EQ(sb[q] != 0, oracle::is_bfree(q, {4, 9, 25}));
  }
  EXPECT_EQ(b.literal(), "bfree:4,9,25");
}

TEST(Membership, TablesAndTails) {
  const auto p2 = powers_of_two();
  const auto sieve = sieve_members(p2, 5000);
  for (std::uint64_t q = 1; q <= 5000; ++q) {
    const bool pow2 = (q & (q - 1)) == 0;
    ASSERT_EQ(member(p2, q), pow2) << q;
    ASSERT_EQ(sieve[q] != 0, pow2) << q;
  }
  const auto finite = FreeSetSpec::table(10, {1, 2, 3, 6}, TableTail{});
  EXPECT_TRUE(member(finite, 6));
  EXPECT_THROW(member(finite, 11), DomainError);
  EXPECT_THROW(sieve_members(finite, 11), DomainError);
  EXPECT_THROW(FreeSetSpec::table(10, {2, 3}, TableTail{}), DomainError);
  EXPECT_THROW(FreeSetSpec::table(10, {1, 11}, TableTail{}), DomainError);
  EXPECT_THROW(FreeSetSpec::table(10, {1}, TableTail{TableTail::Kind::smooth, {4}}), DomainError);
}

TEST(Membership, FactoryValidation) {
  EXPECT_THROW(FreeSetSpec::kfree(1), DomainError);
  EXPECT_THROW(FreeSetSpec::coprime_to(1), DomainError);
  EXPECT_THROW(FreeSetSpec::bfree({}), DomainError);
  EXPECT_THROW(FreeSetSpec::bfree({1, 4}), DomainError);
  EXPECT_THROW(member(FreeSetSpec::kfree(2), 0), DomainError);
}

TEST(FreeProperty, HoldsForStandardFamilies) {
  for (const auto& spec : {FreeSetSpec::kfree(2), FreeSetSpec::kfree(3), FreeSetSpec::coprime_to(6),
                           FreeSetSpec::bfree({4, 9, 25}), powers_of_two()})
    EXPECT_TRUE(verify_free_property(spec, 20000).violations.empty()) << spec.literal();
}

TEST(FreeProperty, DetectsBrokenTable) {
  // 6 is listed but its divisor 3 is not.
  const auto bad = FreeSetSpec::table(12, {1, 2, 6}, TableTail{});
  const auto r = verify_free_property(bad, 100);
  EXPECT_EQ(r.checked_up_to, 12u);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0], 6u);
}

TEST(Support, StructuralAnswers) {
  EXPECT_EQ(support_primes(FreeSetSpec::kfree(2), 30).primes,
            (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29}));
  EXPECT_EQ(support_primes(FreeSetSpec::coprime_to(6), 20).primes, (std::vector<std::uint64_t>{5, 7, 11, 13, 17, 19}));
  const auto b = support_primes(FreeSetSpec::bfree({2, 9}), 11);
  EXPECT_EQ(b.primes, (std::vector<std::uint64_t>{3, 5, 7, 11}));
  EXPECT_TRUE(b.inconclusive.empty());
  const auto t = support_primes(powers_of_two(), 50);
  EXPECT_EQ(t.primes, (std::vector<std::uint64_t>{2}));
  EXPECT_TRUE(t.inconclusive.empty());
}

TEST(ConvergenceExponentTest, ExactBySupport) {
  EXPECT_EQ(*convergence_exponent(FreeSetSpec::kfree(2)).exact, 1);
  EXPECT_EQ(*convergence_exponent(FreeSetSpec::coprime_to(30)).exact, 1);
  EXPECT_EQ(*convergence_exponent(FreeSetSpec::bfree({4, 9})).exact, 1);
  EXPECT_EQ(*convergence_exponent(powers_of_two()).exact, 0);
  EXPECT_EQ(*convergence_exponent(FreeSetSpec::table(10, {1, 2, 3}, TableTail{})).exact, 0);
}

TEST(CountingFit, SquaresAndSquarefree) {
  auto is_square = [](std::uint64_t q) {
    const auto r = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(q))));
    return r * r == q;
  };
  const auto sq = counting_exponent_fit(is_square, {1000, 10000, 100000, 1000000});
  EXPECT_NEAR(sq.fitted, 0.5, 0.02);
  const auto sf = counting_exponent_fit(FreeSetSpec::kfree(2), {1000, 10000, 100000});
  EXPECT_NEAR(sf.fitted, 1.0, 0.02);
  EXPECT_THROW(counting_exponent_fit(is_square, {10, 100}), DomainError);
  EXPECT_THROW(counting_exponent_fit(is_square, {100, 10, 1000}), DomainError);
  EXPECT_THROW(counting_exponent_fit([](std::uint64_t q) { return q == 1; }, {10, 100, 1000}), UndefinedFit);
}

TEST(Euler, SandwichHolds) {
  for (const auto& spec : {FreeSetSpec::kfree(2), FreeSetSpec::coprime_to(6), powers_of_two()}) {
    for (const auto& nu : {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)}) {
      const auto r = euler_product_partial(spec, nu, 2000, 30);
      EXPECT_TRUE(r.left_le_middle) << spec.literal() << " " << nu;
      EXPECT_TRUE(r.middle_le_right) << spec.literal() << " " << nu;
    }
  }
  EXPECT_THROW(euler_product_partial(FreeSetSpec::kfree(2), Rational(0), 100), DomainError);
}

TEST(Euler, PowersOfTwoAtNuOne) {
  // support {2}: left 1/2, partial sum 2 - 2^-10, product 1 + 1/(2 - 1) = 2
  const auto r = euler_product_partial(powers_of_two(), Rational(1), 1024, 20);
  EXPECT_EQ(r.left_sum, "0.5");
  EXPECT_EQ(r.q_partial_sum, "1.9990234375");
  EXPECT_EQ(r.right_product, "2");
}
