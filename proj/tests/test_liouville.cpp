#include <bfree/liouville.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bfree;

namespace {

PrimePairConstruction reference(std::size_t steps) {
  auto c = PrimePairConstruction::init(2, 3, 1);
  for (std::size_t t = 2; t <= steps && c.status() == ConstructionStatus::active; ++t)
    c = extend(c);
  return c;
}

/// Replays the recurrence independently: q_t = pi_{t mod 2}^alpha_t with
/// alpha_t = alpha_{t-2} + k omega, checking a_t q_{t-1} + q_{t-2} = q_t.
std::vector<mpz_class> replay_q(std::size_t steps) {
  std::vector<mpz_class> q{1, 3};
  std::vector<unsigned long> alpha{0, 1};
  const unsigned long pi[2] = {2, 3};
  for (std::size_t t = 2; t <= steps; ++t) {
    const unsigned long own = pi[t % 2];
    // least alpha > alpha_{t-1} with alpha = alpha_{t-2} mod ord, ord found by stepping
    const mpz_class& mod = q[t - 1];
    mpz_class r = own % mod;
    unsigned long ord = 1;
    while (r != 1) {
      r = (r * own) % mod;
      ++ord;
    }
    unsigned long a = alpha[t - 2];
    while (a <= alpha[t - 1])
      a += ord;
    alpha.push_back(a);
    mpz_class qt;
    mpz_ui_pow_ui(qt.get_mpz_t(), own, a);
    q.push_back(qt);
  }
  return q;
}

} // namespace

TEST(Construction, ReferenceValues) {
  const auto c = reference(4);
  EXPECT_EQ(c.q(), (std::vector<Integer>{Integer(1), Integer(3), Integer(4), Integer(27), Integer(1048576)}));
  EXPECT_EQ(c.a(), (std::vector<Integer>{Integer(0), Integer(3), Integer(1), Integer(6), Integer(38836)}));
  EXPECT_EQ(c.alpha(), (std::vector<Integer>{Integer(0), Integer(1), Integer(2), Integer(3), Integer(20)}));
  EXPECT_EQ(replay_q(4), std::vector<mpz_class>(c.q().begin(), c.q().end()));
}

TEST(Construction, FifthTermIsThreeToThe262147) {
  const auto c = reference(5);
  ASSERT_EQ(c.terms(), 6u);
  EXPECT_EQ(c.alpha()[5], Integer(262147));
  Integer expect;
  mpz_ui_pow_ui(expect.get_mpz_t(), 3, 262147);
  EXPECT_EQ(c.q()[5], expect);
  EXPECT_EQ(decimal_digits(c.q()[5]), static_cast<std::size_t>(std::floor(262147 * std::log10(3.0))) + 1);
  EXPECT_EQ(c.a()[5] * Integer(1048576) + Integer(27), expect);
  EXPECT_TRUE(verify(c).all_passed());
}

TEST(Construction, SixthStepExceedsBudget) {
  const auto c = reference(6);
  EXPECT_EQ(c.status(), ConstructionStatus::growth_exceeded);
  EXPECT_EQ(c.terms(), 6u);
  EXPECT_GT(c.pending_alpha_bits(), 60u);
  EXPECT_THROW(extend(c), DomainError);
}

TEST(Construction, NonMinimalK) {
  auto c = PrimePairConstruction::init(2, 3, 1);
  c = extend(c, Integer(3)); // alpha_2 = 0 + 3 * ord_3(2) = 6
  EXPECT_EQ(c.alpha()[2], Integer(6));
  EXPECT_EQ(c.q()[2], Integer(64));
  c = extend(c, Integer(2));
  EXPECT_TRUE(verify(c).all_passed());
  EXPECT_THROW(extend(PrimePairConstruction::init(2, 3, 1), Integer(0)), DomainError);
}

TEST(Construction, OtherPrimePairs) {
  for (auto [p0, p1] : {std::pair<std::uint64_t, std::uint64_t>{5, 7}, {3, 2}, {2, 11}, {13, 5}}) {
    auto c = PrimePairConstruction::init(p0, p1, 2);
    for (int t = 0; t < 3 && c.status() == ConstructionStatus::active; ++t)
      c = extend(c);
    const auto r = verify(c);
    EXPECT_TRUE(r.all_passed()) << p0 << "," << p1;
  }
}

TEST(Construction, InitValidation) {
  EXPECT_THROW(PrimePairConstruction::init(4, 3, 1), DomainError);
  EXPECT_THROW(PrimePairConstruction::init(3, 3, 1), DomainError);
  EXPECT_THROW(PrimePairConstruction::init(2, 3, 0), DomainError);
}

TEST(Verify, FaultInjectionIsNamed) {
  const auto c = reference(4);
  auto a = c.a();
  a[3] += 1;
  const auto broken = PrimePairConstruction::from_parts(2, 3, c.alpha(), c.k_choices(), a, c.q());
  const auto r = verify(broken);
  EXPECT_FALSE(r.all_passed());
  EXPECT_NE(r.first_failure("q-recurrence"), nullptr);

  auto q = c.q();
  q[3] = 25;
  const auto r2 = verify(PrimePairConstruction::from_parts(2, 3, c.alpha(), c.k_choices(), c.a(), q));
  EXPECT_NE(r2.first_failure("prime-power-form"), nullptr);
}

TEST(Evidence, TauFiveHalves) {
  const auto ev = wstar_evidence(reference(5), Rational(5, 2));
  EXPECT_EQ(ev.hits, (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(ev.misses, (std::vector<std::size_t>{1}));
  EXPECT_EQ(ev.inconclusive, (std::vector<std::size_t>{5}));
  EXPECT_TRUE(ev.all_outside_q);
  EXPECT_EQ(ev.legendre_cutoff, Integer(5));
  EXPECT_EQ(ev.in_q_convergent_hits, 0u);
  EXPECT_EQ(ev.convergents[0].depth, 1);
}

TEST(Evidence, RequiresTauAboveTwo) {
  EXPECT_THROW(wstar_evidence(reference(5), Rational(2)), DomainError);
  EXPECT_THROW(wstar_evidence(reference(2), Rational(3)), DomainError);
}

TEST(Profile, ReferenceValues) {
  const auto p = irrationality_profile(reference(5));
  ASSERT_EQ(p.size(), 4u);
  EXPECT_NEAR(p[0].w, 1 + std::log(4.0) / std::log(3.0), 1e-12);
  EXPECT_NEAR(p[1].w, 1 + std::log(27.0) / std::log(4.0), 1e-12);
  EXPECT_NEAR(p[2].w, 1 + 20 * std::log(2.0) / std::log(27.0), 1e-12);
  EXPECT_NEAR(p[3].w, 1 + 262147 * std::log(3.0) / (20 * std::log(2.0)), 1e-6);
  EXPECT_THROW(irrationality_profile(PrimePairConstruction::init(2, 3, 1)), DomainError);
}
