#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "relquad/characters.hpp"

using namespace relquad;

namespace {

// Kronecker symbol (D/n) for D = 0, 1 mod 4.
int kronecker(long D, long n) {
  int r = 1;
  while (n % 2 == 0) {
    n /= 2;
    if (D % 2 == 0) return 0;
    if (oracle::mod(D, 8) == 3 || oracle::mod(D, 8) == 5) r = -r;
  }
  for (long p = 3; p <= n; p += 2)
    while (n % p == 0) {
      n /= p;
      r *= oracle::legendre(D, p);
    }
  return r;
}

long fundamental_part(long D) {
  long best = D;
  for (long f = 1; f * f <= std::abs(D); ++f)
    if (D % (f * f) == 0 && oracle::mod(D / (f * f), 4) <= 1) best = D / (f * f);
  return best;
}

Ideal ideal(const BaseField& K, long n) { return Ideal::principal(K, Integer(n)); }

}  // namespace

TEST(Characters, LegPrimeExamples) {
  auto Q = BaseField::rational();
  CharacterContext c5(Q, IntElem{5, 0});
  EXPECT_EQ(c5.leg(ideal(Q, 11)), 1);
  EXPECT_EQ(c5.leg(ideal(Q, 2)), -1);
  auto K10 = BaseField::quadratic(10);
  CharacterContext cm2(K10, IntElem{-2, 0});
  EXPECT_EQ(cm2.leg(Ideal::from_generators(K10, std::vector<IntElem>{{3, 0}, {1, 1}})), 1);
  CharacterContext c12(Q, IntElem{12, 0});
  EXPECT_EQ(c12.leg(Ideal::unit(Q)), 1);
  EXPECT_EQ(c12.leg(ideal(Q, 11)), 1);
  EXPECT_EQ(c12.leg(ideal(Q, 5)), -1);
  EXPECT_THROW(c12.leg(ideal(Q, 3)), std::domain_error);
}

TEST(Characters, PsiExamples) {
  auto Q = BaseField::rational();
  CharacterContext c(Q, IntElem{-4, 0});
  EXPECT_EQ(c.psi(IntElem{3, 0}), -1);
  EXPECT_EQ(c.psi(IntElem{-1, 0}), -1);
  EXPECT_EQ(c.psi(IntElem{5, 0}), 1);
  EXPECT_EQ(c.psi(IntElem{1, 0}), 1);
  CharacterContext c12(Q, IntElem{12, 0});
  std::vector<int> got;
  for (long a : {1, 5, 7, 11}) got.push_back(c12.psi(IntElem{a, 0}));
  EXPECT_EQ(got, (std::vector<int>{1, -1, -1, 1}));
}

TEST(Characters, ConductorExamples) {
  auto Q = BaseField::rational();
  EXPECT_EQ(CharacterContext(Q, IntElem{-12, 0}).conductor_of_psi().conductor, ideal(Q, 3));
  EXPECT_EQ(CharacterContext(Q, IntElem{-4, 0}).conductor_of_psi().conductor, ideal(Q, 4));
  auto K10 = BaseField::quadratic(10);
  auto r = CharacterContext(K10, IntElem{2, 0}).conductor_of_psi();
  EXPECT_TRUE(r.conductor.is_unit());
  EXPECT_TRUE(r.well_defined);
}

TEST(Characters, UlegAndChiExamples) {
  auto Q = BaseField::rational();
  CharacterContext c(Q, IntElem{-12, 0});
  EXPECT_EQ(c.uleg(ideal(Q, 2)), -1);
  EXPECT_EQ(c.uleg(ideal(Q, 3)), 0);
  CharacterContext c16(Q, IntElem{-16, 0});
  EXPECT_EQ(c16.chi(ideal(Q, 4)), 2);
  EXPECT_EQ(c16.chi(Ideal::unit(Q)), 1);
  CharacterContext c12(Q, IntElem{12, 0});
  EXPECT_EQ(c12.chi(ideal(Q, 5)), -1);
  CharacterContext c4(Q, IntElem{-4, 0});
  auto sums = chi_norm_sums(c4, 5);
  EXPECT_EQ(std::vector<Integer>(sums.begin() + 1, sums.end()), (std::vector<Integer>{1, 0, -1, 0, 1}));
}

TEST(Characters, RationalUlegIsKronecker) {
  auto Q = BaseField::rational();
  for (long D = -200; D <= 200; ++D) {
    if (D == 0 || oracle::mod(D, 4) > 1) continue;
    CharacterContext ctx(Q, IntElem{D, 0});
    const long D0 = fundamental_part(D);
    for (long n = 1; n <= 60; ++n) EXPECT_EQ(ctx.uleg(ideal(Q, n)), kronecker(D0, n)) << D << " " << n;
  }
}

TEST(Characters, SplittingMatchesLeg) {
  // K = Q(sqrt 5), delta = -4: a prime P not above 2 splits in K(i) iff leg = +1, i.e. iff
  // -1 is a square in the residue field.
  auto K = BaseField::quadratic(5);
  CharacterContext ctx(K, IntElem{-4, 0});
  for (const auto& P : primes_by_norm(K, 400)) {
    if (P.p == 2) continue;
    const long q = P.norm().get_si();
    EXPECT_EQ(ctx.leg(P.ideal), q % 4 == 1 ? 1 : -1) << q;
  }
}

TEST(Characters, AuxiliaryChoiceIrrelevant) {
  for (long d : {10, -15}) {
    auto K = BaseField::quadratic(d);
    for (const auto& info : enumerate_discriminant_classes(K, Integer(60), SignFilter::any)) {
      CharacterContext ctx(K, info.delta);
      for (unsigned long n = 1; n <= 40; ++n)
        for (const auto& a : ideals_of_norm(K, Integer(n))) {
          if (!coprime(a, ctx.conductor()) || ctx.coprime_to_delta(a)) continue;
          std::set<int> values;
          for (const auto& b : ctx.auxiliary_candidates(a, 3)) values.insert(ctx.uleg_via(a, b));
          EXPECT_EQ(values.size(), 1u) << K.format(info.delta) << " " << a.pretty();
        }
    }
  }
}

TEST(Characters, ClassInvariance) {
  std::mt19937 rng(17);
  for (long d : {0, 5, 10, -15}) {
    auto K = BaseField::from_code(d);
    auto classes = enumerate_discriminant_classes(K, Integer(100), SignFilter::any);
    for (int i = 0; i < 10; ++i) {
      const auto& info = classes[rng() % classes.size()];
      const IntElem c{static_cast<long>(rng() % 5) + 1, K.is_rational() ? 0 : static_cast<long>(rng() % 3)};
      CharacterContext a(K, info.delta), b(K, K.mul(K.sqr(c), info.delta));
      for (unsigned long n = 1; n <= 50; ++n)
        for (const auto& I : ideals_of_norm(K, Integer(n))) {
          if (!coprime(I, a.conductor()) || !coprime(I, b.conductor())) continue;
          EXPECT_EQ(a.uleg(I), b.uleg(I));
        }
    }
  }
}

TEST(Characters, ChiMultiplicative) {
  std::mt19937 rng(23);
  for (long d : {0, 5, 10, -15}) {
    auto K = BaseField::from_code(d);
    std::vector<Ideal> pool;
    for (unsigned long n = 1; n <= 60; ++n)
      for (const auto& I : ideals_of_norm(K, Integer(n))) pool.push_back(I);
    for (const auto& info : enumerate_discriminant_classes(K, Integer(40), SignFilter::any)) {
      CharacterContext ctx(K, info.delta);
      for (int i = 0; i < 100; ++i) {
        const Ideal& a = pool[rng() % pool.size()];
        const Ideal& b = pool[rng() % pool.size()];
        if (!coprime(a, b)) continue;
        EXPECT_EQ(ctx.chi(a * b), ctx.chi(a) * ctx.chi(b));
      }
    }
  }
}

TEST(Characters, ChiDivisorSum) {
  auto K = BaseField::quadratic(10);
  for (const auto& info : enumerate_discriminant_classes(K, Integer(150), SignFilter::any)) {
    CharacterContext ctx(K, info.delta);
    for (unsigned long n = 1; n <= 80; ++n)
      for (const auto& a : ideals_of_norm(K, Integer(n))) EXPECT_EQ(ctx.chi(a), ctx.chi_divisor_sum(a));
  }
}
