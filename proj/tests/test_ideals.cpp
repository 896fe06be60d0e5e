#include <gtest/gtest.h>

#include "relquad/ideals.hpp"

using namespace relquad;

TEST(Ideals, GeneratorsAndNorms) {
  auto K10 = BaseField::quadratic(10);
  Ideal p2 = Ideal::from_generators(K10, std::vector<IntElem>{{2, 0}, {0, 1}});
  EXPECT_EQ(p2.norm_int(), 2);
  Ideal p3 = Ideal::from_generators(K10, std::vector<IntElem>{{3, 0}, {1, 1}});
  EXPECT_EQ(p3.norm_int(), 3);
  EXPECT_EQ(p2 * p2, Ideal::principal(K10, Integer(2)));
  EXPECT_FALSE(is_principal(p2).has_value());
  EXPECT_TRUE(is_principal(p2 * p2).has_value());
}

TEST(Ideals, FactorReassemble) {
  auto K5 = BaseField::quadratic(5);
  Ideal D = Ideal::principal(K5, IntElem{-2, -1});
  auto f = factor(D);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].first.p, 5);
  EXPECT_EQ(f[0].second, 1);
  for (long d : {5, 10, -15, -1}) {
    auto K = BaseField::quadratic(d);
    for (unsigned long n = 1; n <= 120; ++n)
      for (const auto& I : ideals_of_norm(K, Integer(n))) {
        EXPECT_EQ(reassemble(K, factor(I)), I);
        EXPECT_EQ(I.norm_int(), n);
      }
  }
}

TEST(Ideals, ArithmeticLaws) {
  for (long d : {10, -15, 5}) {
    auto K = BaseField::quadratic(d);
    std::vector<Ideal> all;
    for (unsigned long n = 1; n <= 30; ++n)
      for (const auto& I : ideals_of_norm(K, Integer(n))) all.push_back(I);
    for (const auto& a : all)
      for (const auto& b : all) {
        EXPECT_EQ((a * b).norm_int(), a.norm_int() * b.norm_int());
        EXPECT_EQ((a * b) / b, a);
        EXPECT_TRUE((a + b).divides(a));
        EXPECT_TRUE(a.divides(a * b));
        EXPECT_EQ(a * b, a.intersect(b) * (a + b));
      }
    for (const auto& a : all) {
      EXPECT_EQ(a * a.inverse(), Ideal::unit(K));
      EXPECT_EQ(a * a.conj(), Ideal::principal(K, a.norm_int()));
    }
  }
}

TEST(Ideals, CountsAgree) {
  for (long d : {5, 10, -15, -1, -3}) {
    auto K = BaseField::quadratic(d);
    for (unsigned long n = 1; n <= 300; ++n)
      EXPECT_EQ(Integer(static_cast<unsigned long>(ideals_of_norm(K, Integer(n)).size())),
                count_ideals_of_norm(K, Integer(n)));
  }
}

TEST(Ideals, MobiusAndDivisors) {
  auto K = BaseField::quadratic(-15);
  for (unsigned long n = 1; n <= 60; ++n)
    for (const auto& I : ideals_of_norm(K, Integer(n))) {
      int s = 0;
      for (const auto& d : divisors(I)) s += mobius(d);
      EXPECT_EQ(s, I.is_unit() ? 1 : 0);
    }
}

TEST(Ideals, PrincipalityMatchesClassGroup) {
  // Q(sqrt 10) has class number 2, so a product of two non-principal ideals is principal.
  auto K = BaseField::quadratic(10);
  std::vector<Ideal> nonprincipal;
  for (unsigned long n = 2; n <= 100; ++n)
    for (const auto& I : ideals_of_norm(K, Integer(n))) {
      auto g = is_principal(I);
      if (g) {
        EXPECT_EQ(Ideal::principal(K, *g), I);
      } else {
        nonprincipal.push_back(I);
      }
    }
  ASSERT_FALSE(nonprincipal.empty());
  for (const auto& a : nonprincipal)
    for (const auto& b : nonprincipal) EXPECT_TRUE(is_principal(a * b).has_value());
}

TEST(Ideals, TextRoundTrip) {
  auto K = BaseField::quadratic(10);
  for (unsigned long n = 1; n <= 40; ++n)
    for (const auto& I : ideals_of_norm(K, Integer(n))) {
      EXPECT_EQ(Ideal::parse(K, I.hnf_text()), I);
      EXPECT_EQ(Ideal::parse(K, I.pretty()), I);
      EXPECT_EQ(Ideal::parse(K, display(I)), I);
    }
  auto Q = BaseField::rational();
  EXPECT_EQ(Ideal::parse(Q, "(6)").norm_int(), 6);
  EXPECT_EQ(Ideal::principal(Q, Integer(6)).inverse() * Ideal::principal(Q, Integer(6)), Ideal::unit(Q));
}

TEST(Ideals, Residues) {
  auto K = BaseField::quadratic(-15);
  for (unsigned long n = 1; n <= 30; ++n)
    for (const auto& I : ideals_of_norm(K, Integer(n))) {
      auto rs = I.residues();
      EXPECT_EQ(rs.size(), n);
      std::set<IntElem> seen(rs.begin(), rs.end());
      EXPECT_EQ(seen.size(), n);
      for (const auto& r : rs) EXPECT_EQ(I.reduce(r), r);
    }
  EXPECT_THROW(Ideal::principal(K, Integer(2000)).residues(1000), EnumerationBoundExceeded);
}

TEST(Ideals, HnfIgnoresGeneratorChoice) {
  auto K = BaseField::quadratic(-15);
  for (unsigned long n = 1; n <= 50; ++n)
    for (const auto& I : ideals_of_norm(K, Integer(n))) {
      auto b = I.numerator_basis();
      std::vector<IntElem> g1{b[1], b[0]};
      std::vector<IntElem> g2{K.add(b[0], b[1]), b[1], K.scale(b[0], Integer(3))};
      std::vector<IntElem> g3{K.sub(b[1], K.scale(b[0], Integer(7))), K.neg(b[0])};
      EXPECT_EQ(Ideal::from_generators(K, g1).hnf_text(), I.hnf_text());
      EXPECT_EQ(Ideal::from_generators(K, g2).hnf_text(), I.hnf_text());
      EXPECT_EQ(Ideal::from_generators(K, g3).hnf_text(), I.hnf_text());
    }
}

TEST(Ideals, ChineseRemainder) {
  for (long d : {10, -15}) {
    auto K = BaseField::quadratic(d);
    std::vector<Ideal> all;
    for (unsigned long n = 2; n <= 20; ++n)
      for (const auto& I : ideals_of_norm(K, Integer(n))) all.push_back(I);
    for (const auto& a : all)
      for (const auto& b : all) {
        if (!(a + b).is_unit() || a.norm_int() * b.norm_int() > 200) continue;
        const auto rs = (a * b).residues();
        std::set<std::pair<IntElem, IntElem>> images;
        for (const auto& r : rs) images.insert({a.reduce(r), b.reduce(r)});
        EXPECT_EQ(images.size(), rs.size());
        EXPECT_EQ(Integer(static_cast<unsigned long>(rs.size())), a.norm_int() * b.norm_int());
      }
  }
}

TEST(Ideals, PrincipalPrimesOfQSqrt10) {
  auto K = BaseField::quadratic(10);
  std::size_t total = 0, principal = 0;
  for (unsigned long p = 2; p <= 100; ++p) {
    bool prime = true;
    for (unsigned long q = 2; q * q <= p; ++q) prime = prime && p % q;
    if (!prime) continue;
    const auto ps = primes_above(K, Integer(p));
    // x^2 - 10 y^2 = +-p
    bool form = false;
    for (long y = 0; y <= 60 && !form; ++y)
      for (long x = 0; x <= 200 && !form; ++x) {
        const long v = x * x - 10 * y * y;
        form = v == static_cast<long>(p) || v == -static_cast<long>(p);
      }
    for (const auto& P : ps) {
      if (P.residue_degree != 1) continue;
      ++total;
      const bool pr = is_principal(P.ideal).has_value();
      principal += pr;
      EXPECT_EQ(pr, form) << p;
    }
  }
  // frozen from an independent count of x^2 - 10 y^2 = +-p
  EXPECT_EQ(total, 26u);
  EXPECT_EQ(principal, 10u);
}
