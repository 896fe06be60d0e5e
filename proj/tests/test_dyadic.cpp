#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "relquad/dyadic.hpp"

using namespace relquad::dyadic;

TEST(Dyadic, ResidueFields) {
  ResidueField f2{1}, f4{2};
  for (std::uint8_t y = 0; y < 2; ++y) EXPECT_EQ(f2.add(f2.sqr(y), y), 0);
  const std::uint8_t g = 2;
  EXPECT_EQ(f4.trace(g), 1);
  EXPECT_THROW(f4.artin_schreier(g), std::domain_error);
  const std::uint8_t y = f4.artin_schreier(1);
  EXPECT_EQ(f4.add(f4.sqr(y), y), 1);
  for (std::uint8_t x = 0; x < 4; ++x) EXPECT_EQ(f4.sqr(f4.sqrt(x)), x);
}

TEST(Dyadic, Squares) {
  auto Q2 = LocalField::q2(20);
  EXPECT_TRUE(Q2.is_square(Q2.make(17)).square);
  EXPECT_FALSE(Q2.is_square(Q2.make(-1)).square);
  EXPECT_FALSE(Q2.is_square(Q2.make(2)).square);
  EXPECT_TRUE(Q2.is_square(Q2.make(4 * 9)).square);
  EXPECT_EQ(Q2.unit_level(Q2.make(5)), 2);
  auto U = LocalField::unramified(20);
  EXPECT_TRUE(U.is_square(U.make(5)).square);
  auto R = LocalField::ramified(-1, 20);
  EXPECT_TRUE(R.is_square(R.make(-1)).square);
  for (const auto& F : LocalField::all(8))
    for (const auto& x : F.samples(6)) {
      if (F.is_zero(x)) continue;
      auto t = F.is_square(x);
      if (t.square) {
        ASSERT_TRUE(t.certificate.has_value());
        auto diff = F.sub(F.sqr(*t.certificate), x);
        EXPECT_TRUE(F.is_zero(diff) || F.valuation(diff) >= F.valuation(x) + 2 * F.e() + 1);
      }
      EXPECT_TRUE(F.is_square(F.sqr(x)).square);
    }
}

TEST(Dyadic, HilbertExamples) {
  auto Q2 = LocalField::q2(24);
  EXPECT_EQ(Q2.hilbert(Q2.make(2), Q2.make(3)), -1);
  for (const auto& F : LocalField::all(8))
    for (const auto& a : F.samples(4)) {
      if (F.is_zero(a)) continue;
      EXPECT_EQ(F.hilbert(F.one(), a), 1);
      EXPECT_EQ(F.hilbert(a, F.neg(a)), 1);
    }
}

TEST(Dyadic, Q2HilbertMatchesClosedForm) {
  auto Q2 = LocalField::q2(24);
  const std::vector<long> reps{1, 3, 5, 7, 2, 6, 10, 14};
  for (long a : reps)
    for (long b : reps) EXPECT_EQ(Q2.hilbert(Q2.make(a), Q2.make(b)), oracle::hilbert_2(a, b)) << a << " " << b;
}

TEST(Dyadic, SquareClassDecomposition) {
  for (const auto& F : LocalField::all(8)) {
    const int D = F.square_class_dim();
    EXPECT_EQ(D, F.degree() + 2);
    for (std::uint32_t m = 0; m < (1u << D); ++m) EXPECT_EQ(F.decompose(F.compose(m)), m);
    for (std::uint32_t m = 0; m < (1u << D); m += 3)
      for (std::uint32_t n = 0; n < (1u << D); n += 5)
        EXPECT_EQ(F.decompose(F.mul(F.compose(m), F.compose(n))), m ^ n);
  }
}

TEST(Dyadic, FiltrationDimensions) {
  auto q2 = analyze(LocalField::q2().with_precision(LocalField::q2().default_precision()));
  EXPECT_EQ(std::vector<int>(q2.dims.begin(), q2.dims.begin() + 3), (std::vector<int>{3, 2, 1}));
  auto r2 = LocalField::ramified(2);
  auto rep = analyze(r2.with_precision(r2.default_precision()));
  EXPECT_EQ(std::vector<int>(rep.dims.begin(), rep.dims.begin() + 4), (std::vector<int>{4, 3, 2, 1}));
}

TEST(Dyadic, DualityAllFields) {
  for (int extra : {0, 4})
    for (const auto& F : LocalField::all(extra)) {
      auto r = analyze(F);
      EXPECT_TRUE(r.ok()) << r.field << " precision " << r.precision;
      EXPECT_TRUE(r.duality) << r.field;
    }
}

TEST(Dyadic, AnswersStableUnderPrecision) {
  for (const auto& F : LocalField::all()) {
    auto lo = analyze(F), hi = analyze(F.with_precision(F.precision() + 4));
    EXPECT_EQ(lo.gram, hi.gram) << F.name();
    EXPECT_EQ(lo.dims, hi.dims) << F.name();
  }
}

TEST(Dyadic, ProductFormulaOverQ) {
  std::mt19937 rng(31);
  std::uniform_int_distribution<long> dist(-300, 300);
  auto Q2 = LocalField::q2(40);
  for (int i = 0; i < 200; ++i) {
    long a = 0, b = 0;
    while (a == 0) a = dist(rng);
    while (b == 0) b = dist(rng);
    int prod = Q2.hilbert(Q2.make(a), Q2.make(b)) * oracle::hilbert_real(a, b);
    for (long p = 3; p <= 300; p += 2) {
      bool prime = true;
      for (long q = 3; q * q <= p; q += 2) prime = prime && p % q;
      if (prime && (a % p == 0 || b % p == 0)) prod *= oracle::hilbert_odd(a, b, p);
    }
    EXPECT_EQ(prod, 1) << a << " " << b;
  }
}
