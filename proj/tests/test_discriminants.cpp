#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "relquad/discriminants.hpp"

using namespace relquad;

namespace {

Ideal gens(const BaseField& K, std::vector<IntElem> g) { return Ideal::from_generators(K, g); }

// x^2 = delta mod 4 solvable, by running over O/4O.
bool is_disc_oracle(const BaseField& K, const IntElem& delta) {
  const long ymax = K.is_rational() ? 1 : 4;
  for (long x = 0; x < 4; ++x)
    for (long y = 0; y < ymax; ++y) {
      IntElem r = K.sub(K.sqr(IntElem{x, y}), delta);
      if (divides(Integer(4), r.x) && divides(Integer(4), r.y)) return true;
    }
  return false;
}

// Over Q: the largest f with f^2 | D and D / f^2 = 0, 1 mod 4.
long rational_conductor_oracle(long D) {
  long best = 1;
  for (long f = 1; f * f <= std::abs(D); ++f)
    if (D % (f * f) == 0 && (oracle::mod(D / (f * f), 4) <= 1)) best = f;
  return best;
}

}  // namespace

TEST(Discriminants, IsDiscriminantExamples) {
  auto K10 = BaseField::quadratic(10);
  EXPECT_TRUE(is_discriminant(K10, IntElem{-2, 0}).has_value());
  auto Q = BaseField::rational();
  EXPECT_FALSE(is_discriminant(Q, IntElem{-2, 0}).has_value());
  EXPECT_TRUE(is_discriminant(Q, IntElem{12, 0}).has_value());
}

TEST(Discriminants, IsDiscriminantMatchesResidueSearch) {
  for (long d : {0, 5, 10, -15, -1, 2}) {
    auto K = BaseField::from_code(d);
    for (long x = -12; x <= 12; ++x)
      for (long y = (K.is_rational() ? 0 : -12); y <= (K.is_rational() ? 0 : 12); ++y) {
        IntElem z{x, y};
        if (z.is_zero()) continue;
        auto w = is_discriminant(K, z);
        EXPECT_EQ(w.has_value(), is_disc_oracle(K, z)) << d << " " << x << " " << y;
        if (w) {
          IntElem r = K.sub(K.sqr(*w), z);
          EXPECT_TRUE(divides(Integer(4), r.x) && divides(Integer(4), r.y));
        }
      }
  }
}

TEST(Discriminants, ConductorExamples) {
  auto K10 = BaseField::quadratic(10);
  auto i = conductor_ideal(K10, IntElem{-4, 0});
  EXPECT_EQ(i.f_delta, gens(K10, {{2, 0}, {0, 1}}));
  EXPECT_EQ(i.rel_disc, Ideal::principal(K10, Integer(2)));
  auto K5 = BaseField::quadratic(5);
  auto j = conductor_ideal(K5, IntElem{-20, 0});
  EXPECT_EQ(j.f_delta, Ideal::principal(K5, IntElem{-1, 2}));
  EXPECT_EQ(j.rel_disc, Ideal::principal(K5, Integer(4)));
  auto Q = BaseField::rational();
  auto k = conductor_ideal(Q, IntElem{-12, 0});
  EXPECT_EQ(k.f_delta, Ideal::principal(Q, Integer(2)));
  EXPECT_EQ(k.rel_disc, Ideal::principal(Q, Integer(3)));
  EXPECT_THROW(conductor_ideal(Q, IntElem{-2, 0}), std::domain_error);
}

TEST(Discriminants, RationalConductorMatchesOracle) {
  auto Q = BaseField::rational();
  for (long D = -600; D <= 600; ++D) {
    if (D == 0 || oracle::mod(D, 4) > 1) continue;
    auto info = conductor_ideal(Q, IntElem{D, 0});
    const long f = rational_conductor_oracle(D);
    EXPECT_EQ(info.f_delta, Ideal::principal(Q, Integer(f))) << D;
    EXPECT_EQ(info.rel_disc, Ideal::principal(Q, Integer(std::abs(D) / (f * f)))) << D;
  }
}

TEST(Discriminants, RelDiscGeneral) {
  auto Q = BaseField::rational();
  EXPECT_EQ(rel_disc_general(Q, IntElem{2, 0}).rel_disc_general, Ideal::principal(Q, Integer(8)));
  EXPECT_TRUE(rel_disc_general(Q, IntElem{1, 0}).rel_disc_general.is_unit());
  auto g = rel_disc_general(Q, IntElem{-4, 0});
  EXPECT_EQ(g.s, Ideal::principal(Q, Integer(2)));
  EXPECT_TRUE(g.t.is_unit());
  EXPECT_EQ(g.rel_disc_general, Ideal::principal(Q, Integer(4)));
}

TEST(Discriminants, RelDiscGeneralAgreesWithConductor) {
  for (long d : {0, 5, 10, -15}) {
    auto K = BaseField::from_code(d);
    for (const auto& info : enumerate_discriminant_classes(K, Integer(500), SignFilter::any))
      EXPECT_EQ(rel_disc_general(K, info.delta).rel_disc_general, info.rel_disc) << d << " " << K.format(info.delta);
  }
}

TEST(Discriminants, UnitDiscriminantExamples) {
  auto K10 = BaseField::quadratic(10);
  EXPECT_TRUE(is_unit_discriminant(K10, IntElem{2, 0}));
  EXPECT_FALSE(is_unit_discriminant(K10, IntElem{-2, 0}));
  EXPECT_TRUE(is_unit_discriminant(BaseField::rational(), IntElem{1, 0}));
}

TEST(Discriminants, FundamentalData) {
  auto Q = BaseField::rational();
  auto a = fundamental_discriminant_data(Q, IntElem{-12, 0});
  ASSERT_TRUE(a.principal_rep.has_value());
  EXPECT_EQ(*a.principal_rep, (IntElem{-3, 0}));
  auto K10 = BaseField::quadratic(10);
  EXPECT_FALSE(fundamental_discriminant_data(K10, IntElem{-4, 0}).principal_rep.has_value());
  auto K5 = BaseField::quadratic(5);
  auto c = fundamental_discriminant_data(K5, IntElem{-20, 0});
  ASSERT_TRUE(c.principal_rep.has_value());
  EXPECT_EQ(*c.principal_rep, (IntElem{-4, 0}));
}

TEST(Discriminants, PrincipalRepIffConductorPrincipal) {
  for (long d : {5, 10, -15}) {
    auto K = BaseField::quadratic(d);
    for (const auto& info : enumerate_discriminant_classes(K, Integer(300), SignFilter::any)) {
      auto data = fundamental_discriminant_data(K, info.delta);
      EXPECT_EQ(data.principal_rep.has_value(), is_principal(info.f_delta).has_value());
      if (data.principal_rep) {
        auto g = is_principal(info.f_delta);
        // delta / g^2 is a unit-square multiple of the representative
        FieldElem q = K.div(to_field(info.delta), K.sqr(*g));
        EXPECT_TRUE(K.is_square(K.div(q, to_field(*data.principal_rep)))) << K.format(info.delta);
        EXPECT_TRUE(conductor_ideal(K, *data.principal_rep).f_delta.is_unit());
      }
    }
  }
}

TEST(Discriminants, ConductorScales) {
  std::mt19937 rng(5);
  for (long d : {0, 5, 10, -15}) {
    auto K = BaseField::from_code(d);
    auto classes = enumerate_discriminant_classes(K, Integer(200), SignFilter::any);
    std::vector<IntElem> multipliers{{2, 0}, {3, 0}};
    if (!K.is_rational()) multipliers.push_back(IntElem{1, 1});
    for (int i = 0; i < 50; ++i) {
      const auto& info = classes[rng() % classes.size()];
      const IntElem a = multipliers[rng() % multipliers.size()];
      auto scaled = conductor_ideal(K, K.mul(K.sqr(a), info.delta));
      EXPECT_EQ(scaled.f_delta, Ideal::principal(K, a) * info.f_delta);
      EXPECT_EQ(scaled.rel_disc, info.rel_disc);
    }
  }
}

TEST(Discriminants, RelDiscIsAClassInvariant) {
  for (long d : {5, 10}) {
    auto K = BaseField::quadratic(d);
    const IntElem e2 = K.sqr(K.fundamental_unit());
    for (const auto& info : enumerate_discriminant_classes(K, Integer(200), SignFilter::any)) {
      EXPECT_EQ(conductor_ideal(K, K.mul(e2, info.delta)).rel_disc, info.rel_disc);
      EXPECT_EQ(conductor_ideal(K, K.mul(K.inverse_unit(e2), info.delta)).rel_disc, info.rel_disc);
    }
  }
}

// For a = (x + y sqrt D)/2 integral in Q(sqrt D), tr(a)^2 - 4 N(a) = y^2 D.
TEST(Discriminants, RationalClassOfDelta) {
  for (long D : {-3, -4, 5, 8, 12, -20, 13, -23, 28}) {
    for (long x = -30; x <= 30; ++x)
      for (long y = -30; y <= 30; ++y) {
        if ((x - y * D) % 2) continue;  // integrality of (x + y sqrt D)/2
        if (oracle::mod(x * x - y * y * D, 4)) continue;
        const long tr = x, nm = (x * x - y * y * D) / 4;
        const long v = tr * tr - 4 * nm;
        if (v == 0) continue;
        ASSERT_EQ(v % D, 0);
        long q = v / D, r = 1;
        while ((r + 1) * (r + 1) <= q) ++r;
        EXPECT_EQ(r * r, q);
      }
    EXPECT_TRUE(is_discriminant(BaseField::rational(), IntElem{D, 0}).has_value());
  }
}

TEST(Discriminants, EnumerationExamples) {
  auto K5 = BaseField::quadratic(5);
  std::multiset<Integer> n5;
  for (const auto& i : enumerate_discriminant_classes(K5, Integer(16), SignFilter::totally_negative))
    n5.insert(abs(K5.norm(i.delta)));
  EXPECT_EQ(n5, (std::multiset<Integer>{5, 9, 16}));
  auto K10 = BaseField::quadratic(10);
  std::multiset<Integer> n10;
  for (const auto& i : enumerate_discriminant_classes(K10, Integer(9), SignFilter::totally_negative))
    n10.insert(abs(K10.norm(i.delta)));
  EXPECT_EQ(n10, (std::multiset<Integer>{4, 9}));
  auto Q = BaseField::rational();
  std::set<Integer> q;
  for (const auto& i : enumerate_discriminant_classes(Q, Integer(5), SignFilter::any)) q.insert(i.delta.x);
  EXPECT_EQ(q, (std::set<Integer>{1, -3, -4, 4, 5}));
}

TEST(Discriminants, UnitDiscriminantClasses) {
  auto count = [](long d) { return unit_discriminants(BaseField::quadratic(d)).classes.size(); };
  EXPECT_EQ(count(-15), 2u);
  EXPECT_EQ(count(-21), 4u);
  EXPECT_EQ(count(10), 2u);
  EXPECT_EQ(count(15), 4u);
  for (long d : {10, 15, -21}) {
    auto K = BaseField::quadratic(d);
    for (const auto& c : unit_discriminants(K).classes) {
      EXPECT_EQ(c.f_delta * c.f_delta, Ideal::principal(K, c.delta));
      EXPECT_TRUE(c.rel_disc.is_unit());
    }
  }
}
