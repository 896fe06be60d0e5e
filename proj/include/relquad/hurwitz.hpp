#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "relquad/characters.hpp"

namespace relquad {

using Form = std::array<Integer, 3>;

inline void check_negative_discriminant(const Integer& D) {
  if (D >= 0 || (mod(D, 4) != 0 && mod(D, 4) != 1)) throw std::invalid_argument("expected a negative discriminant");
}

/// Reduced forms (a, b, c) with b^2 - 4ac = D, imprimitive ones included.
inline std::vector<Form> reduced_forms(const Integer& D) {
  check_negative_discriminant(D);
  std::vector<Form> out;
  const Integer amax = isqrt(-D / 3) + 1;
  for (Integer a = 1; a <= amax; ++a)
    for (Integer b = -a + 1; b <= a; ++b) {
      const Integer num = b * b - D;
      if (!divides(4 * a, num)) continue;
      const Integer c = num / (4 * a);
      if (c < a) continue;
      if (a == c && b < 0) continue;
      out.push_back({a, b, c});
    }
  return out;
}

inline bool is_primitive(const Form& f) { return gcd(gcd(f[0], f[1]), f[2]) == 1; }

/// Number of units of the quadratic order of discriminant D < 0.
inline int order_units(const Integer& D) { return D == -3 ? 6 : (D == -4 ? 4 : 2); }

inline Integer class_number_forms(const Integer& D) {
  Integer h = 0;
  for (const auto& f : reduced_forms(D))
    if (is_primitive(f)) ++h;
  return h;
}

/// Sum over f^2 | D of primitive reduced forms of D/f^2, each weighted by 2/w(D/f^2).
inline Rational hurwitz_H_oracle(const Integer& D) {
  check_negative_discriminant(D);
  Rational total = 0;
  for (Integer f = 1; f * f <= -D; ++f) {
    if (!divides(f * f, D)) continue;
    const Integer Df = D / (f * f);
    if (mod(Df, 4) != 0 && mod(Df, 4) != 1) continue;
    total += Rational(class_number_forms(Df) * 2, order_units(Df));
  }
  total.canonicalize();
  return total;
}

/// Class number of Q(sqrt D0) by grouping integral ideals up to the Minkowski bound.
inline Integer class_number_ideals(const Integer& D0) {
  Integer d = D0;
  if (divides(Integer(4), d)) d /= 4;
  const BaseField L = BaseField::quadratic(d);
  std::vector<Ideal> reps;
  const Integer bound = isqrt(abs(L.disc())) + 1;
  for (Integer n = 1; n <= bound; ++n)
    for (const auto& I : ideals_of_norm(L, n)) {
      bool known = false;
      for (const auto& R : reps)
        if (is_principal(I * R.conj())) {
          known = true;
          break;
        }
      if (!known) reps.push_back(I);
    }
  return Integer(static_cast<unsigned long>(reps.size()));
}

struct HurwitzResult {
  Integer delta;
  Rational H_formula;
  Rational H_oracle;
  Integer h;
  int w = 2;
  Integer f;
};

/// h(D0)/(w(D0)/2) * sum_{d | f} d prod_{p | d} (1 - uleg(D, p)/p) with D = D0 f^2.
inline Rational hurwitz_H(const Integer& D, Integer* h_out = nullptr, int* w_out = nullptr, Integer* f_out = nullptr) {
  check_negative_discriminant(D);
  const BaseField Q = BaseField::rational();
  const CharacterContext ctx(Q, IntElem{D, 0});
  const Integer f = ctx.f_delta().a();
  const Integer D0 = D / (f * f);
  const Integer h = class_number_forms(D0);
  const int w = order_units(D0);
  Rational sum = 0;
  for (const auto& dI : divisors(ctx.f_delta())) {
    Rational term(dI.a());
    for (const auto& [P, e] : factor(dI)) {
      (void)e;
      term *= 1 - Rational(ctx.uleg(P.ideal), P.p);
    }
    sum += term;
  }
  Rational H = Rational(h * 2, w) * sum;
  H.canonicalize();
  if (h_out) *h_out = h;
  if (w_out) *w_out = w;
  if (f_out) *f_out = f;
  return H;
}

inline HurwitzResult hurwitz(const Integer& D) {
  HurwitzResult r;
  r.delta = D;
  r.H_formula = hurwitz_H(D, &r.h, &r.w, &r.f);
  r.H_oracle = hurwitz_H_oracle(D);
  return r;
}

}  // namespace relquad
