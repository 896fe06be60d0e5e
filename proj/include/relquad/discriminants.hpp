#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "relquad/dyadic.hpp"
#include "relquad/ideals.hpp"

namespace relquad {

inline bool in_four_O(const IntElem& z) { return divides(Integer(4), z.x) && divides(Integer(4), z.y); }

/// x modulo 2a with x^2 = delta mod 4a, if any.
inline std::optional<IntElem> sqrt_mod_4a(const BaseField& K, const IntElem& delta, const Ideal& a,
                                          std::size_t bound = kDefaultEnumerationBound) {
  const Ideal two_a = a * Ideal::principal(K, Integer(2));
  const Ideal four_a = two_a * Ideal::principal(K, Integer(2));
  for (const auto& x : two_a.residues(bound))
    if (four_a.contains(K.sub(K.sqr(x), delta))) return x;
  return std::nullopt;
}

/// Some x with x^2 - delta in 4O.
inline std::optional<IntElem> is_discriminant(const BaseField& K, const IntElem& delta) {
  if (delta.is_zero()) return std::nullopt;
  for (const auto& x : Ideal::principal(K, Integer(2)).residues())
    if (in_four_O(K.sub(K.sqr(x), delta))) return x;
  return std::nullopt;
}

/// x^2 = delta mod M solvable, for M a power of a prime above 2.
inline bool is_square_mod_dyadic_power(const BaseField& K, const IntElem& delta, const PrimeIdeal& P, int m,
                                       std::size_t bound = kDefaultEnumerationBound) {
  if (m <= 0) return true;
  const int e = P.e();
  if (m >= 2 * e) return sqrt_mod_4a(K, delta, P.ideal.pow(m - 2 * e), bound).has_value();
  const Ideal M = P.ideal.pow(m);
  for (const auto& x : M.residues(bound))
    if (M.contains(K.sub(K.sqr(x), delta))) return true;
  return false;
}

/// The same question answered in the completion at P.
inline bool is_square_mod_local(const BaseField& K, const IntElem& delta, const PrimeIdeal& P, int m) {
  const auto emb = dyadic::embed_at(K, P);
  return emb.F.is_square_mod(emb.apply(delta), m);
}

/// Largest k <= l/2 with x^2 = delta mod 4P^{2k} solvable, by enumeration and by the local
/// square analysis; throws if the two disagree.
inline int dyadic_conductor_exponent(const BaseField& K, const IntElem& delta, const PrimeIdeal& P, int l) {
  const int e = P.e();
  for (int k = l / 2; k >= 0; --k) {
    const bool local = is_square_mod_local(K, delta, P, 2 * e + 2 * k);
    bool enumerated = local;
    Integer size = pow(P.norm(), static_cast<unsigned long>(2 * k)) * pow(Integer(2), 2 * K.degree());
    if (size <= Integer(static_cast<unsigned long>(kDefaultEnumerationBound)))
      enumerated = sqrt_mod_4a(K, delta, P.ideal.pow(2 * k)).has_value();
    if (enumerated != local)
      throw std::logic_error("dyadic solvability: enumeration and local analysis disagree");
    if (local) return k;
  }
  throw std::domain_error("not a discriminant at a prime above 2");
}

struct DiscriminantInfo {
  IntElem delta;
  Ideal f_delta;
  Ideal rel_disc;
  bool is_square_in_K = false;
  IntElem witness_x;
};

inline DiscriminantInfo conductor_ideal(const BaseField& K, const IntElem& delta) {
  if (!is_discriminant(K, delta)) throw std::domain_error("not a discriminant: " + K.format(delta));
  const Ideal D = Ideal::principal(K, delta);
  Ideal f = Ideal::unit(K);
  for (const auto& [P, l] : factor(D)) {
    const int k = P.p == 2 ? dyadic_conductor_exponent(K, delta, P, l) : l / 2;
    if (k > 0) f = f * P.ideal.pow(k);
  }
  const Ideal f2 = f * f;
  auto x = sqrt_mod_4a(K, delta, f2);
  if (!x) throw std::logic_error("conductor ideal without a square root witness");
  return {delta, f, D / f2, K.is_square(to_field(delta)), *x};
}

struct GeneralDiscFactorization {
  Ideal s;
  Ideal t;
  Ideal rel_disc_general;
};

/// 4 delta / (s t)^2 for any nonzero integral delta.
inline GeneralDiscFactorization rel_disc_general(const BaseField& K, const IntElem& delta) {
  if (delta.is_zero()) throw std::domain_error("rel_disc_general of zero");
  const Ideal D = Ideal::principal(K, delta);
  Ideal s = Ideal::unit(K), t = Ideal::unit(K);
  std::map<Ideal, int> dyadic_l;
  for (const auto& P : primes_above(K, Integer(2))) dyadic_l[P.ideal] = 0;
  for (const auto& [P, l] : factor(D)) {
    if (l / 2 > 0) s = s * P.ideal.pow(l / 2);
    if (P.p == 2) dyadic_l[P.ideal] = l;
  }
  for (const auto& P : primes_above(K, Integer(2))) {
    const int sp = dyadic_l[P.ideal] / 2;
    for (int j = P.e(); j >= 0; --j) {
      if (is_square_mod_dyadic_power(K, delta, P, 2 * (sp + j))) {
        if (j > 0) t = t * P.ideal.pow(j);
        break;
      }
    }
  }
  const Ideal st = s * t;
  return {s, t, Ideal::principal(K, Integer(4)) * D / (st * st)};
}

inline bool is_unit_discriminant(const BaseField& K, const IntElem& delta) {
  return conductor_ideal(K, delta).rel_disc.is_unit();
}

struct LocalComponent {
  PrimeIdeal P;
  int exponent = 0;
  int residual_exponent = 0;
  /// Square class of the P-adic unit part: odd P, 0 (square) or 1; P above 2, coordinates
  /// in the local square-class basis with the uniformizer bit cleared.
  std::uint32_t unit_class = 0;
};

/// Integral element of P-valuation one.
inline IntElem uniformizer(const PrimeIdeal& P) {
  if (P.residue_degree == 2) return {P.p, 0};
  for (const IntElem& z : {IntElem{-P.root, 1}, IntElem{P.p - P.root, 1}, IntElem{P.p, 0}})
    if (valuation(P, z) == 1) return z;
  throw std::logic_error("no uniformizer found");
}

/// Odd P, v_P(z) = L even: z / pi^L is a square mod P, i.e. z = (pi^{L/2} y)^2 mod P^{L+1}
/// for some y prime to P.
inline bool unit_part_is_square(const BaseField& K, const IntElem& z, const PrimeIdeal& P, int L) {
  const IntElem pi_half = K.pow(uniformizer(P), static_cast<unsigned long>(L / 2));
  const Ideal M = P.ideal.pow(L + 1);
  for (const auto& y : P.ideal.residues()) {
    if (P.ideal.contains(y)) continue;
    if (M.contains(K.sub(K.sqr(K.mul(pi_half, y)), z))) return true;
  }
  return false;
}

/// z times a power of eps^2 with small coordinates (real K); z itself otherwise.
inline IntElem reduce_by_unit_squares(const BaseField& K, IntElem z) {
  if (K.is_rational() || K.is_imaginary()) return z;
  const IntElem e2 = K.sqr(K.fundamental_unit());
  const IntElem e2inv = K.inverse_unit(e2);
  auto height = [](const IntElem& v) -> Integer { return v.x * v.x + v.y * v.y; };
  for (bool moved = true; moved;) {
    moved = false;
    for (const IntElem& u : {e2, e2inv}) {
      const IntElem c = K.mul(z, u);
      if (height(c) < height(z)) {
        z = c;
        moved = true;
      }
    }
  }
  return z;
}

struct FundDiscData {
  std::vector<LocalComponent> local_components;
  std::vector<int> real_signs;
  std::optional<IntElem> principal_rep;
};

inline FundDiscData fundamental_discriminant_data(const BaseField& K, const IntElem& delta) {
  const DiscriminantInfo info = conductor_ideal(K, delta);
  FundDiscData out;
  for (const auto& [P, l] : factor(Ideal::principal(K, delta))) {
    LocalComponent c{P, l, l - 2 * valuation(P, info.f_delta), 0};
    if (P.p == 2) {
      const auto emb = dyadic::embed_at(K, P);
      dyadic::LocalElem img = emb.apply(delta);
      c.unit_class = emb.F.decompose(img) & ~1u;
    } else {
      IntElem z = delta;
      int L = l;
      if (l % 2) {
        z = K.mul(z, uniformizer(P));
        ++L;
      }
      const bool square = unit_part_is_square(K, z, P, L);
      c.unit_class = square ? 0 : 1;
    }
    out.local_components.push_back(c);
  }
  for (int i = 0; i < K.r1(); ++i) out.real_signs.push_back(K.sign_at(delta, i));
  if (auto g = is_principal(info.f_delta)) {
    const FieldElem q = K.div(to_field(delta), K.sqr(*g));
    if (!K.is_integral(q)) throw std::logic_error("delta / g^2 is not integral");
    const IntElem d0 = to_int(q);
    if (!conductor_ideal(K, d0).f_delta.is_unit())
      throw std::logic_error("principal representative has nontrivial conductor");
    out.principal_rep = reduce_by_unit_squares(K, d0);
  }
  return out;
}

enum class SignFilter { any, totally_negative, totally_positive };

inline bool passes(const BaseField& K, const IntElem& z, SignFilter s) {
  switch (s) {
    case SignFilter::any: return true;
    // over an imaginary field there are no real places, so the condition is empty
    case SignFilter::totally_negative: return K.is_imaginary() || K.is_totally_negative(z);
    default: return K.is_imaginary() || K.is_totally_positive(z);
  }
}

namespace detail {

/// Integer upper bound for |sigma_i(z)| over all real embeddings.
inline Integer abs_embedding_bound(const BaseField& K, const IntElem& z) {
  if (K.is_rational()) return abs(z.x);
  return abs(z.x) + abs(z.y) * (isqrt(abs(K.d())) + 2);
}

/// Candidates z = x + y w with |N(z)| <= B, normalized by unit squares (real case: inside the
/// window |sigma_1| <= eps^2 |sigma_2| and |sigma_2| <= eps^2 |sigma_1|).
template <class F>
void for_each_window_element(const BaseField& K, const Integer& B, F&& f) {
  if (K.is_rational()) {
    for (Integer x = -B; x <= B; ++x)
      if (x != 0) f(IntElem{x, 0});
    return;
  }
  const Integer rootB = isqrt(B) + 1;
  Integer ybound, xbound;
  if (K.is_imaginary()) {
    // N = (x + t y/2)^2 + |D| y^2 / 4
    ybound = isqrt(4 * B / abs(K.disc())) + 1;
    xbound = rootB + ybound;
  } else {
    const Integer S = abs_embedding_bound(K, K.fundamental_unit()) * rootB;
    // sigma_1 - sigma_2 = y (w - w') with |w - w'| >= 1
    ybound = 2 * S;
    xbound = S + ybound;
  }
  std::optional<IntElem> eps2;
  if (K.is_real()) eps2 = K.sqr(K.fundamental_unit());
  const bool small = fits_int64(xbound * xbound * 4) && fits_int64(ybound * ybound * (abs(K.n()) + 2) * 4);
  const long tl = K.t().get_si(), nl = small ? K.n().get_si() : 0, Bl = small ? B.get_si() : 0;
  for (Integer y = -ybound; y <= ybound; ++y) {
    const long yl = small ? y.get_si() : 0;
    for (Integer x = -xbound; x <= xbound; ++x) {
      if (x == 0 && y == 0) continue;
      if (small) {
        const long xl = x.get_si();
        const long nn = xl * xl + tl * xl * yl + nl * yl * yl;
        if (nn > Bl || nn < -Bl) continue;
      } else {
        const IntElem z{x, y};
        if (abs(K.norm(z)) > B) continue;
      }
      const IntElem z{x, y};
      if (eps2) {
        const FieldElem zf = to_field(z), cz = to_field(K.conj(z)), e2 = to_field(*eps2);
        if (K.compare_abs_at(zf, K.mul(e2, cz), 0) > 0) continue;
        if (K.compare_abs_at(cz, K.mul(e2, zf), 0) > 0) continue;
      }
      f(z);
    }
  }
}

/// Elements equivalent to z modulo unit squares that can also lie in the window.
inline std::vector<IntElem> unit_square_partners(const BaseField& K, const IntElem& z) {
  std::vector<IntElem> out;
  if (K.is_rational()) return out;
  if (K.is_imaginary()) {
    for (const auto& r : K.units().roots_of_unity) {
      IntElem p = K.mul(z, K.sqr(r));
      if (p != z) out.push_back(p);
    }
    return out;
  }
  const IntElem e2 = K.sqr(K.fundamental_unit());
  out.push_back(K.mul(z, e2));
  out.push_back(K.mul(z, K.inverse_unit(e2)));
  return out;
}

}  // namespace detail

/// One representative per class modulo unit squares, with |N(delta)| <= bound.
inline std::vector<DiscriminantInfo> enumerate_discriminant_classes(const BaseField& K, const Integer& bound,
                                                                     SignFilter sign) {
  std::set<IntElem> found;
  detail::for_each_window_element(K, bound, [&](const IntElem& z) {
    if (!passes(K, z, sign)) return;
    if (!is_discriminant(K, z)) return;
    found.insert(z);
  });
  std::set<IntElem> covered;
  std::vector<DiscriminantInfo> out;
  for (const auto& z : found) {
    if (covered.count(z)) continue;
    for (const auto& p : detail::unit_square_partners(K, z)) covered.insert(p);
    out.push_back(conductor_ideal(K, z));
  }
  return out;
}

struct UnitDiscriminants {
  /// Every class contains a representative with |N| <= bound.
  Integer bound;
  std::vector<DiscriminantInfo> classes;
};

/// Discriminants with (delta) = f^2, one per class modulo K^x2.
inline UnitDiscriminants unit_discriminants(const BaseField& K) {
  UnitDiscriminants out;
  const Integer D = abs(K.disc());
  // a class of f contains an integral ideal of norm at most the Minkowski bound
  out.bound = K.is_rational() ? Integer(1) : (K.is_real() ? D / 4 : D / 2);
  for (const auto& info : enumerate_discriminant_classes(K, out.bound, SignFilter::any)) {
    if (!info.rel_disc.is_unit()) continue;
    bool fresh = true;
    for (const auto& c : out.classes)
      if (K.is_square(to_field(K.mul(c.delta, info.delta)))) {
        fresh = false;
        break;
      }
    if (fresh) out.classes.push_back(info);
  }
  return out;
}

}  // namespace relquad
