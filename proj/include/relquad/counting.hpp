#pragma once

#include <stdexcept>
#include <vector>

#include "relquad/characters.hpp"

namespace relquad {

namespace detail {

/// #{x mod 2a : x^2 = delta mod 4a} over machine integers; nullopt if something may overflow.
inline std::optional<Integer> count_roots_small(const BaseField& K, const IntElem& delta, const Ideal& a) {
  const Ideal two_a = a * Ideal::principal(K, Integer(2));
  const Ideal four_a = two_a * Ideal::principal(K, Integer(2));
  const Integer lim = Integer(1) << 20;
  if (four_a.a() > lim || four_a.c() > lim || abs(delta.x) > lim || abs(delta.y) > lim || abs(K.n()) > lim)
    return std::nullopt;
  using i128 = __int128;
  const long A = four_a.a().get_si(), B = four_a.b().get_si(), C = four_a.c().get_si();
  const long a2 = two_a.a().get_si(), c2 = two_a.c().get_si();
  const long t = K.t().get_si(), n = K.n().get_si(), dx = delta.x.get_si(), dy = delta.y.get_si();
  auto md = [](i128 v, long m) { return static_cast<long>(((v % m) + m) % m); };
  long count = 0;
  for (long j = 0; j < c2; ++j)
    for (long i = 0; i < a2; ++i) {
      const i128 X = static_cast<i128>(i) * i - static_cast<i128>(n) * j * j - dx;
      const i128 Y = static_cast<i128>(2) * i * j + static_cast<i128>(t) * j * j - dy;
      if (md(Y, C) != 0) continue;
      if (md(X - static_cast<i128>(B) * (Y / C), A) != 0) continue;
      ++count;
    }
  return Integer(count);
}

}  // namespace detail

/// Brute force: #{x mod 2a : x^2 = delta mod 4a}.
inline Integer count_roots(const BaseField& K, const IntElem& delta, const Ideal& a,
                           std::size_t bound = kDefaultEnumerationBound) {
  if (!a.is_integral()) throw std::domain_error("count_roots: ideal is not integral");
  if (auto fast = detail::count_roots_small(K, delta, a)) return *fast;
  const Ideal two_a = a * Ideal::principal(K, Integer(2));
  const Ideal four_a = two_a * Ideal::principal(K, Integer(2));
  Integer count = 0;
  for (const auto& x : two_a.residues(bound))
    if (four_a.contains(K.sub(K.sqr(x), delta))) ++count;
  return count;
}

/// sum of chi(b) over b | a with a/b squarefree.
inline Integer count_roots_divisor_sum(const CharacterContext& ctx, const Ideal& a) {
  Integer total = 0;
  for (const auto& b : divisors(a))
    if (mobius(a / b) != 0) total += ctx.chi(b);
  return total;
}

/// Largest 1 <= delta <= 2e-1 with u a square mod pi^delta (u a local unit).
inline int dyadic_square_depth(const dyadic::LocalField& F, const dyadic::LocalElem& u) {
  for (int d = 2 * F.e() - 1; d >= 1; --d)
    if (F.is_square_mod(u, d)) return d;
  throw std::logic_error("unit is not a square mod pi");
}

/// N_delta(P^k) from the local casework.
inline Integer local_root_count(const CharacterContext& ctx, const PrimeIdeal& P, int k) {
  if (k == 0) return 1;
  const BaseField& K = ctx.field();
  const IntElem& delta = ctx.delta();
  const Integer q = P.norm();
  const int l = P.ideal.contains(delta) ? valuation(P, delta) : 0;
  if (l == 0) return 1 + ctx.leg_prime(P);
  const int E = P.p == 2 ? P.e() : 0;
  if (2 * E + k <= l) return pow(q, k / 2);
  if (l % 2) return 0;
  if (E == 0) {
    const bool square = unit_part_is_square(K, delta, P, l);
    return square ? 2 * pow(q, l / 2) : Integer(0);
  }
  const auto emb = dyadic::embed_at(K, P);
  const dyadic::LocalField& F = emb.F;
  const dyadic::LocalElem u = F.div_pi_pow(emb.apply(delta), l);
  const int e = P.e();
  if (F.is_square_mod(u, 2 * e)) {
    if (k > l) return pow(q, l / 2) * (F.is_square_mod(u, 2 * e + 1) ? 2 : 0);
    return pow(q, k / 2);
  }
  if (k >= l) return 0;
  const int depth = dyadic_square_depth(F, u);
  if (depth % 2 == 0) throw std::logic_error("square depth of a unit is even");
  return 2 * E + k - l <= depth ? pow(q, k / 2) : Integer(0);
}

inline Integer count_roots_local(const CharacterContext& ctx, const Ideal& a) {
  Integer r = 1;
  for (const auto& [P, k] : factor(a)) {
    r *= local_root_count(ctx, P, k);
    if (r == 0) break;
  }
  return r;
}

/// Divisor sum of chi; the local product is computed alongside and must agree.
inline Integer count_roots_formula(const CharacterContext& ctx, const Ideal& a) {
  const Integer s = count_roots_divisor_sum(ctx, a);
  if (count_roots_local(ctx, a) != s) throw std::logic_error("local root count disagrees with the divisor sum");
  return s;
}

struct QPair {
  Ideal a;
  IntElem b;
};

/// All (a, b mod 2a) with b^2 = delta mod 4a and N(a) <= bound.
inline std::vector<QPair> qpairs(const BaseField& K, const IntElem& delta, unsigned long bound) {
  std::vector<QPair> out;
  for (unsigned long n = 1; n <= bound; ++n)
    for (const auto& a : ideals_of_norm(K, Integer(n))) {
      const Ideal two_a = a * Ideal::principal(K, Integer(2));
      const Ideal four_a = two_a * Ideal::principal(K, Integer(2));
      for (const auto& x : two_a.residues())
        if (four_a.contains(K.sub(K.sqr(x), delta))) out.push_back({a, x});
    }
  return out;
}

/// n-th coefficients, n = 0..N (index 0 unused), of zeta(delta, s) by brute force.
inline std::vector<Integer> zeta_delta_coeffs(const BaseField& K, const IntElem& delta, unsigned long N) {
  std::vector<Integer> out(N + 1, 0);
  for (unsigned long n = 1; n <= N; ++n)
    for (const auto& a : ideals_of_norm(K, Integer(n))) out[n] += count_roots(K, delta, a);
  return out;
}

/// Coefficients of zeta_K(s) / zeta_K(2s) * L(chi, s).
inline std::vector<Integer> zeta_delta_convolution(const CharacterContext& ctx, unsigned long N) {
  const BaseField& K = ctx.field();
  const auto L = chi_norm_sums(ctx, N);
  std::vector<Integer> sqfree(N + 1, 0);
  for (unsigned long n = 1; n <= N; ++n)
    for (const auto& a : ideals_of_norm(K, Integer(n)))
      if (mobius(a) != 0) ++sqfree[n];
  std::vector<Integer> out(N + 1, 0);
  for (unsigned long d = 1; d <= N; ++d)
    for (unsigned long m = d; m <= N; m += d) out[m] += sqfree[d] * L[m / d];
  return out;
}

/// Coefficients of zeta_K(s) L(chi, s).
inline std::vector<Integer> zeta_K_times_L(const CharacterContext& ctx, unsigned long N) {
  const BaseField& K = ctx.field();
  const auto L = chi_norm_sums(ctx, N);
  std::vector<Integer> out(N + 1, 0);
  for (unsigned long d = 1; d <= N; ++d) {
    const Integer ad = count_ideals_of_norm(K, Integer(d));
    for (unsigned long m = d; m <= N; m += d) out[m] += ad * L[m / d];
  }
  return out;
}

/// Coefficients of zeta_K(2s) zeta(delta, s), given the zeta(delta, .) table.
inline std::vector<Integer> zeta_K2_times_zeta_delta(const BaseField& K, const std::vector<Integer>& zd) {
  const unsigned long N = zd.size() - 1;
  std::vector<Integer> out(N + 1, 0);
  for (unsigned long m = 1; m * m <= N; ++m) {
    const Integer am = count_ideals_of_norm(K, Integer(m));
    for (unsigned long k = 1; k * m * m <= N; ++k) out[k * m * m] += am * zd[k];
  }
  return out;
}

/// #{(b, (a, x)) : b integral, (a, x) a Q-pair, N(b)^2 N(a) = n}.
inline Integer order_ideal_counts(const BaseField& K, const IntElem& delta, unsigned long n) {
  Integer total = 0;
  for (unsigned long m = 1; m * m <= n; ++m) {
    if (n % (m * m)) continue;
    const unsigned long k = n / (m * m);
    const Integer bm = count_ideals_of_norm(K, Integer(m));
    if (bm == 0) continue;
    Integer pairs = 0;
    for (const auto& a : ideals_of_norm(K, Integer(k))) {
      const Ideal two_a = a * Ideal::principal(K, Integer(2));
      const Ideal four_a = two_a * Ideal::principal(K, Integer(2));
      for (const auto& x : two_a.residues())
        if (four_a.contains(K.sub(K.sqr(x), delta))) ++pairs;
    }
    total += bm * pairs;
  }
  return total;
}

/// K = Q: ideals of index n in Z[w_delta], w_delta = (delta + sqrt delta)/2, counted directly
/// as sublattices Z a + Z (b + c w_delta), a c = n, 0 <= b < a, stable under w_delta.
inline Integer order_ideals_rational(const Integer& delta, unsigned long n) {
  // w^2 = T w - Nm with T = delta, Nm = (delta^2 - delta)/4
  const Integer T = delta, Nm = (delta * delta - delta) / 4;
  Integer count = 0;
  for (unsigned long a = 1; a <= n; ++a) {
    if (n % a) continue;
    const Integer A(a), C(n / a);
    for (unsigned long b = 0; b < a; ++b) {
      const Integer B(b);
      auto in = [&](const Integer& X, const Integer& Y) {
        if (!divides(C, Y)) return false;
        return divides(A, X - B * (Y / C));
      };
      // w * a = a w ; w * (b + c w) = -c Nm + (b + c T) w
      if (!in(Integer(0), A)) continue;
      if (!in(-C * Nm, B + C * T)) continue;
      ++count;
    }
  }
  return count;
}

/// Same count over machine integers; requires |delta| < 2^20 and n < 2^20.
inline long order_ideals_rational_small(long delta, long n) {
  const __int128 T = delta, Nm = (static_cast<__int128>(delta) * delta - delta) / 4;
  long count = 0;
  for (long a = 1; a <= n; ++a) {
    if (n % a) continue;
    const long c = n / a;
    if (a % c) continue;  // a w must lie in the lattice: c | a and a | b a / c
    for (long b = 0; b < a; ++b) {
      if ((static_cast<__int128>(b) * (a / c)) % a) continue;
      const __int128 Y = b + c * T;
      if (Y % c) continue;
      const __int128 X = -c * Nm - b * (Y / c);
      if (X % a) continue;
      ++count;
    }
  }
  return count;
}

}  // namespace relquad
