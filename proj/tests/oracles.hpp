#pragma once

// Brute-force reference implementations used only by the tests. None of them calls the
// library code they are compared against.

#include <gmpxx.h>

#include <cstdlib>
#include <numeric>
#include <tuple>
#include <vector>

namespace oracle {

inline long mod(long a, long m) { return ((a % m) + m) % m; }

inline int legendre(long a, long p) {
  a = mod(a, p);
  if (a == 0) return 0;
  long r = 1, b = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = (r * b) % p;
    b = (b * b) % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

/// (a, b)_2 for nonzero integers from the classical closed form.
inline int hilbert_2(long a, long b) {
  int alpha = 0, beta = 0;
  while (a % 2 == 0) a /= 2, ++alpha;
  while (b % 2 == 0) b /= 2, ++beta;
  auto eps = [](long u) { return static_cast<int>(mod((u - 1) / 2, 2)); };
  auto omega = [](long u) { return static_cast<int>(mod((u * u - 1) / 8, 2)); };
  const int e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a);
  return e % 2 ? -1 : 1;
}

/// (a, b)_p for an odd prime p.
inline int hilbert_odd(long a, long b, long p) {
  int alpha = 0, beta = 0;
  while (a % p == 0) a /= p, ++alpha;
  while (b % p == 0) b /= p, ++beta;
  int s = (alpha * beta * ((p - 1) / 2)) % 2 ? -1 : 1;
  if (beta % 2) s *= legendre(a, p);
  if (alpha % 2) s *= legendre(b, p);
  return s;
}

inline int hilbert_real(long a, long b) { return a < 0 && b < 0 ? -1 : 1; }

/// Weighted count of all reduced forms of discriminant D < 0: multiples of x^2+y^2 count 1/2,
/// multiples of x^2+xy+y^2 count 1/3.
inline mpq_class hurwitz_by_forms(long D) {
  mpq_class total = 0;
  for (long a = 1; 3 * a * a <= -D; ++a)
    for (long b = -a + 1; b <= a; ++b) {
      const long num = b * b - D;
      if (num % (4 * a)) continue;
      const long c = num / (4 * a);
      if (c < a || (a == c && b < 0)) continue;
      if (b == 0 && a == c)
        total += mpq_class(1, 2);
      else if (b == a && a == c)
        total += mpq_class(1, 3);
      else
        total += 1;
    }
  total.canonicalize();
  return total;
}

/// Number of sublattices of Z^2 of index n that are stable under w, where w acts on the basis
/// (1, w) by w^2 = T w - N.
inline long stable_sublattices(long T, long N, long n) {
  long count = 0;
  for (long a = 1; a <= n; ++a) {
    if (n % a) continue;
    const long c = n / a;
    for (long b = 0; b < a; ++b) {
      // lattice spanned by (a, 0) and (b, c) in coordinates (x, y) for x + y w
      auto member = [&](long x, long y) {
        if (y % c) return false;
        return (x - b * (y / c)) % a == 0;
      };
      // w * a = a w; w * (b + c w) = -c N + (b + c T) w
      if (member(0, a) && member(-c * N, b + c * T)) ++count;
    }
  }
  return count;
}

/// sum over d | n of chi[d].
inline long divisor_sum(const std::vector<long>& chi, long n) {
  long s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) s += chi[d];
  return s;
}

/// x + y * omega at the embedding with sqrt(d) of the given sign, to 400 bits.
inline mpf_class embed(long x, long y, long d, bool d1mod4, int which) {
  mpf_class r(0, 400), s(d > 0 ? d : -d, 400);
  s = sqrt(s);
  if (which == 1) s = -s;
  mpf_class w = d1mod4 ? mpf_class((1 + s) / 2, 400) : s;
  r = x + y * w;
  return r;
}

}  // namespace oracle
