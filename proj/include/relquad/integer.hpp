#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace relquad {

using Integer = mpz_class;
using Rational = mpq_class;

/// Thrown when an enumeration would exceed its configured size bound.
struct EnumerationBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultEnumerationBound = std::size_t{1} << 20;

inline Integer isqrt(const Integer& n) {
  if (sgn(n) < 0) throw std::domain_error("isqrt of negative integer");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline bool is_perfect_square(const Integer& n) {
  return sgn(n) >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

/// Returns (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0.
inline std::tuple<Integer, Integer, Integer> xgcd(const Integer& a, const Integer& b) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {g, s, t};
}

/// Least nonnegative residue.
inline Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline bool divides(const Integer& d, const Integer& n) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline Integer pow(const Integer& b, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

inline int kronecker(const Integer& a, const Integer& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

inline int valuation(Integer n, const Integer& p) {
  if (n == 0) throw std::domain_error("valuation of zero");
  int v = 0;
  while (divides(p, n)) {
    n /= p;
    ++v;
  }
  return v;
}

inline bool fits_int64(const Integer& n) { return n.fits_slong_p(); }

inline Integer numerator(const Rational& q) { return q.get_num(); }
inline Integer denominator(const Rational& q) { return q.get_den(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Rational canonical(Rational q) {
  q.canonicalize();
  return q;
}

/// Rational square test; returns the nonnegative root when it exists.
inline std::optional<Rational> rational_sqrt(const Rational& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (!is_perfect_square(q.get_num()) || !is_perfect_square(q.get_den())) return std::nullopt;
  return Rational(isqrt(q.get_num()), isqrt(q.get_den()));
}

/// Trial-division factorization of |n|, n != 0. Primes ascending.
inline std::vector<std::pair<Integer, int>> factor_integer(Integer n) {
  if (n == 0) throw std::domain_error("factor of zero");
  n = abs(n);
  std::vector<std::pair<Integer, int>> out;
  if (n.fits_ulong_p()) {
    unsigned long m = n.get_ui();
    auto take = [&](unsigned long p) {
      if (m % p != 0) return;
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.emplace_back(Integer(p), e);
    };
    take(2);
    take(3);
    for (unsigned long p = 5; p <= m / p; p += 6) {
      take(p);
      take(p + 2);
    }
    if (m > 1) out.emplace_back(Integer(m), 1);
    return out;
  }
  for (Integer p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (!divides(p, n)) continue;
    int e = 0;
    while (divides(p, n)) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline bool is_squarefree(const Integer& n) {
  for (const auto& pe : factor_integer(n))
    if (pe.second > 1) return false;
  return true;
}

inline std::vector<unsigned long> primes_up_to(unsigned long n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<unsigned long> out;
  for (unsigned long i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (unsigned long j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

/// Square root of a modulo an odd prime p (Tonelli-Shanks). a must be a square mod p.
inline std::uint64_t sqrt_mod_prime(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (detail::powmod(a, (p - 1) / 2, p) != 1) throw std::domain_error("not a quadratic residue");
  std::uint64_t q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  std::uint64_t z = 2;
  while (detail::powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t c = detail::powmod(z, q, p);
  std::uint64_t r = detail::powmod(a, (q + 1) / 2, p);
  std::uint64_t t = detail::powmod(a, q, p);
  int m = s;
  while (t != 1) {
    int i = 0;
    std::uint64_t tt = t;
    while (tt != 1) {
      tt = detail::mulmod(tt, tt, p);
      ++i;
    }
    std::uint64_t b = c;
    for (int j = 0; j < m - i - 1; ++j) b = detail::mulmod(b, b, p);
    r = detail::mulmod(r, b, p);
    c = detail::mulmod(b, b, p);
    t = detail::mulmod(t, c, p);
    m = i;
  }
  return r;
}

inline std::string to_string(const Integer& n) { return n.get_str(); }
inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace relquad
