#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relquad/ideals.hpp"

namespace relquad::dyadic {

struct PrecisionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { base, unramified, ramified };

inline constexpr int kInfiniteLevel = 1 << 20;
inline constexpr int kMaxBits = 62;

/// a + b*theta known modulo pi^prec.
struct LocalElem {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  int prec = 0;
};

namespace detail {

inline std::uint64_t mask(int bits) { return bits >= 64 ? ~0ull : ((1ull << bits) - 1); }

inline int ctz(std::uint64_t x) { return std::countr_zero(x); }

/// Inverse of an odd number modulo 2^64.
inline std::uint64_t inv_odd(std::uint64_t x) {
  if ((x & 1) == 0) throw std::domain_error("inverse of an even number mod 2^64");
  std::uint64_t y = x;
  for (int i = 0; i < 6; ++i) y *= 2 - x * y;
  return y;
}

/// x with x^2 = a mod 2^64 for a = 1 mod 8; x is determined modulo 2^63 up to sign.
inline std::uint64_t sqrt_one_mod8(std::uint64_t a) {
  if ((a & 7) != 1) throw std::domain_error("2-adic square root needs a = 1 mod 8");
  std::uint64_t x = 1;
  for (int k = 3; k < 64; ++k) {
    const std::uint64_t m = (k + 1 >= 64) ? ~0ull : ((1ull << (k + 1)) - 1);
    if (((x * x - a) & m) != 0) x += 1ull << (k - 1);
  }
  return x;
}

inline std::uint64_t to_u64(const Integer& z) {
  Integer m = mod(z, Integer(1) << 64);
  std::uint64_t lo = mpz_getlimbn(m.get_mpz_t(), 0);
  return m == 0 ? 0 : lo;
}

}  // namespace detail

/// Residue field F2 or F4 = F2[g]/(g^2+g+1); F4 elements encode u0 + u1*g as u0 | u1<<1.
struct ResidueField {
  int f = 1;

  int size() const { return f == 1 ? 2 : 4; }
  std::uint8_t add(std::uint8_t x, std::uint8_t y) const { return x ^ y; }
  std::uint8_t mul(std::uint8_t x, std::uint8_t y) const {
    if (f == 1) return x & y;
    const int a0 = x & 1, a1 = x >> 1, b0 = y & 1, b1 = y >> 1;
    const int c0 = (a0 & b0) ^ (a1 & b1);
    const int c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
    return static_cast<std::uint8_t>(c0 | (c1 << 1));
  }
  std::uint8_t sqr(std::uint8_t x) const { return mul(x, x); }
  /// Inverse Frobenius; x^4 = x in F4.
  std::uint8_t sqrt(std::uint8_t x) const { return f == 1 ? x : sqr(x); }
  int trace(std::uint8_t x) const { return f == 1 ? x : (x >> 1); }
  /// y with y^2 + y = c; requires trace(c) = 0.
  std::uint8_t artin_schreier(std::uint8_t c) const {
    for (std::uint8_t y = 0; y < size(); ++y)
      if (add(sqr(y), y) == c) return y;
    throw std::domain_error("y^2 + y = c has no solution (trace 1)");
  }
};

class LocalField {
 public:
  static LocalField q2(int precision = 0) { return LocalField(Kind::base, 1, precision); }
  static LocalField unramified(int precision = 0) { return LocalField(Kind::unramified, 5, precision); }
  static LocalField ramified(int c, int precision = 0) {
    static const std::array<int, 6> ok{-1, -5, 2, -2, 10, -10};
    if (std::find(ok.begin(), ok.end(), c) == ok.end())
      throw std::invalid_argument("ramified field needs c in {-1,-5,2,-2,10,-10}");
    return LocalField(Kind::ramified, c, precision);
  }

  /// "q2", "unram", or "ram:c".
  static LocalField parse(std::string_view s, int precision = 0) {
    if (s == "q2") return q2(precision);
    if (s == "unram") return unramified(precision);
    if (s.rfind("ram:", 0) == 0) return ramified(std::stoi(std::string(s.substr(4))), precision);
    throw std::invalid_argument("unknown local field: " + std::string(s));
  }

  static std::vector<LocalField> all(int extra_precision = 0) {
    std::vector<LocalField> out{q2(), unramified()};
    for (int c : {-1, -5, 2, -2, 10, -10}) out.push_back(ramified(c));
    for (auto& F : out) F = F.with_precision(F.default_precision() + extra_precision);
    return out;
  }

  Kind kind() const { return kind_; }
  int c() const { return c_; }
  int e() const { return e_; }
  int f() const { return f_; }
  int degree() const { return e_ * f_; }
  int precision() const { return precision_; }
  int default_precision() const { return 4 * e_ + 6; }
  /// dim over F2 of K^x / K^x2.
  int square_class_dim() const { return degree() + 2; }
  const ResidueField& residue_field() const { return k_; }

  std::string name() const {
    switch (kind_) {
      case Kind::base: return "q2";
      case Kind::unramified: return "unram";
      default: return "ram:" + std::to_string(c_);
    }
  }

  LocalField with_precision(int N) const { return LocalField(kind_, c_, N); }

  // Construction -------------------------------------------------------------

  LocalElem make(std::int64_t a, std::int64_t b = 0) const {
    if (kind_ == Kind::base && b != 0) throw std::invalid_argument("Q2 element has no theta part");
    return norm_bits({static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b), precision_});
  }
  LocalElem make_u64(std::uint64_t a, std::uint64_t b, int prec) const {
    return norm_bits({a, b, std::min(prec, precision_)});
  }
  LocalElem zero() const { return make(0); }
  LocalElem one() const { return make(1); }
  LocalElem two() const { return make(2); }
  LocalElem pi() const { return kind_ == Kind::ramified ? make(0, 1) : make(2); }
  LocalElem pi_pow(int k) const { return pow(pi(), k); }

  // Arithmetic ---------------------------------------------------------------

  LocalElem add(const LocalElem& x, const LocalElem& y) const {
    return norm_bits({x.a + y.a, x.b + y.b, std::min(x.prec, y.prec)});
  }
  LocalElem sub(const LocalElem& x, const LocalElem& y) const {
    return norm_bits({x.a - y.a, x.b - y.b, std::min(x.prec, y.prec)});
  }
  LocalElem neg(const LocalElem& x) const { return norm_bits({0 - x.a, 0 - x.b, x.prec}); }
  LocalElem mul(const LocalElem& x, const LocalElem& y) const {
    const std::uint64_t bb = x.b * y.b;
    return norm_bits({x.a * y.a - n_ * bb, x.a * y.b + x.b * y.a + t_ * bb, std::min(x.prec, y.prec)});
  }
  LocalElem sqr(const LocalElem& x) const { return mul(x, x); }
  LocalElem pow(LocalElem x, int k) const {
    LocalElem r = one();
    r.prec = x.prec;
    while (k > 0) {
      if (k & 1) r = mul(r, x);
      x = mul(x, x);
      k >>= 1;
    }
    return r;
  }
  LocalElem conj(const LocalElem& x) const { return norm_bits({x.a + t_ * x.b, 0 - x.b, x.prec}); }
  std::uint64_t norm(const LocalElem& x) const {
    return (x.a * x.a + t_ * x.a * x.b + n_ * x.b * x.b) & detail::mask((x.prec + e_ - 1) / e_);
  }
  bool is_unit(const LocalElem& x) const { return (norm(x) & 1) == 1; }
  LocalElem inv_unit(const LocalElem& x) const {
    if (!is_unit(x)) throw std::domain_error("inverse of a non-unit");
    const std::uint64_t ni = detail::inv_odd(norm(x));
    LocalElem c = conj(x);
    return norm_bits({c.a * ni, c.b * ni, x.prec});
  }
  LocalElem div_unit(const LocalElem& x, const LocalElem& u) const { return mul(x, inv_unit(u)); }

  bool is_zero(const LocalElem& x) const { return x.a == 0 && x.b == 0; }

  /// pi-adic precision of x.
  int digits(const LocalElem& x) const { return x.prec; }

  /// nullopt when x vanishes at its precision.
  std::optional<int> val(const LocalElem& x) const {
    if (is_zero(x)) return std::nullopt;
    const int va = x.a ? detail::ctz(x.a) : kInfiniteLevel;
    const int vb = x.b ? detail::ctz(x.b) : kInfiniteLevel;
    switch (kind_) {
      case Kind::base: return va;
      case Kind::unramified: return std::min(va, vb);
      default: return std::min(x.a ? 2 * va : kInfiniteLevel, x.b ? 2 * vb + 1 : kInfiniteLevel);
    }
  }

  int valuation(const LocalElem& x) const {
    auto v = val(x);
    if (!v) throw PrecisionError("valuation of an element that vanishes at working precision");
    return *v;
  }

  /// x / pi, requires v(x) >= 1.
  LocalElem div_pi(const LocalElem& x) const {
    if (x.prec <= 1) throw PrecisionError("precision exhausted dividing by pi");
    if (kind_ != Kind::ramified) {
      if ((x.a | x.b) & 1) throw std::domain_error("div_pi: element is not divisible by pi");
      return norm_bits({x.a >> 1, x.b >> 1, x.prec - 1});
    }
    if (x.a & 1) throw std::domain_error("div_pi: element is not divisible by pi");
    const std::uint64_t a2 = x.a >> 1;
    return norm_bits({a2 * t_ * m_inv_ + x.b, 0 - a2 * m_inv_, x.prec - 1});
  }
  LocalElem div_pi_pow(LocalElem x, int k) const {
    for (int i = 0; i < k; ++i) x = div_pi(x);
    return x;
  }
  /// x / 2^k coordinatewise.
  LocalElem div_two_pow(const LocalElem& x, int k) const {
    const std::uint64_t m = detail::mask(k);
    if ((x.a & m) || (x.b & m)) throw std::domain_error("div_two_pow: not divisible");
    if (x.prec <= e_ * k) throw PrecisionError("precision exhausted dividing by 2");
    return norm_bits({x.a >> k, x.b >> k, x.prec - e_ * k});
  }

  std::uint8_t residue(const LocalElem& x) const {
    if (kind_ == Kind::unramified) return static_cast<std::uint8_t>((x.a & 1) | ((x.b & 1) << 1));
    return static_cast<std::uint8_t>(x.a & 1);
  }
  LocalElem lift(std::uint8_t r) const {
    if (kind_ == Kind::unramified) return make(r & 1, r >> 1);
    return make(r & 1);
  }

  // Levels and squares -------------------------------------------------------

  /// max i with u in U_i, capped: kInfiniteLevel once u - 1 vanishes beyond level 2e.
  int unit_level(const LocalElem& u) const {
    if (!is_unit(u)) throw std::domain_error("unit_level of a non-unit");
    auto v = val(sub(u, one()));
    if (!v) {
      if (digits(u) >= 2 * e_ + 1) return kInfiniteLevel;
      throw PrecisionError("unit_level: insufficient precision");
    }
    return *v;
  }

  struct SquareAnalysis {
    /// Largest m with u in U_m K^x2 (kInfiniteLevel: u is a square).
    int level = 0;
    /// u = root^2 * rest with rest in U_level.
    LocalElem root;
    LocalElem rest;
    /// pi-adic precision of the input at which the decision was taken.
    int decided_at = 0;
  };

  /// Level reduction for a unit: divide out squares until the level is odd below 2e,
  /// exactly 2e with trace 1, or beyond 2e (a square).
  SquareAnalysis analyze_unit(LocalElem u) const {
    if (!is_unit(u)) throw std::domain_error("analyze_unit: not a unit");
    SquareAnalysis out;
    out.decided_at = digits(u);
    LocalElem root = lift(k_.sqrt(residue(u)));
    u = div_unit(u, sqr(root));
    for (int guard = 0; guard < 8 * e_ + 8; ++guard) {
      int m = unit_level(u);
      if (m >= 2 * e_ + 1) {
        out.level = kInfiniteLevel;
        out.root = root;
        out.rest = u;
        return out;
      }
      if (m < 2 * e_ && m % 2 == 1) {
        out.level = m;
        out.root = root;
        out.rest = u;
        return out;
      }
      LocalElem s;
      if (m < 2 * e_) {
        std::uint8_t r = residue(div_pi_pow(sub(u, one()), m));
        s = add(one(), mul(pi_pow(m / 2), lift(k_.sqrt(r))));
      } else {
        std::uint8_t r = residue(div_two_pow(sub(u, one()), 2));
        if (k_.trace(r) == 1) {
          out.level = 2 * e_;
          out.root = root;
          out.rest = u;
          return out;
        }
        s = add(one(), mul(two(), lift(k_.artin_schreier(r))));
      }
      u = div_unit(u, sqr(s));
      root = mul(root, s);
    }
    throw std::logic_error("analyze_unit: level reduction did not terminate");
  }

  /// Square root of w in U_{2e+1} by Newton iteration.
  LocalElem sqrt_deep(const LocalElem& w) const {
    LocalElem y = one();
    y.prec = w.prec;
    for (int i = 0; i < 128; ++i) {
      LocalElem d = sub(w, sqr(y));
      if (is_zero(d)) return y;
      LocalElem z = div_unit(div_two_pow(d, 1), y);
      y = add(y, z);
    }
    throw std::logic_error("sqrt_deep did not converge");
  }

  struct SquareTest {
    bool square = false;
    std::optional<LocalElem> certificate;
    int decided_at = 0;
  };

  SquareTest is_square(const LocalElem& x) const {
    SquareTest out;
    out.decided_at = digits(x);
    const int v = valuation(x);
    if (v % 2) return out;
    LocalElem u = div_pi_pow(x, v);
    if (digits(u) < 2 * e_ + 2) throw PrecisionError("is_square: insufficient precision");
    auto an = analyze_unit(u);
    if (an.level != kInfiniteLevel) return out;
    out.square = true;
    out.certificate = mul(pi_pow(v / 2), mul(an.root, sqrt_deep(an.rest)));
    return out;
  }

  /// x = y^2 mod pi^M for some y.
  bool is_square_mod(const LocalElem& x, int M) const {
    if (M <= 0) return true;
    auto v = val(x);
    if (!v) {
      if (digits(x) >= M) return true;
      throw PrecisionError("is_square_mod: insufficient precision");
    }
    if (*v >= M) return true;
    if (*v % 2) return false;
    LocalElem u = div_pi_pow(x, *v);
    if (digits(u) < std::min(M - *v, 2 * e_ + 1)) throw PrecisionError("is_square_mod: insufficient precision");
    return analyze_unit(u).level >= M - *v;
  }

  // Square classes -----------------------------------------------------------

  /// pi, then 1 + pi^(2k-1) l_j for k = 1..e and l_j in {1, g}, then 1 + 4 xi with Tr(xi) = 1.
  std::vector<LocalElem> square_class_basis() const {
    std::vector<LocalElem> out{pi()};
    for (int k = 1; k <= e_; ++k)
      for (int j = 0; j < f_; ++j) out.push_back(add(one(), mul(pi_pow(2 * k - 1), lift(j == 0 ? 1 : 2))));
    out.push_back(add(one(), mul(make(4), lift(f_ == 1 ? 1 : 2))));
    return out;
  }

  /// Coordinates of the square class of x in square_class_basis().
  std::uint32_t decompose(const LocalElem& x) const {
    const auto basis = square_class_basis();
    const int v = valuation(x);
    std::uint32_t mask = (v & 1) ? 1u : 0u;
    LocalElem u = div_pi_pow(x, v);
    if (digits(u) < 2 * e_ + 2) throw PrecisionError("decompose: insufficient precision");
    u = div_unit(u, sqr(lift(k_.sqrt(residue(u)))));
    for (int guard = 0; guard < 8 * e_ + 8; ++guard) {
      int m = unit_level(u);
      if (m >= 2 * e_ + 1) return mask;
      if (m < 2 * e_ && m % 2 == 1) {
        const int k = (m + 1) / 2;
        std::uint8_t r = residue(div_pi_pow(sub(u, one()), m));
        for (int j = 0; j < f_; ++j) {
          if (((r >> j) & 1) == 0) continue;
          const int idx = 1 + (k - 1) * f_ + j;
          u = div_unit(u, basis[idx]);
          mask ^= 1u << idx;
        }
      } else if (m < 2 * e_) {
        std::uint8_t r = residue(div_pi_pow(sub(u, one()), m));
        u = div_unit(u, sqr(add(one(), mul(pi_pow(m / 2), lift(k_.sqrt(r))))));
      } else {
        std::uint8_t r = residue(div_two_pow(sub(u, one()), 2));
        if (k_.trace(r) == 1) {
          const int idx = 1 + e_ * f_;
          u = div_unit(u, basis[idx]);
          mask ^= 1u << idx;
          r = residue(div_two_pow(sub(u, one()), 2));
        }
        u = div_unit(u, sqr(add(one(), mul(two(), lift(k_.artin_schreier(r))))));
      }
    }
    throw std::logic_error("decompose did not terminate");
  }

  /// Element with the given square-class coordinates.
  LocalElem compose(std::uint32_t mask) const {
    const auto basis = square_class_basis();
    LocalElem r = one();
    for (std::size_t i = 0; i < basis.size(); ++i)
      if ((mask >> i) & 1) r = mul(r, basis[i]);
    return r;
  }

  /// Small integral elements i + j*theta used to sample groups and norm images.
  std::vector<LocalElem> samples(int span = 4) const {
    std::vector<LocalElem> out;
    for (int i = 0; i < span; ++i)
      for (int j = 0; j < (kind_ == Kind::base ? 1 : span); ++j) {
        if (kind_ == Kind::base) {
          out.push_back(make(i));
          out.push_back(make(i + span));
        } else {
          out.push_back(make(i, j));
        }
      }
    return out;
  }

  /// Hilbert symbol by the norm-subgroup method.
  int hilbert(const LocalElem& a, const LocalElem& b) const {
    if (is_square(a).square || is_square(b).square) return 1;
    const int target = square_class_dim() - 1;
    std::vector<std::uint32_t> echelon;
    auto reduce = [&](std::uint32_t v) {
      for (std::uint32_t r : echelon)
        if ((v ^ r) < v) v ^= r;
      return v;
    };
    auto insert = [&](std::uint32_t v) {
      v = reduce(v);
      if (v == 0) return;
      echelon.push_back(v);
      std::sort(echelon.begin(), echelon.end(), std::greater<>());
    };
    const auto xs = samples();
    for (int sh = 0; sh <= 2 && static_cast<int>(echelon.size()) < target; ++sh) {
      for (const auto& x0 : xs) {
        LocalElem x = mul(x0, pi_pow(sh));
        for (const auto& y : xs) {
          if (is_zero(y)) continue;
          LocalElem nv = sub(sqr(x), mul(a, sqr(y)));
          auto v = val(nv);
          if (!v || digits(nv) - *v < 2 * e_ + 3) continue;
          insert(decompose(nv));
          if (static_cast<int>(echelon.size()) >= target) break;
        }
        if (static_cast<int>(echelon.size()) >= target) break;
      }
    }
    if (static_cast<int>(echelon.size()) != target)
      throw PrecisionError("hilbert: norm image did not reach index 2");
    return reduce(decompose(b)) == 0 ? 1 : -1;
  }

 private:
  LocalField(Kind kind, int c, int precision) : kind_(kind), c_(c) {
    switch (kind) {
      case Kind::base:
        e_ = 1;
        f_ = 1;
        break;
      case Kind::unramified:
        e_ = 1;
        f_ = 2;
        t_ = 1;
        n_ = static_cast<std::uint64_t>(-1);
        break;
      case Kind::ramified:
        e_ = 2;
        f_ = 1;
        if (c % 2 == 0) {
          t_ = 0;
          n_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(-c));
        } else {
          t_ = 2;
          n_ = static_cast<std::uint64_t>(static_cast<std::int64_t>(1 - c));
        }
        m_inv_ = detail::inv_odd(static_cast<std::uint64_t>(static_cast<std::int64_t>(n_) / 2));
        break;
    }
    k_.f = f_;
    precision_ = precision > 0 ? precision : default_precision();
    if ((precision_ + e_ - 1) / e_ > kMaxBits) throw std::invalid_argument("local precision too large");
  }

  LocalElem norm_bits(LocalElem x) const {
    x.a &= detail::mask((x.prec + e_ - 1) / e_);
    x.b &= detail::mask(x.prec / e_);
    return x;
  }

  Kind kind_;
  int c_ = 1;
  int e_ = 1, f_ = 1;
  // theta^2 = t*theta - n, stored mod 2^64
  std::uint64_t t_ = 0, n_ = 0;
  // inverse of n/2 (ramified only)
  std::uint64_t m_inv_ = 1;
  int precision_ = 0;
  ResidueField k_;
};

// Subspaces of the square-class space, stored as the full sorted element list ----

using Subspace = std::vector<std::uint32_t>;

inline Subspace span(const std::vector<std::uint32_t>& gens) {
  Subspace s{0};
  for (std::uint32_t g : gens) {
    if (std::find(s.begin(), s.end(), g) != s.end()) continue;
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n; ++i) s.push_back(s[i] ^ g);
  }
  std::sort(s.begin(), s.end());
  return s;
}

inline int dimension(const Subspace& s) { return std::countr_zero(static_cast<unsigned>(s.size())); }

inline int bilinear(const std::vector<std::uint32_t>& gram_rows, std::uint32_t x, std::uint32_t y) {
  int acc = 0;
  for (std::size_t i = 0; i < gram_rows.size(); ++i)
    if ((x >> i) & 1) acc ^= std::popcount(gram_rows[i] & y) & 1;
  return acc;
}

struct DualityReport {
  std::string field;
  int precision = 0;
  int e = 0, f = 0, dim = 0;
  /// Hilbert symbols on basis pairs (+-1).
  std::vector<std::vector<int>> gram;
  /// dims of V_k for k = -1, 0, ..., e+1.
  std::vector<int> dims;
  bool bilinear = false;
  bool symmetric = false;
  bool nondegenerate = false;
  bool duality = false;
  bool filtration = false;
  bool even_pairs_trivial = false;
  bool local_square_theorem = false;
  bool units_mod_squares = false;
  bool trace_criterion = false;

  bool ok() const {
    return bilinear && symmetric && nondegenerate && duality && filtration && even_pairs_trivial &&
           local_square_theorem && units_mod_squares && trace_criterion;
  }
};

/// Image of U_{2k} (k >= 0) in the square-class space, from sampled elements.
inline Subspace V_subspace(const LocalField& F, int k) {
  if (k < 0) {
    std::vector<std::uint32_t> all;
    for (int i = 0; i < F.square_class_dim(); ++i) all.push_back(1u << i);
    return span(all);
  }
  if (k > F.e()) return Subspace{0};
  std::vector<std::uint32_t> gens;
  const auto zs = F.samples();
  for (int sh = 0; sh <= 2; ++sh)
    for (const auto& z : zs) {
      LocalElem u = k == 0 ? F.mul(z, F.pi_pow(0)) : F.add(F.one(), F.mul(F.pi_pow(2 * k + sh), z));
      if (k == 0 && !F.is_unit(u)) continue;
      if (k == 0 && sh > 0) u = F.add(u, F.mul(F.pi_pow(sh), z));
      if (!F.is_unit(u)) continue;
      gens.push_back(F.decompose(u));
    }
  return span(gens);
}

inline Subspace orthogonal_complement(const std::vector<std::uint32_t>& gram_rows, const Subspace& W, int dim) {
  Subspace out;
  for (std::uint32_t y = 0; y < (1u << dim); ++y) {
    bool ok = true;
    for (std::uint32_t w : W)
      if (bilinear(gram_rows, w, y)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(y);
  }
  return out;
}

/// Full check of the pairing, filtration and square-class statements for one local field.
inline DualityReport analyze(const LocalField& F) {
  DualityReport r;
  r.field = F.name();
  r.precision = F.precision();
  r.e = F.e();
  r.f = F.f();
  const int D = F.square_class_dim();
  r.dim = D;
  const auto basis = F.square_class_basis();

  // Basis decomposes to unit vectors.
  bool basis_ok = true;
  for (int i = 0; i < D; ++i) basis_ok = basis_ok && F.decompose(basis[i]) == (1u << i);

  std::vector<std::uint32_t> rows(D, 0);
  r.gram.assign(D, std::vector<int>(D, 1));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) {
      r.gram[i][j] = F.hilbert(basis[i], basis[j]);
      if (r.gram[i][j] == -1) rows[i] |= 1u << j;
    }

  // Full table on class representatives, compared against the bilinear extension.
  const std::uint32_t n = 1u << D;
  std::vector<LocalElem> reps;
  for (std::uint32_t m = 0; m < n; ++m) reps.push_back(F.compose(m));
  r.bilinear = basis_ok;
  r.symmetric = true;
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y) {
      const int h = F.hilbert(reps[x], reps[y]);
      const int predicted = bilinear(rows, x, y) ? -1 : 1;
      if (h != predicted) r.bilinear = false;
      if (h != F.hilbert(reps[y], reps[x])) r.symmetric = false;
    }

  // Nondegeneracy: only 0 is orthogonal to everything.
  Subspace full = V_subspace(F, -1);
  r.nondegenerate = orthogonal_complement(rows, full, D).size() == 1;

  // Filtration and duality.
  std::vector<Subspace> V;
  for (int k = -1; k <= F.e() + 1; ++k) V.push_back(V_subspace(F, k));
  r.filtration = true;
  for (int k = -1; k <= F.e() + 1; ++k) {
    const int d = dimension(V[k + 1]);
    r.dims.push_back(d);
    int expect = k == -1 ? D : (k == F.e() + 1 ? 0 : 1 + F.f() * (F.e() - k));
    if (d != expect) r.filtration = false;
  }
  r.duality = true;
  for (int k = -1; k <= F.e() + 1; ++k) {
    Subspace perp = orthogonal_complement(rows, V[k + 1], D);
    if (perp != V[F.e() - k + 1]) r.duality = false;
  }

  // (U_i, U_j) = 1 for even i, j with i + j = 2e.
  r.even_pairs_trivial = true;
  const auto zs = F.samples();
  auto group_samples = [&](int i) {
    std::vector<LocalElem> out;
    for (const auto& z : zs) {
      LocalElem u = i == 0 ? z : F.add(F.one(), F.mul(F.pi_pow(i), z));
      if (F.is_unit(u)) out.push_back(u);
    }
    return out;
  };
  for (int i = 0; i <= 2 * F.e(); i += 2) {
    const auto Ui = group_samples(i), Uj = group_samples(2 * F.e() - i);
    for (const auto& u : Ui)
      for (const auto& v : Uj)
        if (F.hilbert(u, v) != 1) r.even_pairs_trivial = false;
  }

  // Local square theorem with verified certificates.
  r.local_square_theorem = true;
  for (const auto& z : zs) {
    LocalElem w = F.add(F.one(), F.mul(F.pi_pow(2 * F.e() + 1), z));
    auto t = F.is_square(w);
    if (!t.square || !t.certificate) {
      r.local_square_theorem = false;
      continue;
    }
    LocalElem diff = F.sub(F.sqr(*t.certificate), w);
    if (!F.is_zero(diff)) r.local_square_theorem = false;
  }

  // U_{2k} = U_{2k+1} U_k^2 for 0 <= k <= e-1, constructively.
  r.units_mod_squares = true;
  for (int k = 0; k < F.e(); ++k)
    for (const auto& u : group_samples(2 * k)) {
      std::uint8_t res = F.residue(F.div_pi_pow(F.sub(u, F.one()), 2 * k));
      LocalElem s = F.add(F.one(), F.mul(F.pi_pow(k), F.lift(F.residue_field().sqrt(res))));
      if (!F.is_unit(s)) {
        r.units_mod_squares = false;
        continue;
      }
      LocalElem w = F.div_unit(u, F.sqr(s));
      const int ls = k == 0 ? kInfiniteLevel : F.unit_level(s);
      if (F.unit_level(w) < 2 * k + 1 || ls < k) r.units_mod_squares = false;
    }

  // Level 2e: 1 + 4x is a square iff Tr(x mod pi) = 0; and (1+2y)^2 always has trace 0.
  r.trace_criterion = true;
  for (const auto& x : F.samples()) {
    LocalElem u = F.add(F.one(), F.mul(F.make(4), x));
    const bool sq = F.is_square(u).square;
    const bool tr0 = F.residue_field().trace(F.residue(x)) == 0;
    if (sq != tr0) r.trace_criterion = false;
  }
  for (const auto& y : F.samples()) {
    LocalElem s = F.sqr(F.add(F.one(), F.mul(F.two(), y)));
    std::uint8_t res = F.residue(F.div_two_pow(F.sub(s, F.one()), 2));
    if (F.residue_field().trace(res) != 0) r.trace_criterion = false;
  }
  return r;
}

// Global to local --------------------------------------------------------------

/// The completion of a quadratic (or rational) field at a prime above 2.
struct Embedding {
  LocalField F;
  LocalElem w_image;

  LocalElem apply(const IntElem& z) const {
    LocalElem x = F.make_u64(detail::to_u64(z.x), 0, F.precision());
    LocalElem y = F.make_u64(detail::to_u64(z.y), 0, F.precision());
    return F.add(x, F.mul(y, w_image));
  }
};

/// Square class of d in Q2 among the six ramified representatives.
inline int ramified_class(const Integer& d) {
  if (mod(d, 2) == 1) return mod(d, 8) == 3 ? -5 : -1;
  Integer m = mod(d / 2, 8);
  if (m == 1) return 2;
  if (m == 3) return -10;
  if (m == 5) return 10;
  return -2;
}

inline Embedding embed_at(const BaseField& K, const PrimeIdeal& P, int bits = 60) {
  if (P.p != 2) throw std::invalid_argument("embed_at: prime does not lie above 2");
  if (K.is_rational()) {
    LocalField F = LocalField::q2(bits);
    return {F, F.zero()};
  }
  const Integer& d = K.d();
  if (P.residue_degree == 2) {
    LocalField F = LocalField::unramified(bits);
    const std::uint64_t inv5 = detail::inv_odd(5);
    const std::uint64_t u = detail::sqrt_one_mod8(detail::to_u64(d) * inv5);
    // w = (1 + u*sqrt5)/2 = (1-u)/2 + u*g
    return {F, F.make_u64((1 - u) >> 1, u, F.precision())};
  }
  if (!P.ramified) {
    LocalField F = LocalField::q2(bits);
    // Hensel lift of the root of X^2 - X + n congruent to P.root mod 2
    std::uint64_t r = P.root.get_ui();
    const std::uint64_t n = detail::to_u64(K.n());
    for (int i = 0; i < 8; ++i) r -= (r * r - r + n) * detail::inv_odd(2 * r - 1);
    return {F, F.make_u64(r, 0, F.precision())};
  }
  const int c = ramified_class(d);
  LocalField F = LocalField::ramified(c, 2 * bits);
  std::uint64_t ratio;
  if (c % 2 != 0) {
    ratio = detail::to_u64(d) * detail::inv_odd(static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  } else {
    ratio = detail::to_u64(d / 2) * detail::inv_odd(static_cast<std::uint64_t>(static_cast<std::int64_t>(c / 2)));
  }
  const std::uint64_t u = detail::sqrt_one_mod8(ratio);
  // sqrt c = pi (c even) or pi - 1 (c odd)
  if (c % 2 == 0) return {F, F.make_u64(0, u, F.precision())};
  return {F, F.make_u64(0 - u, u, F.precision())};
}

}  // namespace relquad::dyadic
