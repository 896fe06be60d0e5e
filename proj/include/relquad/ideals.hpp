#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relquad/basefield.hpp"

namespace relquad {

namespace detail {

struct Hnf {
  Integer a, b, c;
};

/// Hermite form of the Z-span of integral vectors (x, y): basis (a, 0), (b, c) with
/// a, c > 0 and 0 <= b < a. For Q only the x-coordinates matter and (b, c) = (0, 1).
inline Hnf hnf2(const std::vector<IntElem>& vs, bool rational) {
  Integer a = 0;
  if (rational) {
    for (const auto& v : vs) a = gcd(a, v.x);
    if (a == 0) throw std::invalid_argument("zero ideal");
    return {a, 0, 1};
  }
  Integer px = 0, py = 0;
  for (const auto& v : vs) {
    if (v.y == 0) {
      a = gcd(a, v.x);
      continue;
    }
    if (py == 0) {
      px = v.x;
      py = v.y;
      continue;
    }
    auto [g, s, t] = xgcd(py, v.y);
    Integer ox = (v.y / g) * px - (py / g) * v.x;
    px = s * px + t * v.x;
    py = g;
    a = gcd(a, ox);
  }
  if (py == 0 || a == 0) throw std::invalid_argument("generators do not span a full lattice");
  if (py < 0) {
    px = -px;
    py = -py;
  }
  return {a, mod(px, a), py};
}

}  // namespace detail

/// Fractional ideal M/den with M = Z(a,0) + Z(b,c) in the basis {1, w}.
class Ideal {
 public:
  static Ideal unit(const BaseField& K) { return Ideal(K, 1, 0, 1, 1); }

  static Ideal from_generators(const BaseField& K, const std::vector<FieldElem>& gens) {
    Integer L = 1;
    bool nonzero = false;
    for (const auto& g : gens) {
      L = lcm(L, common_denominator(g));
      nonzero = nonzero || !g.is_zero();
    }
    if (!nonzero) throw std::invalid_argument("ideal_from_generators: all generators are zero");
    std::vector<IntElem> vs;
    const IntElem w{0, 1};
    for (const auto& g : gens) {
      IntElem v = to_int(K.scale(g, Rational(L)));
      if (v.is_zero()) continue;
      vs.push_back(v);
      if (!K.is_rational()) vs.push_back(K.mul(v, w));
    }
    auto h = detail::hnf2(vs, K.is_rational());
    return Ideal(K, h.a, h.b, h.c, L);
  }

  static Ideal from_generators(const BaseField& K, const std::vector<IntElem>& gens) {
    std::vector<FieldElem> fs;
    for (const auto& g : gens) fs.push_back(to_field(g));
    return from_generators(K, fs);
  }

  static Ideal principal(const BaseField& K, const FieldElem& g) { return from_generators(K, {g}); }
  static Ideal principal(const BaseField& K, const IntElem& g) { return from_generators(K, {to_field(g)}); }
  static Ideal principal(const BaseField& K, const Integer& g) { return principal(K, IntElem{g, 0}); }

  /// Validates O-stability and normalizes.
  static Ideal from_hnf(const BaseField& K, Integer a, Integer b, Integer c, Integer den) {
    if (a <= 0 || c <= 0 || den <= 0) throw std::invalid_argument("HNF diagonal must be positive");
    if (K.is_rational() && (b != 0 || c != 1)) throw std::invalid_argument("HNF over Q is 1x1");
    if (b < 0 || b >= a) throw std::invalid_argument("HNF off-diagonal not reduced");
    Ideal I(K, a, b, c, den);
    if (!K.is_rational()) {
      const IntElem w{0, 1};
      for (const auto& e : I.numerator_basis())
        if (!I.numerator_contains(K.mul(e, w))) throw std::invalid_argument("module is not an ideal");
    }
    return I;
  }

  const BaseField& field() const { return K_; }
  const Integer& a() const { return a_; }
  const Integer& b() const { return b_; }
  const Integer& c() const { return c_; }
  const Integer& den() const { return den_; }
  bool is_integral() const { return den_ == 1; }
  bool is_unit() const { return a_ == 1 && c_ == 1 && den_ == 1; }

  Rational norm() const {
    Rational r = K_.is_rational() ? Rational(a_, den_) : Rational(a_ * c_, den_ * den_);
    r.canonicalize();
    return r;
  }

  Integer norm_int() const {
    if (!is_integral()) throw std::domain_error("norm_int of fractional ideal");
    return a_ * c_;
  }

  /// Z-basis of the numerator module.
  std::vector<IntElem> numerator_basis() const {
    if (K_.is_rational()) return {IntElem{a_, 0}};
    return {IntElem{a_, 0}, IntElem{b_, c_}};
  }

  std::vector<FieldElem> basis() const {
    std::vector<FieldElem> out;
    for (const auto& e : numerator_basis()) out.push_back({Rational(e.x, den_), Rational(e.y, den_)});
    for (auto& e : out) {
      e.x.canonicalize();
      e.y.canonicalize();
    }
    return out;
  }

  bool contains(const FieldElem& z) const {
    FieldElem s = K_.scale(z, Rational(den_));
    if (!is_integral_coords(s)) return false;
    return numerator_contains(to_int(s));
  }
  bool contains(const IntElem& z) const {
    if (den_ == 1) return numerator_contains(z);
    return contains(to_field(z));
  }

  /// this ⊇ other.
  bool contains(const Ideal& other) const {
    for (const auto& e : other.basis())
      if (!contains(e)) return false;
    return true;
  }

  /// this | other, i.e. other ⊆ this.
  bool divides(const Ideal& other) const { return contains(other); }

  friend bool operator==(const Ideal& x, const Ideal& y) {
    return x.K_ == y.K_ && x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Ideal& x, const Ideal& y) { return !(x == y); }
  friend bool operator<(const Ideal& x, const Ideal& y) {
    Rational nx = x.norm(), ny = y.norm();
    if (nx != ny) return nx < ny;
    if (x.a_ != y.a_) return x.a_ < y.a_;
    if (x.b_ != y.b_) return x.b_ < y.b_;
    if (x.c_ != y.c_) return x.c_ < y.c_;
    return x.den_ < y.den_;
  }

  friend Ideal operator*(const Ideal& x, const Ideal& y) {
    const BaseField& K = x.K_;
    std::vector<IntElem> vs;
    for (const auto& e : x.numerator_basis())
      for (const auto& f : y.numerator_basis()) vs.push_back(K.mul(e, f));
    auto h = detail::hnf2(vs, K.is_rational());
    return Ideal(K, h.a, h.b, h.c, x.den_ * y.den_);
  }

  /// gcd = sum of ideals.
  friend Ideal operator+(const Ideal& x, const Ideal& y) {
    std::vector<FieldElem> gens = x.basis();
    for (const auto& e : y.basis()) gens.push_back(e);
    return from_generators(x.K_, gens);
  }

  Ideal conj() const {
    std::vector<FieldElem> gens;
    for (const auto& e : basis()) gens.push_back(K_.conj(e));
    return from_generators(K_, gens);
  }

  Ideal inverse() const {
    if (K_.is_rational()) return principal(K_, FieldElem{canonical(Rational(den_, a_)), Rational(0)});
    Rational nn = norm();
    std::vector<FieldElem> gens;
    for (const auto& e : conj().basis()) gens.push_back(K_.scale(e, Rational(1 / nn)));
    return from_generators(K_, gens);
  }

  Ideal pow(long e) const {
    Ideal base = e < 0 ? inverse() : *this;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Ideal r = unit(K_);
    while (k) {
      if (k & 1) r = r * base;
      base = base * base;
      k >>= 1;
    }
    return r;
  }

  /// Exact quotient; requires y | x.
  friend Ideal operator/(const Ideal& x, const Ideal& y) {
    if (!y.divides(x)) throw std::domain_error("ideal division: divisor does not divide dividend");
    return x * y.inverse();
  }

  /// Intersection = lcm.
  Ideal intersect(const Ideal& y) const { return ((*this) * y) * ((*this) + y).inverse(); }

  /// Canonical representative of z modulo this (integral) ideal, inside the HNF box.
  IntElem reduce(const IntElem& z) const {
    if (!is_integral()) throw std::domain_error("reduce modulo fractional ideal");
    if (K_.is_rational()) return {mod(z.x, a_), 0};
    Integer y = mod(z.y, c_);
    Integer q = (z.y - y) / c_;
    Integer x = mod(z.x - q * b_, a_);
    return {x, y};
  }

  /// Representatives x + y*w, 0 <= x < a, 0 <= y < c, of O/this.
  std::vector<IntElem> residues(std::size_t bound = kDefaultEnumerationBound) const {
    if (!is_integral()) throw std::domain_error("residues of fractional ideal");
    Integer nn = norm_int();
    if (nn > Integer(static_cast<unsigned long>(bound)))
      throw EnumerationBoundExceeded("residues: ideal norm " + nn.get_str() + " exceeds bound");
    std::vector<IntElem> out;
    out.reserve(nn.get_ui());
    for (Integer y = 0; y < c_; ++y)
      for (Integer x = 0; x < a_; ++x) out.push_back({x, y});
    return out;
  }

  std::string hnf_text() const {
    std::string s = K_.is_rational() ? "[[" + a_.get_str() + "]]"
                                     : "[[" + a_.get_str() + "," + b_.get_str() + "],[0," +
                                           c_.get_str() + "]]";
    return s + "/" + den_.get_str();
  }

  std::string pretty() const;

  static Ideal parse(const BaseField& K, std::string_view text);

 private:
  Ideal(const BaseField& K, Integer a, Integer b, Integer c, Integer den)
      : K_(K), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), den_(std::move(den)) {
    normalize();
  }

  void normalize() {
    Integer g = gcd(gcd(a_, b_), c_);
    if (K_.is_rational()) g = a_;
    g = gcd(g, den_);
    if (g != 1) {
      a_ /= g;
      den_ /= g;
      if (!K_.is_rational()) {
        b_ /= g;
        c_ /= g;
      }
    }
  }

  bool numerator_contains(const IntElem& z) const {
    if (K_.is_rational()) return z.y == 0 && relquad::divides(a_, z.x);
    if (!relquad::divides(c_, z.y)) return false;
    return relquad::divides(a_, z.x - b_ * (z.y / c_));
  }

  BaseField K_;
  Integer a_, b_, c_, den_;
};

inline Ideal operator*(const Ideal& I, const IntElem& g) { return I * Ideal::principal(I.field(), g); }

/// Human-oriented element text, e.g. "2", "w", "1-w", "-1/2+3/2*w".
inline std::string pretty_elem(const BaseField& K, const FieldElem& e) {
  std::string out;
  if (e.x != 0 || e.y == 0) out = e.x.get_str();
  if (e.y != 0) {
    std::string coeff;
    Rational ay = abs(e.y);
    if (ay != 1) coeff = ay.get_str() + "*";
    std::string sign = e.y < 0 ? "-" : (out.empty() ? "" : "+");
    out += sign + coeff + "w";
  }
  (void)K;
  return out;
}

inline std::string Ideal::pretty() const {
  auto bs = basis();
  if (K_.is_rational() || (relquad::divides(a_, b_) && relquad::divides(a_, c_))) return "(" + pretty_elem(K_, bs[0]) + ")";
  return "(" + pretty_elem(K_, bs[0]) + ", " + pretty_elem(K_, bs[1]) + ")";
}

/// Accepts "[[a,b],[0,c]]/den", "[[a]]/den" (over Q), or a generator list "(g1, g2, ...)".
inline Ideal Ideal::parse(const BaseField& K, std::string_view text) {
  std::string s = detail::strip_spaces(text);
  if (s.rfind("[[", 0) == 0) {
    Integer den = 1;
    auto slash = s.rfind("]]/");
    std::string body = s;
    if (slash != std::string::npos) {
      den = Integer(s.substr(slash + 3));
      body = s.substr(0, slash + 2);
    }
    std::vector<Integer> nums;
    std::string cur;
    for (char ch : body) {
      if (ch == '-' || (ch >= '0' && ch <= '9')) {
        cur.push_back(ch);
      } else if (!cur.empty()) {
        nums.emplace_back(cur);
        cur.clear();
      }
    }
    if (K.is_rational()) {
      if (nums.size() != 1) throw std::invalid_argument("bad ideal text: " + s);
      return from_hnf(K, nums[0], 0, 1, den);
    }
    if (nums.size() != 4 || nums[2] != 0) throw std::invalid_argument("bad ideal text: " + s);
    return from_hnf(K, nums[0], nums[1], nums[3], den);
  }
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<FieldElem> gens;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    std::string part = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    gens.push_back(K.parse(part));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return from_generators(K, gens);
}

// Primes ---------------------------------------------------------------------

struct PrimeIdeal {
  Integer p;
  Ideal ideal;
  int residue_degree = 1;
  bool ramified = false;
  /// For residue degree 1: w is congruent to root modulo the prime.
  Integer root = 0;
  /// An element of P^{-1} outside O; multiplying by it lowers the P-valuation by one.
  FieldElem gamma;

  int e() const { return ramified ? 2 : 1; }
  Integer norm() const { return residue_degree == 1 ? p : p * p; }
  friend bool operator==(const PrimeIdeal& x, const PrimeIdeal& y) { return x.ideal == y.ideal; }
  friend bool operator<(const PrimeIdeal& x, const PrimeIdeal& y) {
    if (x.p != y.p) return x.p < y.p;
    return x.ideal < y.ideal;
  }
};

/// Prime ideals above the rational prime p, sorted by root.
inline std::vector<PrimeIdeal> primes_above(const BaseField& K, const Integer& p) {
  std::vector<PrimeIdeal> out;
  const FieldElem inv_p{canonical(Rational(Integer(1), p)), Rational(0)};
  if (K.is_rational()) {
    out.push_back({p, Ideal::principal(K, p), 1, false, 0, inv_p});
    return out;
  }
  std::vector<Integer> roots;
  const int k = kronecker(K.disc(), p);
  if (p == 2) {
    for (int r = 0; r < 2; ++r)
      if (divides(Integer(2), Integer(r * r) - K.t() * r + K.n())) roots.emplace_back(r);
    const int expect = k == 1 ? 2 : (k == 0 ? 1 : 0);
    if (static_cast<int>(roots.size()) != expect)
      throw std::logic_error("splitting of 2 disagrees with the Kronecker symbol");
  } else if (k == 0) {
    roots.push_back(mod(K.t() * ((p + 1) / 2), p));
  } else if (k == 1) {
    const std::uint64_t pp = p.get_ui();
    const std::uint64_t dd = mod(K.disc(), p).get_ui();
    Integer s(static_cast<unsigned long>(sqrt_mod_prime(dd, pp)));
    Integer inv2 = (p + 1) / 2;
    roots.push_back(mod((K.t() + s) * inv2, p));
    roots.push_back(mod((K.t() - s) * inv2, p));
    std::sort(roots.begin(), roots.end());
  }
  if (roots.empty()) {
    out.push_back({p, Ideal::principal(K, p), 2, false, 0, inv_p});
    return out;
  }
  for (const auto& r : roots) {
    PrimeIdeal P{p, Ideal::from_generators(K, std::vector<IntElem>{{p, 0}, {-r, 1}}), 1,
                 roots.size() == 1, r, FieldElem{}};
    P.gamma = {canonical(Rational(K.t() - r, p)), canonical(Rational(Integer(-1), p))};
    if (P.ideal.norm() != Rational(p)) throw std::logic_error("prime ideal has wrong norm");
    out.push_back(P);
  }
  return out;
}

inline int valuation(const PrimeIdeal& P, IntElem z) {
  if (z.is_zero()) throw std::domain_error("valuation of zero");
  const BaseField& K = P.ideal.field();
  int v = 0;
  while (P.ideal.contains(z)) {
    z = to_int(K.mul(to_field(z), P.gamma));
    ++v;
  }
  return v;
}

inline int valuation(const PrimeIdeal& P, const FieldElem& z) {
  Integer L = common_denominator(z);
  const BaseField& K = P.ideal.field();
  return valuation(P, to_int(K.scale(z, Rational(L)))) - valuation(P, IntElem{L, 0});
}

inline int valuation(const PrimeIdeal& P, const Ideal& I) {
  int v = std::numeric_limits<int>::max();
  for (const auto& e : I.basis())
    if (!e.is_zero()) v = std::min(v, valuation(P, e));
  return v;
}

using Factorization = std::vector<std::pair<PrimeIdeal, int>>;

inline Factorization factor(const Ideal& I) {
  const BaseField& K = I.field();
  Integer top = I.is_integral() ? I.norm_int() : I.a() * I.c() * I.den();
  if (K.is_rational()) top = I.a() * I.den();
  Factorization out;
  for (const auto& [p, e] : factor_integer(top)) {
    (void)e;
    for (const auto& P : primes_above(K, p)) {
      int v = valuation(P, I);
      if (v != 0) out.emplace_back(P, v);
    }
  }
  return out;
}

inline Ideal reassemble(const BaseField& K, const Factorization& f) {
  Ideal r = Ideal::unit(K);
  for (const auto& [P, e] : f) r = r * P.ideal.pow(e);
  return r;
}

/// Generator of a principal ideal, found by exact search among elements of norm +-N.
inline std::optional<FieldElem> is_principal(const Ideal& I) {
  const BaseField& K = I.field();
  const Rational inv_den(1, I.den());
  auto scaled = [&](const IntElem& g) {
    FieldElem f = K.scale(to_field(g), inv_den);
    f.x.canonicalize();
    f.y.canonicalize();
    return f;
  };
  if (K.is_rational()) return scaled(IntElem{I.a(), 0});
  const Integer N = I.a() * I.c();
  const Integer D = K.disc();
  Integer Y;
  if (K.is_imaginary()) {
    Y = isqrt(floor_div(4 * N, -D)) + 1;
  } else {
    auto [u, v] = K.sqrt_coords(to_field(K.fundamental_unit()));
    Integer E = ceil_div(u.get_num(), u.get_den()) +
                ceil_div(v.get_num(), v.get_den()) * (isqrt(K.d()) + 1);
    Y = 2 * (isqrt(N) + 1) * E;
  }
  const Ideal M = Ideal::from_hnf(K, I.a(), I.b(), I.c(), 1);
  std::optional<IntElem> best;
  auto consider = [&](const Integer& x, const Integer& y) {
    IntElem g{x, y};
    if (!M.contains(g)) return;
    if (!best || abs(g.y) < abs(best->y) || (abs(g.y) == abs(best->y) && g < *best)) best = g;
  };
  const Integer start = floor_div(-Y, I.c()) * I.c();
  for (Integer y = start; y <= Y; y += I.c()) {
    for (int s : {1, -1}) {
      if (s == -1 && K.is_imaginary()) continue;
      Integer disc = D * y * y + 4 * s * N;
      if (disc < 0 || !is_perfect_square(disc)) continue;
      Integer r = isqrt(disc);
      for (const Integer& num : {Integer(-K.t() * y + r), Integer(-K.t() * y - r)})
        if (divides(Integer(2), num)) consider(num / 2, y);
    }
  }
  if (!best) return std::nullopt;
  return scaled(*best);
}

/// "(g)" with a small generator when the ideal is principal, else the two-generator form.
inline std::string display(const Ideal& I) {
  if (auto g = is_principal(I)) {
    FieldElem h = *g;
    if (h.x < 0 || (h.x == 0 && h.y < 0)) h = {-h.x, -h.y};
    return "(" + pretty_elem(I.field(), h) + ")";
  }
  return I.pretty();
}

// Divisors -------------------------------------------------------------------

inline std::vector<Ideal> divisors(const Ideal& I) {
  if (!I.is_integral()) throw std::domain_error("divisors of fractional ideal");
  std::vector<Ideal> out{Ideal::unit(I.field())};
  for (const auto& [P, e] : factor(I)) {
    std::vector<Ideal> next;
    for (const auto& d : out) {
      Ideal pk = d;
      for (int k = 0; k <= e; ++k) {
        next.push_back(pk);
        pk = pk * P.ideal;
      }
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline int mobius(const Ideal& I) {
  int m = 1;
  for (const auto& [P, e] : factor(I)) {
    if (e > 1) return 0;
    m = -m;
  }
  return m;
}

/// sum over d | I of N(d)^s.
inline Rational sigma(const Ideal& I, long s) {
  Rational total = 0;
  for (const auto& d : divisors(I)) {
    Integer nn = d.norm_int();
    Integer pw = relquad::pow(nn, static_cast<unsigned long>(s < 0 ? -s : s));
    total += s < 0 ? Rational(1, pw) : Rational(pw);
  }
  total.canonicalize();
  return total;
}

/// All integral ideals of norm n.
inline std::vector<Ideal> ideals_of_norm(const BaseField& K, const Integer& n) {
  if (n < 1) throw std::invalid_argument("ideals_of_norm: n must be positive");
  std::vector<Ideal> out{Ideal::unit(K)};
  if (n == 1) return out;
  for (const auto& [p, k] : factor_integer(n)) {
    std::vector<Ideal> local;
    auto ps = primes_above(K, p);
    if (ps.size() == 2) {
      for (int i = 0; i <= k; ++i) local.push_back(ps[0].ideal.pow(i) * ps[1].ideal.pow(k - i));
    } else if (ps[0].residue_degree == 2) {
      if (k % 2 == 0) local.push_back(ps[0].ideal.pow(k / 2));
    } else {
      local.push_back(ps[0].ideal.pow(k));
    }
    std::vector<Ideal> next;
    for (const auto& a : out)
      for (const auto& b : local) next.push_back(a * b);
    out = std::move(next);
    if (out.empty()) return out;
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Number of integral ideals of norm n, from the splitting types alone.
inline Integer count_ideals_of_norm(const BaseField& K, const Integer& n) {
  Integer total = 1;
  for (const auto& [p, k] : factor_integer(n)) {
    if (K.is_rational()) continue;
    int s = kronecker(K.disc(), p);
    if (s == 1) total *= k + 1;
    else if (s == -1 && k % 2 == 1) return 0;
  }
  return total;
}

}  // namespace relquad
