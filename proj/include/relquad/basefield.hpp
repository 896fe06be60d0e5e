#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relquad/integer.hpp"

namespace relquad {

/// The element x + y*w in the basis {1, w} of the base field.
template <class T>
struct Elem {
  T x = 0;
  T y = 0;

  Elem() = default;
  Elem(T x_, T y_ = 0) : x(std::move(x_)), y(std::move(y_)) {}

  bool is_zero() const { return x == 0 && y == 0; }
  friend bool operator==(const Elem& a, const Elem& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  friend bool operator<(const Elem& a, const Elem& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  }
};

using IntElem = Elem<Integer>;
using FieldElem = Elem<Rational>;

inline FieldElem to_field(const IntElem& e) { return {Rational(e.x), Rational(e.y)}; }

inline bool is_integral_coords(const FieldElem& e) { return is_integer(e.x) && is_integer(e.y); }

inline IntElem to_int(const FieldElem& e) {
  if (!is_integral_coords(e)) throw std::domain_error("element has non-integral coordinates");
  return {e.x.get_num(), e.y.get_num()};
}

/// Lowest common denominator of both coordinates.
inline Integer common_denominator(const FieldElem& e) { return lcm(e.x.get_den(), e.y.get_den()); }

struct UnitData {
  std::optional<IntElem> fundamental_unit;
  std::vector<IntElem> roots_of_unity;
  std::vector<IntElem> unit_square_class_reps;
};

/// K = Q or Q(sqrt d). The second basis element w is (1+sqrt d)/2 when d = 1 mod 4 and
/// sqrt d otherwise; it satisfies w^2 = t*w - n.
class BaseField {
 public:
  static BaseField rational() { return BaseField(std::nullopt); }

  static BaseField quadratic(const Integer& d) {
    if (d == 0 || d == 1) throw std::invalid_argument("d must not be 0 or 1");
    if (!is_squarefree(d)) throw std::invalid_argument("d must be squarefree");
    return BaseField(d);
  }

  /// CLI convention: 0 means Q.
  static BaseField from_code(const Integer& d) { return d == 0 ? rational() : quadratic(d); }

  bool is_rational() const { return data_->rational; }
  bool is_real() const { return data_->rational || data_->d > 0; }
  bool is_imaginary() const { return !data_->rational && data_->d < 0; }
  int degree() const { return data_->rational ? 1 : 2; }
  int r1() const { return data_->rational ? 1 : (data_->d > 0 ? 2 : 0); }
  int r2() const { return is_imaginary() ? 1 : 0; }
  const Integer& d() const { return data_->d; }
  const Integer& disc() const { return data_->disc; }
  const Integer& t() const { return data_->t; }
  const Integer& n() const { return data_->n; }
  /// 0 for Q.
  Integer code() const { return data_->rational ? Integer(0) : data_->d; }

  friend bool operator==(const BaseField& a, const BaseField& b) {
    return a.data_->rational == b.data_->rational && a.data_->d == b.data_->d;
  }
  friend bool operator!=(const BaseField& a, const BaseField& b) { return !(a == b); }

  // Arithmetic -------------------------------------------------------------

  template <class T>
  Elem<T> add(const Elem<T>& a, const Elem<T>& b) const {
    return {a.x + b.x, a.y + b.y};
  }
  template <class T>
  Elem<T> sub(const Elem<T>& a, const Elem<T>& b) const {
    return {a.x - b.x, a.y - b.y};
  }
  template <class T>
  Elem<T> neg(const Elem<T>& a) const {
    return {-a.x, -a.y};
  }
  template <class T>
  Elem<T> scale(const Elem<T>& a, const T& s) const {
    return {a.x * s, a.y * s};
  }
  template <class T>
  Elem<T> mul(const Elem<T>& a, const Elem<T>& b) const {
    const T yy = a.y * b.y;
    return {a.x * b.x - data_->n * yy, a.x * b.y + a.y * b.x + data_->t * yy};
  }
  template <class T>
  Elem<T> sqr(const Elem<T>& a) const {
    return mul(a, a);
  }
  template <class T>
  Elem<T> conj(const Elem<T>& a) const {
    return {a.x + data_->t * a.y, -a.y};
  }
  template <class T>
  T norm(const Elem<T>& a) const {
    return a.x * a.x + data_->t * a.x * a.y + data_->n * a.y * a.y;
  }
  template <class T>
  T trace(const Elem<T>& a) const {
    return 2 * a.x + data_->t * a.y;
  }
  template <class T>
  Elem<T> pow(Elem<T> b, unsigned long e) const {
    Elem<T> r{T(1), T(0)};
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }

  FieldElem inv(const FieldElem& a) const {
    if (a.is_zero()) throw std::domain_error("division by zero");
    Rational nn = norm(a);
    FieldElem c = conj(a);
    return {Rational(c.x / nn), Rational(c.y / nn)};
  }
  FieldElem div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }

  /// Exact quotient of integral elements; nullopt if a/b is not integral.
  std::optional<IntElem> div_exact(const IntElem& a, const IntElem& b) const {
    FieldElem q = div(to_field(a), to_field(b));
    if (!is_integral_coords(q)) return std::nullopt;
    return to_int(q);
  }

  bool is_integral(const FieldElem& a) const { return is_integral_coords(a); }

  /// Coordinates (u, v) with a = u + v*sqrt(d).
  std::pair<Rational, Rational> sqrt_coords(const FieldElem& a) const {
    if (data_->rational) return {a.x, Rational(0)};
    if (data_->t == 1) return {a.x + a.y / 2, a.y / 2};
    return {a.x, a.y};
  }

  FieldElem from_sqrt_coords(const Rational& u, const Rational& v) const {
    if (data_->rational) {
      if (v != 0) throw std::domain_error("sqrt coordinate in Q");
      return {u, Rational(0)};
    }
    if (data_->t == 1) return {u - v, 2 * v};
    return {u, v};
  }

  /// Sign of the image under real embedding i (i=0: sqrt d > 0, i=1: sqrt d < 0),
  /// decided by comparing u^2 against d*v^2.
  int sign_at(const FieldElem& a, int i) const {
    if (i < 0 || i >= r1()) throw std::out_of_range("not a real embedding index");
    auto [u, v] = sqrt_coords(a);
    if (i == 1) v = -v;
    int su = sgn(u), sv = sgn(v);
    if (sv == 0) return su;
    if (su == 0 || su == sv) return su == 0 ? sv : su;
    Rational cmp = u * u - Rational(data_->d) * v * v;
    return sgn(cmp) > 0 ? su : sv;
  }
  int sign_at(const IntElem& a, int i) const { return sign_at(to_field(a), i); }

  bool is_totally_positive(const FieldElem& a) const {
    for (int i = 0; i < r1(); ++i)
      if (sign_at(a, i) <= 0) return false;
    return !a.is_zero();
  }
  bool is_totally_negative(const FieldElem& a) const {
    for (int i = 0; i < r1(); ++i)
      if (sign_at(a, i) >= 0) return false;
    return !a.is_zero();
  }
  bool is_totally_positive(const IntElem& a) const { return is_totally_positive(to_field(a)); }
  bool is_totally_negative(const IntElem& a) const { return is_totally_negative(to_field(a)); }

  /// |sigma_i(a)| compared with |sigma_i(b)|: -1, 0, +1.
  int compare_abs_at(const FieldElem& a, const FieldElem& b, int i) const {
    return sign_at(sub(mul(a, a), mul(b, b)), i);
  }

  /// Square root in K when it exists.
  std::optional<FieldElem> sqrt(const FieldElem& z) const {
    if (z.is_zero()) return FieldElem{};
    if (data_->rational) {
      auto r = rational_sqrt(z.x);
      if (!r) return std::nullopt;
      return FieldElem{*r, Rational(0)};
    }
    auto [u, v] = sqrt_coords(z);
    const Rational d(data_->d);
    if (v == 0) {
      if (auto r = rational_sqrt(u)) return from_sqrt_coords(*r, 0);
      if (auto r = rational_sqrt(Rational(u / d))) return from_sqrt_coords(0, *r);
      return std::nullopt;
    }
    auto nn = rational_sqrt(Rational(u * u - d * v * v));
    if (!nn) return std::nullopt;
    for (const Rational& cand : {Rational((u + *nn) / 2), Rational((u - *nn) / 2)}) {
      auto p = rational_sqrt(cand);
      if (!p || *p == 0) continue;
      Rational q = v / (2 * *p);
      FieldElem r = from_sqrt_coords(*p, q);
      if (mul(r, r) == z) return r;
    }
    return std::nullopt;
  }

  bool is_square(const FieldElem& z) const { return sqrt(z).has_value(); }

  // Units --------------------------------------------------------------------

  bool is_unit(const IntElem& u) const { return abs(norm(u)) == 1; }

  IntElem inverse_unit(const IntElem& u) const {
    Integer nn = norm(u);
    if (abs(nn) != 1) throw std::domain_error("not a unit");
    return scale(conj(u), nn);
  }

  const UnitData& units() const { return data_->units; }

  const IntElem& fundamental_unit() const {
    if (!data_->units.fundamental_unit)
      throw std::logic_error("fundamental unit is defined only for real quadratic fields");
    return *data_->units.fundamental_unit;
  }

  /// True iff u = v^2 for a unit v.
  bool is_unit_square(IntElem u) const {
    if (!is_unit(u)) throw std::domain_error("is_unit_square: not a unit");
    const IntElem one{1, 0}, minus_one{-1, 0};
    if (data_->rational) return u == one;
    if (is_imaginary()) {
      for (const auto& r : data_->units.roots_of_unity)
        if (sqr(r) == u) return true;
      return false;
    }
    const IntElem& eps = fundamental_unit();
    const IntElem eps_inv = inverse_unit(eps);
    long k = 0;
    while (u != one && u != minus_one) {
      // |sigma_1(u)| > 1 iff sigma_1(u^2 - 1) > 0
      if (sign_at(sub(sqr(u), one), 0) > 0) {
        u = mul(u, eps_inv);
        ++k;
      } else {
        u = mul(u, eps);
        --k;
      }
    }
    return u == one && k % 2 == 0;
  }

  // Text ---------------------------------------------------------------------

  std::string descriptor() const {
    return data_->rational ? "Q" : "Q(sqrt{" + data_->d.get_str() + "})";
  }

  static BaseField parse_descriptor(std::string_view s);

  template <class T>
  std::string format(const Elem<T>& e) const {
    if (data_->rational) return to_string(e.x);
    return to_string(e.x) + "+" + to_string(e.y) + "*w";
  }

  FieldElem parse(std::string_view s) const;
  IntElem parse_int(std::string_view s) const { return to_int(parse(s)); }

 private:
  struct Data {
    bool rational = true;
    Integer d = 1, disc = 1, t = 0, n = 0;
    UnitData units;
  };

  explicit BaseField(std::optional<Integer> d);

  IntElem compute_fundamental_unit() const;

  std::shared_ptr<const Data> data_;
};

inline BaseField::BaseField(std::optional<Integer> d) {
  auto data = std::make_shared<Data>();
  if (d) {
    data->rational = false;
    data->d = *d;
    if (mod(*d, 4) == 1) {
      data->disc = *d;
      data->t = 1;
      data->n = (1 - *d) / 4;
    } else {
      data->disc = 4 * *d;
      data->t = 0;
      data->n = -*d;
    }
  }
  data_ = data;
  UnitData u;
  const IntElem one{1, 0}, minus_one{-1, 0};
  u.roots_of_unity = {one, minus_one};
  if (data->rational) {
    u.unit_square_class_reps = {one, minus_one};
  } else if (*d > 0) {
    IntElem eps = compute_fundamental_unit();
    u.fundamental_unit = eps;
    u.unit_square_class_reps = {one, minus_one, eps, neg(eps)};
  } else if (*d == -1) {
    IntElem i{0, 1};
    u.roots_of_unity = {one, i, minus_one, neg(i)};
    u.unit_square_class_reps = {one, i};
  } else if (*d == -3) {
    // w = (1+sqrt -3)/2 is a primitive sixth root of unity
    IntElem z{0, 1};
    u.roots_of_unity.clear();
    IntElem r = one;
    for (int k = 0; k < 6; ++k) {
      u.roots_of_unity.push_back(r);
      r = mul(r, z);
    }
    u.unit_square_class_reps = {one, minus_one};
  } else {
    u.unit_square_class_reps = {one, minus_one};
  }
  data->units = std::move(u);
}

/// Continued fraction of w = (P0 + sqrt D)/Q0; the first convergent p/q with p - q*w a unit
/// yields the fundamental unit.
inline IntElem BaseField::compute_fundamental_unit() const {
  const Integer D = data_->d;
  const Integer s = isqrt(D);
  Integer P = data_->t == 1 ? 1 : 0;
  Integer Q = data_->t == 1 ? 2 : 1;
  Integer p1 = 1, p2 = 0, q1 = 0, q2 = 1;
  for (int iter = 0; iter < 100000; ++iter) {
    Integer a = Q > 0 ? floor_div(P + s, Q) : floor_div(-P - s - 1, -Q);
    Integer p = a * p1 + p2, q = a * q1 + q2;
    p2 = p1;
    p1 = p;
    q2 = q1;
    q1 = q;
    IntElem cand{p, -q};
    if (abs(norm(cand)) == 1) {
      if (sign_at(cand, 0) < 0) cand = neg(cand);
      if (sign_at(sub(cand, IntElem{1, 0}), 0) < 0) cand = inverse_unit(cand);
      return cand;
    }
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::logic_error("continued fraction did not produce a unit");
}

namespace detail {

inline std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

}  // namespace detail

inline BaseField BaseField::parse_descriptor(std::string_view text) {
  std::string s = detail::strip_spaces(text);
  if (s == "Q" || s == "0") return rational();
  const std::string pre = "Q(sqrt";
  if (s.rfind(pre, 0) == 0 && s.size() > pre.size() + 3) {
    std::string inner = s.substr(pre.size());
    if ((inner.front() == '{' && inner.substr(inner.size() - 2) == "})") ||
        (inner.front() == '(' && inner.substr(inner.size() - 2) == "))"))
      return quadratic(Integer(inner.substr(1, inner.size() - 3)));
  }
  try {
    return from_code(Integer(s));
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("bad field descriptor: " + std::string(text));
  }
}

/// Accepts sums of terms "r", "r*w", "w" with optional signs, e.g. "-1/2+3*w", "2-w".
inline FieldElem BaseField::parse(std::string_view text) const {
  std::string s = detail::strip_spaces(text);
  if (s.empty()) throw std::invalid_argument("empty element");
  FieldElem out;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    bool any_sign = false;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      any_sign = true;
      ++i;
    }
    if (i == s.size()) throw std::invalid_argument("dangling sign in element: " + s);
    if (!any_sign && i != 0) throw std::invalid_argument("missing operator in element: " + s);
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    bool is_w = false;
    Rational coeff = 1;
    if (term == "w") {
      is_w = true;
    } else if (term.size() > 2 && term.substr(term.size() - 2) == "*w") {
      is_w = true;
      coeff = detail::parse_rational(term.substr(0, term.size() - 2));
    } else {
      coeff = detail::parse_rational(term);
    }
    if (sign < 0) coeff = -coeff;
    if (is_w) {
      if (data_->rational) throw std::invalid_argument("w is not defined over Q");
      out.y += coeff;
    } else {
      out.x += coeff;
    }
    i = j;
  }
  return out;
}

}  // namespace relquad
