#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "relquad/discriminants.hpp"

namespace relquad {

/// Prime ideals of norm <= bound, ordered by norm.
inline std::vector<PrimeIdeal> primes_by_norm(const BaseField& K, unsigned long bound) {
  std::vector<PrimeIdeal> out;
  for (unsigned long p : primes_up_to(bound))
    for (const auto& P : primes_above(K, Integer(p)))
      if (P.norm() <= bound) out.push_back(P);
  std::stable_sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.norm() < b.norm(); });
  return out;
}

inline bool coprime(const Ideal& a, const Ideal& b) { return (a + b).is_unit(); }

struct ConductorCheck {
  Ideal conductor;
  /// psi agreed on every tested lift of every coprime residue class mod (delta).
  bool well_defined = true;
  std::size_t residues_checked = 0;
  /// For each prime q of the conductor: a = b mod conductor/q with psi(a) != psi(b).
  std::vector<std::pair<PrimeIdeal, std::pair<IntElem, IntElem>>> witnesses;
  /// Every prime of the conductor has a witness.
  bool primitive = true;
};

class CharacterContext {
 public:
  static constexpr unsigned long kAuxiliaryNormBound = 10000;

  CharacterContext(const BaseField& K, const IntElem& delta)
      : K_(K), info_(conductor_ideal(K, delta)), delta_ideal_(Ideal::principal(K, delta)), memo_(std::make_shared<Memo>()) {
    for (int i = 0; i < K.r1(); ++i)
      if (K.sign_at(delta, i) < 0) M_.push_back(i);
    for (const auto& [P, l] : factor(delta_ideal_)) {
      (void)l;
      delta_primes_.push_back(P);
    }
  }

  const BaseField& field() const { return K_; }
  const IntElem& delta() const { return info_.delta; }
  const DiscriminantInfo& disc() const { return info_; }
  const Ideal& conductor() const { return info_.rel_disc; }
  const Ideal& f_delta() const { return info_.f_delta; }
  const std::vector<int>& M() const { return M_; }

  bool coprime_to_delta(const Ideal& a) const {
    for (const auto& P : delta_primes_)
      if (P.ideal.divides(a)) return false;
    return true;
  }
  bool coprime_to_delta(const IntElem& a) const {
    for (const auto& P : delta_primes_)
      if (P.ideal.contains(a)) return false;
    return true;
  }

  /// +1 if delta is a square mod 4P, else -1; P must not divide delta.
  int leg_prime(const PrimeIdeal& P) const {
    {
      std::lock_guard<std::mutex> lock(memo_->mu);
      auto it = memo_->leg.find(P.ideal);
      if (it != memo_->leg.end()) return it->second;
    }
    const int v = compute_leg_prime(P);
    std::lock_guard<std::mutex> lock(memo_->mu);
    memo_->leg.emplace(P.ideal, v);
    return v;
  }

  int leg(const Ideal& a) const {
    if (!coprime_to_delta(a)) throw std::domain_error("leg: ideal is not coprime to delta");
    int r = 1;
    for (const auto& [P, e] : factor(a))
      if (e % 2 && leg_prime(P) < 0) r = -r;
    return r;
  }

  int sign_M(const IntElem& a) const {
    int s = 1;
    for (int i : M_) s *= K_.sign_at(a, i);
    return s;
  }

  int psi(const IntElem& a) const {
    if (a.is_zero() || !coprime_to_delta(a)) throw std::domain_error("psi: argument is not coprime to delta");
    return leg(Ideal::principal(K_, a)) * sign_M(a);
  }

  /// Primitive character; 0 on ideals meeting the conductor.
  int uleg(const Ideal& a) const {
    if (!coprime(a, conductor())) return 0;
    if (coprime_to_delta(a)) return leg(a);
    for (const auto& b : auxiliary_candidates(a, 1)) return uleg_via(a, b);
    throw std::runtime_error("uleg: no auxiliary prime of norm <= 10^4");
  }

  /// Auxiliary ideals b coprime to delta with a*b principal: (1) first, then primes by norm.
  std::vector<Ideal> auxiliary_candidates(const Ideal& a, std::size_t count) const {
    std::vector<Ideal> out;
    if (is_principal(a)) out.push_back(Ideal::unit(K_));
    if (out.size() >= count) return out;
    for (const auto& P : aux_primes()) {
      if (!coprime_to_delta(P.ideal)) continue;
      if (!is_principal(a * P.ideal)) continue;
      out.push_back(P.ideal);
      if (out.size() >= count) break;
    }
    return out;
  }

  /// Primitive character on a (coprime to the conductor) through the auxiliary ideal b.
  int uleg_via(const Ideal& a, const Ideal& b) const {
    auto g = is_principal(a * b);
    if (!g) throw std::invalid_argument("uleg_via: a*b is not principal");
    if (!K_.is_integral(*g)) throw std::logic_error("generator of an integral ideal is not integral");
    const IntElem alpha = to_int(*g);
    const IntElem proxy = coprime_proxy(alpha);
    // psi depends only on the class mod the conductor; leg((alpha)) = psi(alpha) sign_M(alpha)
    return psi(proxy) * sign_M(alpha) * leg(b);
  }

  /// chi(a) = N(g) uleg(a / g^2) when gcd(a, delta) = g^2 with g | f_delta, else 0.
  Integer chi(const Ideal& a) const {
    const Ideal G = a + delta_ideal_;
    Ideal g = Ideal::unit(K_);
    for (const auto& [P, e] : factor(G)) {
      if (e % 2) return 0;
      g = g * P.ideal.pow(e / 2);
    }
    if (!g.divides(f_delta())) return 0;
    return g.norm_int() * uleg(a / (g * g));
  }

  /// chi(a) assembled from the divisor-sum expansion over t | f_delta and d | f_delta / t.
  Integer chi_divisor_sum(const Ideal& a) const {
    Integer total = 0;
    for (const auto& t : divisors(f_delta())) {
      const int mu = mobius(t);
      if (mu == 0) continue;
      const int ut = uleg(t);
      if (ut == 0) continue;
      for (const auto& d : divisors(f_delta() / t)) {
        const Ideal td2 = t * d * d;
        if (!td2.divides(a)) continue;
        total += mu * ut * d.norm_int() * uleg(a / td2);
      }
    }
    return total;
  }

  /// Exhaustive residue verification over O/(delta): psi is constant on coprime classes,
  /// and the minimal modulus it factors through.
  ConductorCheck conductor_of_psi(std::size_t bound = kDefaultEnumerationBound) const {
    ConductorCheck out{delta_ideal_, true, 0, {}, true};
    const Ideal& D = delta_ideal_;
    std::vector<std::pair<IntElem, int>> table;
    const IntElem d = info_.delta;
    const IntElem dw = K_.mul(d, IntElem{0, 1});
    for (IntElem r : D.residues(bound)) {
      if (r.is_zero()) r = IntElem{1, 0};  // only when (delta) is the unit ideal
      if (!coprime_to_delta(r)) continue;
      const int v = psi_lift(r);
      for (const IntElem& lift : {K_.add(r, d), K_.sub(r, d), K_.add(r, dw)})
        if (!lift.is_zero() && psi_lift(lift) != v) out.well_defined = false;
      table.emplace_back(r, v);
      ++out.residues_checked;
    }
    auto factors_through = [&](const Ideal& m, std::optional<std::pair<IntElem, IntElem>>* witness) {
      std::map<IntElem, std::pair<IntElem, int>> seen;
      for (const auto& [r, v] : table) {
        auto key = m.reduce(r);
        auto it = seen.find(key);
        if (it == seen.end()) {
          seen.emplace(key, std::make_pair(r, v));
        } else if (it->second.second != v) {
          if (witness) *witness = std::make_pair(it->second.first, r);
          return false;
        }
      }
      return true;
    };
    Ideal cond = D;
    for (const auto& m : divisors(D))
      if (factors_through(m, nullptr)) cond = cond + m;
    if (!factors_through(cond, nullptr)) throw std::logic_error("psi does not factor through the gcd of its moduli");
    out.conductor = cond;
    for (const auto& [P, e] : factor(cond)) {
      (void)e;
      std::optional<std::pair<IntElem, IntElem>> w;
      if (factors_through(cond / P.ideal, &w) || !w) {
        out.primitive = false;
        continue;
      }
      out.witnesses.emplace_back(P, *w);
    }
    return out;
  }

 private:
  struct Memo {
    std::mutex mu;
    std::map<Ideal, int> leg;
    std::vector<PrimeIdeal> aux;
    bool aux_ready = false;
  };

  int psi_lift(const IntElem& a) const { return psi(a); }

  int compute_leg_prime(const PrimeIdeal& P) const {
    if (P.ideal.contains(info_.delta)) throw std::domain_error("leg_prime: prime divides delta");
    const IntElem& d = info_.delta;
    if (P.p == 2) {
      const bool enumerated = sqrt_mod_4a(K_, d, P.ideal).has_value();
      const bool local = is_square_mod_local(K_, d, P, 2 * P.e() + 1);
      if (enumerated != local) throw std::logic_error("dyadic leg: enumeration and local analysis disagree");
      return enumerated ? 1 : -1;
    }
    if (K_.is_rational()) return kronecker(d.x, P.p);
    if (P.residue_degree == 1) return kronecker(d.x + d.y * P.root, P.p);
    // F_{p^2}: z is a square iff its norm to F_p is
    return kronecker(K_.norm(d), P.p);
  }

  const std::vector<PrimeIdeal>& aux_primes() const {
    std::lock_guard<std::mutex> lock(memo_->mu);
    if (!memo_->aux_ready) {
      memo_->aux = primes_by_norm(K_, kAuxiliaryNormBound);
      memo_->aux_ready = true;
    }
    return memo_->aux;
  }

  /// b = alpha mod conductor with b coprime to delta.
  IntElem coprime_proxy(const IntElem& alpha) const {
    if (coprime_to_delta(alpha)) return alpha;
    const auto basis = conductor().numerator_basis();
    const IntElem b0 = basis[0], b1 = basis.size() > 1 ? basis[1] : IntElem{0, 0};
    for (long r = 1; r < 64; ++r)
      for (long i = -r; i <= r; ++i)
        for (long j = -r; j <= r; ++j) {
          if (std::max(std::labs(i), std::labs(j)) != r) continue;
          if (K_.is_rational() && j != 0) continue;
          IntElem z = K_.add(alpha, K_.add(K_.scale(b0, Integer(i)), K_.scale(b1, Integer(j))));
          if (!z.is_zero() && coprime_to_delta(z)) return z;
        }
    throw std::logic_error("no coprime proxy found");
  }

  BaseField K_;
  DiscriminantInfo info_;
  Ideal delta_ideal_;
  std::vector<int> M_;
  std::vector<PrimeIdeal> delta_primes_;
  std::shared_ptr<Memo> memo_;
};

/// sum over ideals of norm n of chi, for n = 1..N (index 0 unused).
inline std::vector<Integer> chi_norm_sums(const CharacterContext& ctx, unsigned long N) {
  std::vector<Integer> out(N + 1, 0);
  for (unsigned long n = 1; n <= N; ++n)
    for (const auto& a : ideals_of_norm(ctx.field(), Integer(n))) out[n] += ctx.chi(a);
  return out;
}

}  // namespace relquad
