#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "relquad/counting.hpp"
#include "relquad/dyadic.hpp"
#include "relquad/hurwitz.hpp"
#include "relquad/parallel.hpp"

namespace relquad {

struct SuiteReport {
  std::string suite;
  std::string field;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> messages;
  double seconds = 0;

  bool ok() const { return failures == 0 && cases > 0; }

  void fail(std::string msg) {
    ++failures;
    if (messages.size() < 20) messages.push_back(std::move(msg));
  }
  void merge(const SuiteReport& other) {
    cases += other.cases;
    for (const auto& m : other.messages)
      if (messages.size() < 20) messages.push_back(m);
    failures += other.failures;
  }
};

struct VerifyOptions {
  unsigned jobs = 1;
  /// Discriminant norm bound; 0 picks the suite default.
  unsigned long delta_bound = 0;
  /// Ideal norm / coefficient bound; 0 picks the suite default.
  unsigned long bound = 0;
};

namespace detail {

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::string field_name(const BaseField& K) { return K.descriptor(); }

inline std::string show(const BaseField& K, const IntElem& z) { return pretty_elem(K, to_field(z)); }

template <class F>
SuiteReport run_per_delta(const std::string& suite, const BaseField& K, unsigned long delta_bound, unsigned jobs,
                          F&& per_delta) {
  Timer timer;
  std::vector<IntElem> deltas;
  for (const auto& info : enumerate_discriminant_classes(K, Integer(delta_bound), SignFilter::any))
    deltas.push_back(info.delta);
  auto parts = parallel_map(deltas, jobs, [&](const IntElem& delta) {
    SuiteReport r;
    try {
      per_delta(delta, r);
    } catch (const std::exception& e) {
      r.fail(show(K, delta) + ": exception: " + e.what());
    }
    return r;
  });
  SuiteReport out;
  out.suite = suite;
  out.field = field_name(K);
  for (const auto& p : parts) out.merge(p);
  out.seconds = timer.seconds();
  return out;
}

}  // namespace detail

/// Brute-force root counts against the divisor sum of chi (and the local product).
inline SuiteReport verify_counting(const BaseField& K, const VerifyOptions& opt = {}) {
  const unsigned long dbound = opt.delta_bound ? opt.delta_bound : 50;
  const unsigned long abound = opt.bound ? opt.bound : 200;
  std::vector<Ideal> ideals;
  for (unsigned long n = 1; n <= abound; ++n)
    for (auto& a : ideals_of_norm(K, Integer(n))) ideals.push_back(a);
  return detail::run_per_delta("counting", K, dbound, opt.jobs, [&](const IntElem& delta, SuiteReport& r) {
    const CharacterContext ctx(K, delta);
    for (const auto& a : ideals) {
      ++r.cases;
      const Integer brute = count_roots(K, delta, a);
      const Integer formula = count_roots_formula(ctx, a);
      if (brute != formula)
        r.fail(detail::show(K, delta) + " " + a.pretty() + ": brute " + brute.get_str() + " formula " +
               formula.get_str());
    }
  });
}

/// psi well defined mod (delta), its conductor equals delta / f^2, primitivity witnesses.
inline SuiteReport verify_character(const BaseField& K, const VerifyOptions& opt = {}) {
  const unsigned long dbound = opt.delta_bound ? opt.delta_bound : 300;
  return detail::run_per_delta("character", K, dbound, opt.jobs, [&](const IntElem& delta, SuiteReport& r) {
    const CharacterContext ctx(K, delta);
    const auto check = ctx.conductor_of_psi();
    ++r.cases;
    const std::string tag = detail::show(K, delta);
    if (!check.well_defined) r.fail(tag + ": psi is not constant on residue classes mod delta");
    if (!(check.conductor == ctx.conductor()))
      r.fail(tag + ": conductor " + check.conductor.pretty() + " expected " + ctx.conductor().pretty());
    if (!check.primitive) r.fail(tag + ": missing primitivity witness");
    for (const auto& [P, w] : check.witnesses) {
      const Ideal m = check.conductor / P.ideal;
      if (!m.contains(K.sub(w.first, w.second)) || ctx.psi(w.first) == ctx.psi(w.second))
        r.fail(tag + ": invalid witness at " + P.ideal.pretty());
    }
  });
}

/// Structural conductor identities.
inline SuiteReport verify_conductor(const BaseField& K, const VerifyOptions& opt = {}) {
  const unsigned long dbound = opt.delta_bound ? opt.delta_bound : 300;
  std::vector<IntElem> scalars{{2, 0}, {3, 0}};
  if (!K.is_rational()) scalars.push_back({1, 1});
  return detail::run_per_delta("conductor", K, dbound, opt.jobs, [&](const IntElem& delta, SuiteReport& r) {
    const std::string tag = detail::show(K, delta);
    const auto info = conductor_ideal(K, delta);
    const Ideal D = Ideal::principal(K, delta);
    ++r.cases;
    if (!(info.rel_disc * info.f_delta * info.f_delta == D)) r.fail(tag + ": rel_disc * f^2 != (delta)");
    ++r.cases;
    const auto gen = rel_disc_general(K, delta);
    if (!(gen.rel_disc_general == info.rel_disc)) r.fail(tag + ": general discriminant formula differs");
    ++r.cases;
    if (is_unit_discriminant(K, delta) != info.rel_disc.is_unit()) r.fail(tag + ": unit discriminant flag");
    for (const auto& a : scalars) {
      ++r.cases;
      const auto scaled = conductor_ideal(K, K.mul(delta, K.sqr(a)));
      if (!(scaled.f_delta == info.f_delta * Ideal::principal(K, a)))
        r.fail(tag + ": f of a^2 delta != a f for a = " + detail::show(K, a));
    }
    ++r.cases;
    const auto fd = fundamental_discriminant_data(K, delta);
    if (fd.principal_rep.has_value() != is_principal(info.f_delta).has_value())
      r.fail(tag + ": principal representative exists iff f is principal");
    if (K.is_rational()) {
      // over Q: discriminants are exactly the values tr^2 - 4N, i.e. 0, 1 mod 4
      ++r.cases;
      if (mod(delta.x, 4) > 1) r.fail(tag + ": not 0, 1 mod 4");
    }
  });
}

/// Divisor-sum identity for chi, the Euler-factor convolution identity, and order-ideal counts.
inline SuiteReport verify_identity(const BaseField& K, const VerifyOptions& opt = {}) {
  const unsigned long dbound = opt.delta_bound ? opt.delta_bound : 30;
  const unsigned long N = opt.bound ? opt.bound : 200;
  std::vector<Ideal> ideals;
  for (unsigned long n = 1; n <= N; ++n)
    for (auto& a : ideals_of_norm(K, Integer(n))) ideals.push_back(a);
  return detail::run_per_delta("identity", K, dbound, opt.jobs, [&](const IntElem& delta, SuiteReport& r) {
    const std::string tag = detail::show(K, delta);
    const CharacterContext ctx(K, delta);
    for (const auto& a : ideals) {
      ++r.cases;
      if (ctx.chi(a) != ctx.chi_divisor_sum(a)) r.fail(tag + ": chi divisor sum differs at " + a.pretty());
    }
    const auto zd = zeta_delta_coeffs(K, delta, N);
    const auto lhs = zeta_K_times_L(ctx, N);
    const auto rhs = zeta_K2_times_zeta_delta(K, zd);
    const auto conv = zeta_delta_convolution(ctx, N);
    for (unsigned long n = 1; n <= N; ++n) {
      r.cases += 2;
      if (lhs[n] != rhs[n]) r.fail(tag + ": zeta_K L != zeta_K(2s) zeta_delta at n = " + std::to_string(n));
      if (conv[n] != zd[n]) r.fail(tag + ": zeta_delta convolution differs at n = " + std::to_string(n));
      ++r.cases;
      const Integer pairs = order_ideal_counts(K, delta, n);
      if (pairs != rhs[n]) r.fail(tag + ": pair count differs at n = " + std::to_string(n));
      if (K.is_rational()) {
        ++r.cases;
        if (order_ideals_rational(delta.x, n) != pairs)
          r.fail(tag + ": ideals of Z[w_delta] differ at n = " + std::to_string(n));
      }
    }
  });
}

/// K = Q: ideal counts of Q(sqrt D0) (brute-force sublattices of the maximal order, multiplied
/// over prime powers) equal sum_{d | n} chi_{D0}(d), for fundamental D0 with |D0| <= dmax.
inline SuiteReport verify_decomposition(unsigned long dmax = 100, unsigned long nmax = 10000, unsigned jobs = 1) {
  detail::Timer timer;
  const BaseField Q = BaseField::rational();
  std::vector<long> fundamentals;
  for (long D = -static_cast<long>(dmax); D <= static_cast<long>(dmax); ++D) {
    if (D == 0 || D == 1 || mod(Integer(D), 4) > 1) continue;
    if (conductor_ideal(Q, IntElem{D, 0}).f_delta.is_unit()) fundamentals.push_back(D);
  }
  auto parts = parallel_map(fundamentals, jobs, [&](long D) {
    SuiteReport r;
    const CharacterContext ctx(Q, IntElem{D, 0});
    std::vector<long> chi(nmax + 1, 0), conv(nmax + 1, 0), ideals(nmax + 1, 1);
    for (unsigned long m = 1; m <= nmax; ++m) chi[m] = ctx.chi(Ideal::principal(Q, Integer(m))).get_si();
    for (unsigned long d = 1; d <= nmax; ++d)
      if (chi[d])
        for (unsigned long m = d; m <= nmax; m += d) conv[m] += chi[d];
    for (unsigned long p : primes_up_to(nmax))
      for (unsigned long q = p; q <= nmax; q *= p) {
        const long local = order_ideals_rational_small(D, static_cast<long>(q));
        // n = q * m with p not dividing m
        for (unsigned long m = 1; m * q <= nmax; ++m)
          if (m % p) ideals[m * q] *= local;
      }
    for (unsigned long n = 1; n <= nmax; ++n) {
      ++r.cases;
      if (ideals[n] != conv[n])
        r.fail(std::to_string(D) + ": n = " + std::to_string(n) + " ideals " + std::to_string(ideals[n]) +
               " vs " + std::to_string(conv[n]));
    }
    return r;
  });
  SuiteReport out;
  out.suite = "decomposition";
  out.field = "Q";
  for (const auto& p : parts) out.merge(p);
  out.seconds = timer.seconds();
  return out;
}

inline SuiteReport verify_hurwitz(unsigned long bound = 2000, unsigned jobs = 1) {
  detail::Timer timer;
  std::vector<long> deltas;
  for (long D = -static_cast<long>(bound); D < 0; ++D)
    if (mod(Integer(D), 4) <= 1) deltas.push_back(D);
  auto parts = parallel_map(deltas, jobs, [](long D) {
    SuiteReport r;
    const auto h = hurwitz(Integer(D));
    ++r.cases;
    if (h.H_formula != h.H_oracle)
      r.fail(std::to_string(D) + ": formula " + h.H_formula.get_str() + " oracle " + h.H_oracle.get_str());
    ++r.cases;
    if (!divides(h.H_formula.get_den(), Integer(6))) r.fail(std::to_string(D) + ": denominator does not divide 6");
    return r;
  });
  SuiteReport out;
  out.suite = "hurwitz";
  out.field = "Q";
  for (const auto& p : parts) out.merge(p);
  out.seconds = timer.seconds();
  return out;
}

/// Dyadic duality checks for each local field, repeated at precision N + 4 with identical answers.
inline SuiteReport verify_dyadic(const std::vector<dyadic::LocalField>& fields, unsigned jobs = 1) {
  detail::Timer timer;
  auto parts = parallel_map(fields, jobs, [](const dyadic::LocalField& F) {
    SuiteReport r;
    const auto a = dyadic::analyze(F);
    const auto b = dyadic::analyze(F.with_precision(F.precision() + 4));
    const std::size_t pairs = std::size_t{1} << (2 * a.dim);
    r.cases += pairs;
    if (!a.ok()) r.fail(F.name() + ": duality checks failed");
    if (a.gram != b.gram || a.dims != b.dims || a.ok() != b.ok())
      r.fail(F.name() + ": answers changed at precision " + std::to_string(b.precision));
    return r;
  });
  SuiteReport out;
  out.suite = "dyadic";
  out.field = fields.size() == 1 ? fields[0].name() : "all";
  for (const auto& p : parts) out.merge(p);
  out.seconds = timer.seconds();
  return out;
}

/// The fields used by the default sweeps.
inline std::vector<BaseField> test_fields() {
  return {BaseField::rational(), BaseField::quadratic(Integer(5)), BaseField::quadratic(Integer(10)),
          BaseField::quadratic(Integer(-15))};
}

}  // namespace relquad
