#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relquad/relquad.hpp"

using json = nlohmann::ordered_json;
using namespace relquad;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::string field = "0";
  std::string delta;
  std::string ideal;
  std::string format = "json";
  std::string sign = "neg";
  std::string fixture;
  std::string suite;
  unsigned long bound = 0;
  unsigned long delta_bound = 0;
  long hurwitz_delta = 0;
  unsigned long upto = 0;
  unsigned jobs = 1;
  int precision = 0;
};

BaseField field_of(const Args& a) { return BaseField::parse_descriptor(a.field); }

IntElem delta_of(const BaseField& K, const Args& a) {
  if (a.delta.empty()) throw UsageError("--delta is required");
  return K.parse_int(a.delta);
}

Ideal ideal_of(const BaseField& K, const Args& a) {
  if (a.ideal.empty()) throw UsageError("--ideal is required");
  Ideal I = Ideal::parse(K, a.ideal);
  if (!I.is_integral()) throw UsageError("--ideal must be integral");
  return I;
}

json ideal_json(const Ideal& I) { return {{"hnf", I.hnf_text()}, {"pretty", display(I)}}; }

std::string elem_text(const BaseField& K, const IntElem& z) { return pretty_elem(K, to_field(z)); }

void check_format(const Args& a) {
  if (a.format != "json" && a.format != "tsv") throw UsageError("--format must be tsv or json");
}

int cmd_fdelta(const Args& a) {
  const BaseField K = field_of(a);
  const IntElem d = delta_of(K, a);
  const auto info = conductor_ideal(K, d);
  const auto fd = fundamental_discriminant_data(K, d);
  json out{{"field", K.descriptor()},
           {"norm", K.norm(d).get_str()},
           {"delta", elem_text(K, d)},
           {"f_delta_hnf", info.f_delta.hnf_text()},
           {"f_delta_pretty", display(info.f_delta)},
           {"rel_disc_hnf", info.rel_disc.hnf_text()},
           {"rel_disc_pretty", display(info.rel_disc)}};
  if (fd.principal_rep) out["principal_rep"] = elem_text(K, *fd.principal_rep);
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_char(const Args& a) {
  const BaseField K = field_of(a);
  const CharacterContext ctx(K, delta_of(K, a));
  const Ideal I = ideal_of(K, a);
  json out{{"ideal", display(I)}};
  out["leg"] = ctx.coprime_to_delta(I) ? json(ctx.leg(I)) : json(nullptr);
  out["uleg"] = ctx.uleg(I);
  out["chi"] = ctx.chi(I).get_str();
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_conductor(const Args& a) {
  const BaseField K = field_of(a);
  const CharacterContext ctx(K, delta_of(K, a));
  const auto check = ctx.conductor_of_psi();
  json witnesses = json::array();
  for (const auto& [P, w] : check.witnesses)
    witnesses.push_back({{"prime", display(P.ideal)}, {"a", elem_text(K, w.first)}, {"b", elem_text(K, w.second)}});
  json out = ideal_json(check.conductor);
  out["expected"] = ideal_json(ctx.conductor());
  out["well_defined"] = check.well_defined;
  out["primitive"] = check.primitive;
  out["residues_checked"] = check.residues_checked;
  out["witnesses"] = witnesses;
  std::cout << out.dump() << "\n";
  return check.well_defined && check.primitive && check.conductor == ctx.conductor() ? 0 : 1;
}

int cmd_count(const Args& a) {
  const BaseField K = field_of(a);
  const CharacterContext ctx(K, delta_of(K, a));
  const Ideal I = ideal_of(K, a);
  const Integer brute = count_roots(K, ctx.delta(), I);
  const Integer formula = count_roots_formula(ctx, I);
  std::cout << json{{"ideal", display(I)}, {"brute", brute.get_str()}, {"formula", formula.get_str()}}.dump() << "\n";
  return brute == formula ? 0 : 1;
}

int cmd_zeta(const Args& a) {
  check_format(a);
  const BaseField K = field_of(a);
  const CharacterContext ctx(K, delta_of(K, a));
  const unsigned long N = a.bound ? a.bound : 50;
  const auto brute = zeta_delta_coeffs(K, ctx.delta(), N);
  const auto conv = zeta_delta_convolution(ctx, N);
  bool ok = true;
  if (a.format == "tsv") std::cout << "n\tcoeff\tconvolution_coeff\n";
  for (unsigned long n = 1; n <= N; ++n) {
    ok = ok && brute[n] == conv[n];
    if (a.format == "tsv")
      std::cout << n << "\t" << brute[n] << "\t" << conv[n] << "\n";
    else
      std::cout << json{{"n", n}, {"coeff", brute[n].get_str()}, {"convolution_coeff", conv[n].get_str()}}.dump()
                << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_hurwitz(const Args& a) {
  check_format(a);
  std::vector<long> deltas;
  if (a.hurwitz_delta != 0) deltas.push_back(a.hurwitz_delta);
  for (long D = -static_cast<long>(a.upto); D < 0; ++D)
    if (mod(Integer(D), 4) <= 1) deltas.push_back(D);
  if (deltas.empty()) throw UsageError("give --delta or --upto");
  const auto rows = parallel_map(deltas, a.jobs, [](long D) { return hurwitz(Integer(D)); });
  bool ok = true;
  if (a.format == "tsv") std::cout << "delta\tH_formula\tH_oracle\th\tw\tf\n";
  for (const auto& r : rows) {
    ok = ok && r.H_formula == r.H_oracle;
    if (a.format == "tsv")
      std::cout << r.delta << "\t" << r.H_formula << "\t" << r.H_oracle << "\t" << r.h << "\t" << r.w << "\t" << r.f
                << "\n";
    else
      std::cout << json{{"delta", r.delta.get_si()}, {"H_formula", r.H_formula.get_str()},
                        {"H_oracle", r.H_oracle.get_str()}, {"h", r.h.get_str()}, {"w", r.w}, {"f", r.f.get_str()}}
                       .dump()
                << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_local_duality(const Args& a) {
  const auto F = dyadic::LocalField::parse(a.field == "0" ? "q2" : a.field, a.precision);
  const auto r = dyadic::analyze(F);
  json out{{"field", r.field},
           {"precision", r.precision},
           {"e", r.e},
           {"f", r.f},
           {"dims", r.dims},
           {"gram", r.gram},
           {"duality_ok", r.duality},
           {"checks",
            {{"bilinear", r.bilinear},
             {"symmetric", r.symmetric},
             {"nondegenerate", r.nondegenerate},
             {"filtration", r.filtration},
             {"even_pairs_trivial", r.even_pairs_trivial},
             {"local_square_theorem", r.local_square_theorem},
             {"units_mod_squares", r.units_mod_squares},
             {"trace_criterion", r.trace_criterion}}}};
  std::cout << out.dump() << "\n";
  return r.ok() ? 0 : 1;
}

json row_json(const BaseField& K, const TableRow& r) {
  json j{{"norm", r.norm.get_str()},
         {"delta", elem_text(K, r.delta)},
         {"f_delta", display(r.f_delta)},
         {"f_delta_hnf", r.f_delta.hnf_text()},
         {"rel_disc", display(r.rel_disc)},
         {"rel_disc_hnf", r.rel_disc.hnf_text()}};
  if (r.H) j["H"] = r.H->get_str();
  return j;
}

int cmd_table(const Args& a) {
  check_format(a);
  const BaseField K = field_of(a);
  SignFilter sign = SignFilter::totally_negative;
  if (a.sign == "any") sign = SignFilter::any;
  else if (a.sign == "pos") sign = SignFilter::totally_positive;
  else if (a.sign != "neg") throw UsageError("--sign must be neg, pos or any");
  const auto rows = table_rows(K, Integer(a.bound ? a.bound : 500), sign);
  if (a.format == "tsv") std::cout << "norm\tdelta\tf_delta\trel_disc\tH\n";
  for (const auto& r : rows) {
    if (a.format == "tsv")
      std::cout << r.norm << "\t" << elem_text(K, r.delta) << "\t" << display(r.f_delta) << "\t" << display(r.rel_disc)
                << "\t" << (r.H ? r.H->get_str() : "") << "\n";
    else
      std::cout << row_json(K, r).dump() << "\n";
  }
  if (a.fixture.empty()) return 0;
  const auto cmp = compare_table(K, rows, load_table_fixture(K, a.fixture));
  std::cerr << "fixture: " << cmp.matched << "/" << cmp.expected << " rows matched, " << cmp.computed << " computed\n";
  for (const auto& p : cmp.problems) std::cerr << "  " << p << "\n";
  return cmp.ok() ? 0 : 1;
}

int cmd_unit_discs(const Args& a) {
  const BaseField K = field_of(a);
  const auto u = unit_discriminants(K);
  json classes = json::array();
  for (const auto& c : u.classes)
    classes.push_back({{"delta", elem_text(K, c.delta)},
                       {"f_delta", display(c.f_delta)},
                       {"totally_positive", K.is_rational() ? c.delta.x > 0 : K.is_totally_positive(c.delta)}});
  std::cout << json{{"field", K.descriptor()}, {"disc_K", K.disc().get_str()}, {"search_bound", u.bound.get_str()},
                    {"count", u.classes.size()}, {"classes", classes}}
                   .dump()
            << "\n";
  return 0;
}

json report_json(const SuiteReport& r) {
  return {{"suite", r.suite}, {"field", r.field},       {"cases", r.cases},
          {"failures", r.failures}, {"ok", r.ok()}, {"messages", r.messages}};
}

int cmd_verify(const Args& a, bool field_given) {
  static const std::vector<std::string> suites{"counting", "character", "conductor", "identity",
                                               "dyadic",   "hurwitz",   "all"};
  if (std::find(suites.begin(), suites.end(), a.suite) == suites.end()) throw UsageError("unknown suite " + a.suite);
  VerifyOptions opt;
  opt.jobs = a.jobs;
  opt.delta_bound = a.delta_bound;
  opt.bound = a.bound;
  std::vector<SuiteReport> reports;
  const bool all = a.suite == "all";
  std::vector<BaseField> fields = field_given && a.suite != "dyadic" ? std::vector<BaseField>{field_of(a)} : test_fields();
  for (const auto& K : fields) {
    if (all || a.suite == "counting") reports.push_back(verify_counting(K, opt));
    if (all || a.suite == "character") {
      VerifyOptions o = opt;
      if (!o.delta_bound) o.delta_bound = o.bound;
      o.bound = 0;
      reports.push_back(verify_character(K, o));
    }
    if (all || a.suite == "conductor") {
      VerifyOptions o = opt;
      if (!o.delta_bound) o.delta_bound = o.bound;
      o.bound = 0;
      reports.push_back(verify_conductor(K, o));
    }
    if (all || a.suite == "identity") reports.push_back(verify_identity(K, opt));
  }
  if (all || a.suite == "identity")
    if (!field_given || field_of(a).is_rational()) reports.push_back(verify_decomposition(100, 10000, a.jobs));
  if (all || a.suite == "dyadic") {
    auto locals = field_given && a.suite == "dyadic" ? std::vector<dyadic::LocalField>{dyadic::LocalField::parse(a.field)}
                                                      : dyadic::LocalField::all();
    if (a.precision)
      for (auto& F : locals) F = F.with_precision(a.precision);
    reports.push_back(verify_dyadic(locals, a.jobs));
  }
  if (all || a.suite == "hurwitz") reports.push_back(verify_hurwitz(a.suite == "hurwitz" && a.bound ? a.bound : 2000, a.jobs));
  bool ok = true;
  json arr = json::array();
  for (const auto& r : reports) {
    ok = ok && r.ok();
    arr.push_back(report_json(r));
  }
  std::cout << json{{"ok", ok}, {"reports", arr}}.dump() << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative quadratic extensions: conductors, characters, counting, Hurwitz numbers, dyadic duality"};
  app.require_subcommand(1);
  Args a;

  auto field_opt = [&](CLI::App* s, const std::string& help = "base field: 0 for Q, or d for Q(sqrt d)") {
    return s->add_option("--field", a.field, help);
  };
  auto fmt_opt = [&](CLI::App* s) { s->add_option("--format", a.format, "tsv or json")->check(CLI::IsMember({"tsv", "json"})); };

  auto* fdelta = app.add_subcommand("fdelta", "conductor ideal and relative discriminant of delta");
  field_opt(fdelta);
  fdelta->add_option("--delta", a.delta, "element x+y*w")->required();

  auto* chr = app.add_subcommand("char", "leg, primitive character and chi on an ideal");
  field_opt(chr);
  chr->add_option("--delta", a.delta)->required();
  chr->add_option("--ideal", a.ideal, "(g1, g2) or [[a,b],[0,c]]/1")->required();

  auto* cond = app.add_subcommand("conductor", "conductor of psi by exhaustive residue check");
  field_opt(cond);
  cond->add_option("--delta", a.delta)->required();

  auto* count = app.add_subcommand("count", "square roots of delta mod 4a, brute force and formula");
  field_opt(count);
  count->add_option("--delta", a.delta)->required();
  count->add_option("--ideal", a.ideal)->required();

  auto* zeta = app.add_subcommand("zeta-coeffs", "coefficients of zeta(delta, s)");
  field_opt(zeta);
  zeta->add_option("--delta", a.delta)->required();
  zeta->add_option("--bound", a.bound, "largest n");
  a.format = "json";
  fmt_opt(zeta);

  auto* hur = app.add_subcommand("hurwitz", "Hurwitz class numbers over Q");
  hur->add_option("--delta", a.hurwitz_delta, "negative discriminant");
  hur->add_option("--upto", a.upto, "all discriminants -N <= delta < 0");
  hur->add_option("--jobs", a.jobs);
  fmt_opt(hur);

  auto* loc = app.add_subcommand("local-duality", "Hilbert pairing and filtration of a dyadic field");
  field_opt(loc, "q2, unram, or ram:c with c in {-1,-5,2,-2,10,-10}");
  loc->add_option("--precision", a.precision, "pi-adic digits");

  auto* tab = app.add_subcommand("table", "discriminant classes with |N(delta)| <= bound");
  field_opt(tab);
  tab->add_option("--bound", a.bound, "norm bound (default 500)");
  tab->add_option("--sign", a.sign, "neg (totally negative), pos, or any");
  tab->add_option("--fixture", a.fixture, "compare with a transcribed table");
  fmt_opt(tab);

  auto* ud = app.add_subcommand("unit-discs", "discriminants with (delta) = f^2, modulo squares");
  field_opt(ud);

  auto* ver = app.add_subcommand("verify", "invariant sweeps");
  ver->add_option("suite", a.suite, "counting, character, conductor, identity, dyadic, hurwitz, all")->required();
  auto* ver_field = field_opt(ver);
  ver->add_option("--bound", a.bound, "ideal norm bound, or discriminant bound for character/conductor/hurwitz");
  ver->add_option("--delta-bound", a.delta_bound, "discriminant norm bound for counting/identity");
  ver->add_option("--jobs", a.jobs, "worker threads");
  ver->add_option("--precision", a.precision, "dyadic precision");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  if (a.jobs == 0) a.jobs = 1;

  try {
    if (*fdelta) return cmd_fdelta(a);
    if (*chr) return cmd_char(a);
    if (*cond) return cmd_conductor(a);
    if (*count) return cmd_count(a);
    if (*zeta) return cmd_zeta(a);
    if (*hur) return cmd_hurwitz(a);
    if (*loc) return cmd_local_duality(a);
    if (*tab) return cmd_table(a);
    if (*ud) return cmd_unit_discs(a);
    if (*ver) return cmd_verify(a, ver_field->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
