#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relquad/hurwitz.hpp"

namespace relquad {

struct TableRow {
  Integer norm;
  IntElem delta;
  Ideal f_delta;
  Ideal rel_disc;
  std::optional<Rational> H;  // K = Q, delta < 0 only
};

/// Delta and delta' differ by the square of a unit.
inline bool same_unit_square_class(const BaseField& K, const IntElem& a, const IntElem& b) {
  if (a == b) return true;
  const FieldElem q = K.div(to_field(b), to_field(a));
  if (!K.is_integral(q)) return false;
  const IntElem u = to_int(q);
  return K.is_unit(u) && K.is_unit_square(u);
}

/// Delta and delta' differ by a square of K.
inline bool same_square_class(const BaseField& K, const IntElem& a, const IntElem& b) {
  return K.is_square(to_field(K.mul(a, b)));
}

/// Discriminant classes with |N(delta)| <= bound, sorted by (norm, delta text).
inline std::vector<TableRow> table_rows(const BaseField& K, const Integer& bound, SignFilter sign) {
  std::vector<TableRow> rows;
  for (auto& info : enumerate_discriminant_classes(K, bound, sign)) {
    TableRow r{abs(K.norm(info.delta)), info.delta, info.f_delta, info.rel_disc, std::nullopt};
    if (K.is_rational() && info.delta.x < 0) r.H = hurwitz_H(info.delta.x);
    rows.push_back(std::move(r));
  }
  std::stable_sort(rows.begin(), rows.end(), [&](const TableRow& a, const TableRow& b) {
    if (a.norm != b.norm) return a.norm < b.norm;
    return K.format(to_field(a.delta)) < K.format(to_field(b.delta));
  });
  return rows;
}

struct FixtureRow {
  Integer norm;
  IntElem delta;
  Ideal f_delta;
  std::string H;  // displayed only
};

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, '\t')) out.push_back(cur);
  return out;
}

/// Columns: norm, delta, f_delta, H (header row first).
inline std::vector<FixtureRow> load_table_fixture(const BaseField& K, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::vector<FixtureRow> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split_tabs(line);
    if (c.size() < 3) throw std::runtime_error("bad fixture line: " + line);
    out.push_back({Integer(c[0]), K.parse_int(c[1]), Ideal::parse(K, c[2]), c.size() > 3 ? c[3] : ""});
  }
  return out;
}

struct TableComparison {
  std::size_t computed = 0;
  std::size_t expected = 0;
  std::size_t matched = 0;
  std::vector<std::string> problems;
  bool ok() const { return problems.empty() && computed == expected && matched == expected; }
};

/// Multiset comparison on (norm, delta up to unit squares, f_delta as an ideal).
inline TableComparison compare_table(const BaseField& K, const std::vector<TableRow>& rows,
                                     const std::vector<FixtureRow>& fixture) {
  TableComparison cmp;
  cmp.computed = rows.size();
  cmp.expected = fixture.size();
  std::vector<bool> used(rows.size(), false);
  for (const auto& f : fixture) {
    bool hit = false;
    for (std::size_t i = 0; i < rows.size() && !hit; ++i) {
      if (used[i] || rows[i].norm != f.norm) continue;
      if (!same_unit_square_class(K, rows[i].delta, f.delta)) continue;
      if (!(rows[i].f_delta == f.f_delta)) {
        cmp.problems.push_back("conductor differs for " + K.format(to_field(f.delta)) + ": " + rows[i].f_delta.pretty() +
                               " vs " + f.f_delta.pretty());
        used[i] = true;
        hit = true;
        break;
      }
      used[i] = true;
      hit = true;
      ++cmp.matched;
    }
    if (!hit) cmp.problems.push_back("fixture row not found: " + f.norm.get_str() + " " + K.format(to_field(f.delta)));
  }
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!used[i])
      cmp.problems.push_back("extra computed row: " + rows[i].norm.get_str() + " " + K.format(to_field(rows[i].delta)));
  return cmp;
}

struct UnitDiscFixture {
  Integer disc_K;
  Integer d;
  std::vector<IntElem> discriminants;
};

/// Columns: disc_K, d, comma-separated discriminants in the basis {1, w}.
inline std::vector<UnitDiscFixture> load_unit_disc_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path);
  std::vector<UnitDiscFixture> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split_tabs(line);
    if (c.size() != 3) throw std::runtime_error("bad fixture line: " + line);
    UnitDiscFixture u{Integer(c[0]), Integer(c[1]), {}};
    const BaseField K = BaseField::quadratic(u.d);
    std::istringstream parts(c[2]);
    std::string e;
    while (std::getline(parts, e, ',')) u.discriminants.push_back(K.parse_int(e));
    out.push_back(std::move(u));
  }
  return out;
}

/// Both lists name the same classes modulo squares of K, each exactly once.
inline bool same_square_class_sets(const BaseField& K, const std::vector<IntElem>& a, const std::vector<IntElem>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    int hits = 0;
    for (const auto& y : b) hits += same_square_class(K, x, y);
    if (hits != 1) return false;
  }
  return true;
}

}  // namespace relquad
