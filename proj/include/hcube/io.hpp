#pragma once

// JSON and CSV encodings shared by the library and the command-line tool.
//
//   function   {"n": n, "m": m, "values": [[...m numbers] x 2^n]}
//   spectrum   {"n": n, "m": m, "coefficients": [[...] x 2^n]}
//   family     {"n": n, "m": m, "family": [values_1, ..., values_n]}
//   product    {"n": n, "m": m, "product_values": [[...] x 4^n]}, row eps | (delta << n)
//   vectors    {"m": m, "vectors": [[...m numbers] x k]}
//   filtration {"kind": "dyadic", "n": n} or
//              {"kind": "tree", "levels": [[cell labels] x (n+1)], "probabilities": [...]}
//   martingale {"m": m, "filtration": {...}, "values": [[[...m] x points] x (n+1)]}

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hcube/core.hpp"
#include "hcube/inequalities.hpp"
#include "hcube/martingales.hpp"
#include "hcube/norms.hpp"

namespace hcube {

using json = nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* key) {
  require(j.is_object(), std::string("expected a JSON object holding '") + key + "'");
  const auto it = j.find(key);
  require(it != j.end(), std::string("missing field '") + key + "'");
  return *it;
}

inline int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  require(v.is_number_integer(), std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

inline double number(const json& v, const std::string& where) {
  require(v.is_number(), where + " must be a number");
  return v.get<double>();
}

inline std::vector<double> flat_rows(const json& rows, std::size_t count, int m, const std::string& where) {
  require(rows.is_array(), where + " must be an array");
  require(rows.size() == count, where + " must have " + std::to_string(count) + " rows, found " +
                                    std::to_string(rows.size()));
  std::vector<double> flat;
  flat.reserve(count * static_cast<std::size_t>(m));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const json& row = rows[k];
    const std::string at = where + "[" + std::to_string(k) + "]";
    require(row.is_array() && static_cast<int>(row.size()) == m, at + " must hold " + std::to_string(m) + " numbers");
    for (const json& v : row) flat.push_back(number(v, at));
  }
  return flat;
}

template <class Tag>
json rows_json(const CubeTable<Tag>& t) {
  json rows = json::array();
  for (mask_t k = 0; k < t.size(); ++k) rows.push_back(std::vector<double>(t.row(k).begin(), t.row(k).end()));
  return rows;
}

inline json table_rows_json(const std::vector<double>& flat, int m) {
  json rows = json::array();
  for (std::size_t k = 0; k * m < flat.size(); ++k)
    rows.push_back(std::vector<double>(flat.begin() + k * m, flat.begin() + (k + 1) * m));
  return rows;
}

inline json exponent_json(double x) { return std::isinf(x) ? json("inf") : json(x); }

inline double exponent_from_json(const json& v, const std::string& where) {
  if (v.is_string() && (v.get<std::string>() == "inf" || v.get<std::string>() == "infinity")) return infinity;
  return number(v, where);
}

}  // namespace detail

/// Parses text, reporting syntax errors with line and column.
inline json parse_json_text(const std::string& text, const std::string& source = "input") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw input_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), path);
}

inline void write_text_file(const std::string& path, const std::string& text, bool append = false) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << text;
}

// ------------------------------------------------------------ tables

inline json to_json(const HypercubeFunction& f) { return {{"n", f.n()}, {"m", f.m()}, {"values", detail::rows_json(f)}}; }

inline json to_json(const WalshSpectrum& s) {
  return {{"n", s.n()}, {"m", s.m()}, {"coefficients", detail::rows_json(s)}};
}

inline HypercubeFunction function_from_json(const json& j) {
  const int n = detail::int_field(j, "n");
  const int m = detail::int_field(j, "m");
  detail::require(n >= 1 && n <= max_dimension, "n must lie in [1, 20]");
  detail::require(m >= 1, "m must be at least 1");
  return HypercubeFunction(n, m, detail::flat_rows(detail::field(j, "values"), cube_size(n), m, "values"));
}

inline WalshSpectrum spectrum_from_json(const json& j) {
  const int n = detail::int_field(j, "n");
  const int m = detail::int_field(j, "m");
  detail::require(n >= 1 && n <= max_dimension, "n must lie in [1, 20]");
  detail::require(m >= 1, "m must be at least 1");
  return WalshSpectrum(n, m, detail::flat_rows(detail::field(j, "coefficients"), cube_size(n), m, "coefficients"));
}

inline json to_json(const FunctionFamily& family) {
  json members = json::array();
  for (const auto& f : family.members()) members.push_back(detail::rows_json(f));
  return {{"n", family.n()}, {"m", family.m()}, {"family", members}};
}

inline FunctionFamily family_from_json(const json& j) {
  const int n = detail::int_field(j, "n");
  const int m = detail::int_field(j, "m");
  detail::require(n >= 1 && n <= max_dimension, "n must lie in [1, 20]");
  detail::require(m >= 1, "m must be at least 1");
  const json& members = detail::field(j, "family");
  detail::require(members.is_array() && static_cast<int>(members.size()) == n, "'family' must list exactly n functions");
  std::vector<HypercubeFunction> out;
  for (std::size_t i = 0; i < members.size(); ++i)
    out.emplace_back(n, m, detail::flat_rows(members[i], cube_size(n), m, "family[" + std::to_string(i) + "]"));
  return FunctionFamily(std::move(out));
}

inline json to_json(const DenseProductFunction& F) {
  return {{"n", F.n}, {"m", F.m()}, {"product_values", detail::rows_json(F.table)}};
}

inline DenseProductFunction product_from_json(const json& j) {
  const int n = detail::int_field(j, "n");
  const int m = detail::int_field(j, "m");
  detail::require(n >= 1 && n <= max_dense_product_n, "dense product functions need n in [1, 8]");
  detail::require(m >= 1, "m must be at least 1");
  HypercubeFunction table(2 * n, m, detail::flat_rows(detail::field(j, "product_values"), cube_size(2 * n), m, "product_values"));
  return {n, std::move(table)};
}

inline json vectors_to_json(const std::vector<std::vector<double>>& vectors) {
  return {{"m", vectors.empty() ? 0 : static_cast<int>(vectors.front().size())}, {"vectors", vectors}};
}

inline std::vector<std::vector<double>> vectors_from_json(const json& j) {
  const int m = detail::int_field(j, "m");
  detail::require(m >= 1, "m must be at least 1");
  const json& rows = detail::field(j, "vectors");
  detail::require(rows.is_array() && !rows.empty(), "'vectors' must be a nonempty array");
  const auto flat = detail::flat_rows(rows, rows.size(), m, "vectors");
  std::vector<std::vector<double>> out;
  for (std::size_t k = 0; k < rows.size(); ++k) out.emplace_back(flat.begin() + k * m, flat.begin() + (k + 1) * m);
  return out;
}

// -------------------------------------------------------- martingales

inline json to_json(const FiniteFiltration& F) {
  if (F.kind() == FiltrationKind::dyadic) return {{"kind", "dyadic"}, {"n", F.steps()}};
  return {{"kind", "tree"}, {"levels", F.levels()}, {"probabilities", F.probabilities()}};
}

inline FiniteFiltration filtration_from_json(const json& j) {
  const json& kind = detail::field(j, "kind");
  detail::require(kind.is_string(), "'kind' must be a string");
  if (kind.get<std::string>() == "dyadic") return FiniteFiltration::dyadic(detail::int_field(j, "n"));
  detail::require(kind.get<std::string>() == "tree", "filtration kind must be 'dyadic' or 'tree'");
  const json& levels = detail::field(j, "levels");
  const json& probabilities = detail::field(j, "probabilities");
  detail::require(levels.is_array() && probabilities.is_array(), "'levels' and 'probabilities' must be arrays");
  std::vector<std::vector<int>> labels;
  for (const json& level : levels) {
    detail::require(level.is_array(), "each level must be an array of cell labels");
    std::vector<int> row;
    for (const json& v : level) {
      detail::require(v.is_number_integer(), "cell labels must be integers");
      row.push_back(v.get<int>());
    }
    labels.push_back(std::move(row));
  }
  std::vector<double> weights;
  for (const json& v : probabilities) weights.push_back(detail::number(v, "probabilities"));
  return FiniteFiltration::tree(labels, std::move(weights));
}

inline json to_json(const MartingaleSequence& M) {
  json levels = json::array();
  for (int i = 0; i <= M.steps(); ++i) levels.push_back(detail::table_rows_json(M.level(i), M.m()));
  return {{"m", M.m()}, {"filtration", to_json(M.filtration())}, {"values", levels}};
}

inline MartingaleSequence martingale_from_json(const json& j) {
  const int m = detail::int_field(j, "m");
  detail::require(m >= 1, "m must be at least 1");
  FiniteFiltration filtration = filtration_from_json(detail::field(j, "filtration"));
  const json& levels = detail::field(j, "values");
  detail::require(levels.is_array() && static_cast<int>(levels.size()) == filtration.steps() + 1,
                  "'values' must hold one table per level 0..n");
  std::vector<std::vector<double>> values;
  for (std::size_t i = 0; i < levels.size(); ++i)
    values.push_back(detail::flat_rows(levels[i], filtration.points(), m, "values[" + std::to_string(i) + "]"));
  return MartingaleSequence(std::move(filtration), m, std::move(values));
}

// ------------------------------------------------------------ reports

inline json to_json(const RademacherAveragePlan& plan) {
  return {{"mode", to_string(plan.mode)},
          {"samples", plan.samples},
          {"seed", plan.seed},
          {"exact_threshold", plan.exact_threshold}};
}

inline RademacherAveragePlan plan_from_json(const json& j) {
  RademacherAveragePlan plan;
  const json& mode = detail::field(j, "mode");
  detail::require(mode.is_string(), "'mode' must be a string");
  plan.mode = parse_average_mode(mode.get<std::string>());
  plan.samples = detail::field(j, "samples").get<std::uint64_t>();
  plan.seed = detail::field(j, "seed").get<std::uint64_t>();
  plan.exact_threshold = detail::int_field(j, "exact_threshold");
  return plan;
}

inline json to_json(const InequalityReport& r) {
  return {{"name", to_string(r.name)},
          {"lhs", r.lhs},
          {"rhs", r.rhs},
          {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)},
          {"degenerate", r.degenerate},
          {"scope", r.scope},
          {"parameters",
           {{"n", r.parameters.n},
            {"m", r.parameters.m},
            {"p", detail::exponent_json(r.parameters.p)},
            {"q", detail::exponent_json(r.parameters.q)},
            {"plan", to_json(r.parameters.plan)},
            {"seed", r.parameters.plan.seed}}}};
}

inline InequalityReport report_from_json(const json& j) {
  InequalityReport r;
  r.name = parse_functional_name(detail::field(j, "name").get<std::string>());
  r.lhs = detail::number(detail::field(j, "lhs"), "lhs");
  r.rhs = detail::number(detail::field(j, "rhs"), "rhs");
  const json& ratio = detail::field(j, "ratio");
  if (!ratio.is_null()) r.ratio = detail::number(ratio, "ratio");
  r.degenerate = detail::field(j, "degenerate").get<bool>();
  r.scope = detail::field(j, "scope").get<std::string>();
  const json& p = detail::field(j, "parameters");
  r.parameters.n = detail::int_field(p, "n");
  r.parameters.m = detail::int_field(p, "m");
  r.parameters.p = detail::exponent_from_json(detail::field(p, "p"), "p");
  r.parameters.q = detail::exponent_from_json(detail::field(p, "q"), "q");
  r.parameters.plan = plan_from_json(detail::field(p, "plan"));
  return r;
}

inline std::string format_number(double x) {
  if (std::isinf(x)) return "inf";
  if (std::isnan(x)) return "nan";
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

inline const char* report_csv_header = "name,n,m,p,q,lhs,rhs,ratio,seed,mode\n";

inline std::string report_csv_row(const InequalityReport& r) {
  std::ostringstream out;
  out << to_string(r.name) << ',' << r.parameters.n << ',' << r.parameters.m << ',' << format_number(r.parameters.p)
      << ',' << format_number(r.parameters.q) << ',' << format_number(r.lhs) << ',' << format_number(r.rhs) << ','
      << (r.ratio ? format_number(*r.ratio) : std::string("degenerate")) << ',' << r.parameters.plan.seed << ','
      << to_string(r.parameters.plan.mode) << '\n';
  return out.str();
}

}  // namespace hcube
