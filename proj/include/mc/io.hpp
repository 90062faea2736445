#ifndef MC_IO_HPP
#define MC_IO_HPP

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "convergence.hpp"
#include "errors.hpp"
#include "gromov_hausdorff.hpp"
#include "metric_core.hpp"
#include "relation_maps.hpp"

namespace mc::io {

using json = nlohmann::json;

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw StructuralError(where + ": malformed JSON: " + e.what());
  }
}

namespace detail {
inline void check_symmetric(const std::vector<std::vector<double>>& d, const std::string& where) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size() && j < d[i].size(); ++j)
      if (i < d[j].size() && std::abs(d[i][j] - d[j][i]) > 1e-9)
        throw DomainError(where + ": distance matrix is not symmetric at (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
}

inline double number_field(const json& v, const std::string& field) {
  if (!v.is_number()) throw StructuralError("field '" + field + "': expected a number");
  return v.get<double>();
}
}  // namespace detail

/// {"labels": [...], "dist": [[...], ...]}
inline FiniteMetricSpace space_from_json(const json& j, const std::string& where = "space") {
  if (!j.is_object()) throw StructuralError(where + ": expected a JSON object");
  if (!j.contains("labels")) throw StructuralError(where + ": missing field 'labels'");
  if (!j.contains("dist")) throw StructuralError(where + ": missing field 'dist'");
  const json& L = j.at("labels");
  const json& D = j.at("dist");
  if (!L.is_array()) throw StructuralError(where + ": field 'labels' must be an array of strings");
  if (!D.is_array()) throw StructuralError(where + ": field 'dist' must be an array of rows");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!L[i].is_string()) throw StructuralError(where + ": field 'labels[" + std::to_string(i) + "]' must be a string");
    labels.push_back(L[i].get<std::string>());
  }
  std::vector<std::vector<double>> dist;
  for (std::size_t r = 0; r < D.size(); ++r) {
    if (!D[r].is_array()) throw StructuralError(where + ": field 'dist[" + std::to_string(r) + "]' must be an array");
    std::vector<double> row;
    for (std::size_t c = 0; c < D[r].size(); ++c) {
      try {
        row.push_back(detail::number_field(D[r][c], "dist[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
      } catch (const StructuralError& e) {
        throw StructuralError(where + ": " + e.what());
      }
    }
    dist.push_back(std::move(row));
  }
  try {
    FiniteMetricSpace s(std::move(labels), dist);
    detail::check_symmetric(dist, where);
    return s;
  } catch (const StructuralError& e) {
    throw StructuralError(where + ": " + e.what());
  }
}

inline json to_json(const FiniteMetricSpace& s) { return {{"labels", s.labels()}, {"dist", s.matrix()}}; }

/// Square matrix with a header row of labels.
inline FiniteMetricSpace space_from_csv(const std::string& text, const std::string& where = "space") {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(std::move(cells));
  }
  if (rows.empty()) throw StructuralError(where + ": empty CSV");
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\"");
    const auto e = s.find_last_not_of(" \t\"");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::vector<std::string> labels;
  for (auto& c : rows[0]) labels.push_back(trim(c));
  std::vector<std::vector<double>> dist;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<double> row;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const std::string cell = trim(rows[r][c]);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size())
        throw StructuralError(where + ": line " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                              ": '" + cell + "' is not a number");
      row.push_back(v);
    }
    dist.push_back(std::move(row));
  }
  try {
    FiniteMetricSpace s(std::move(labels), dist);
    detail::check_symmetric(dist, where);
    return s;
  } catch (const StructuralError& e) {
    throw StructuralError(where + ": " + e.what());
  }
}

inline FiniteMetricSpace read_space(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  if (path.extension() == ".csv") return space_from_csv(text, path.string());
  return space_from_json(parse_json(text, path.string()), path.string());
}

/// {"src": "<space file>", "dst": "<space file>", "pairs": [[i, j], ...]};
/// space paths are relative to the relation file.
inline Relation read_relation(const std::filesystem::path& path) {
  const std::string where = path.string();
  const json j = parse_json(read_text(path), where);
  if (!j.is_object()) throw StructuralError(where + ": expected a JSON object");
  for (const char* f : {"src", "dst", "pairs"})
    if (!j.contains(f)) throw StructuralError(where + ": missing field '" + std::string(f) + "'");
  if (!j["src"].is_string()) throw StructuralError(where + ": field 'src' must be a file name");
  if (!j["dst"].is_string()) throw StructuralError(where + ": field 'dst' must be a file name");
  if (!j["pairs"].is_array()) throw StructuralError(where + ": field 'pairs' must be an array of [i, j]");
  const auto dir = path.parent_path();
  SpacePtr src = make_space(read_space(dir / j["src"].get<std::string>()));
  SpacePtr dst = make_space(read_space(dir / j["dst"].get<std::string>()));
  std::vector<Pair> pairs;
  for (std::size_t k = 0; k < j["pairs"].size(); ++k) {
    const json& p = j["pairs"][k];
    const std::string f = "pairs[" + std::to_string(k) + "]";
    if (!p.is_array() || p.size() != 2 || !p[0].is_number_unsigned() || !p[1].is_number_unsigned())
      throw StructuralError(where + ": field '" + f + "' must be a pair of nonnegative integers");
    const std::size_t a = p[0].get<std::size_t>(), b = p[1].get<std::size_t>();
    if (a >= src->size() || b >= dst->size())
      throw StructuralError(where + ": field '" + f + "' indexes past the end of a space");
    pairs.push_back({PointId{a}, PointId{b}});
  }
  return Relation(src, dst, std::move(pairs));
}

inline json pairs_json(const Relation& r) {
  json a = json::array();
  for (const Pair& p : r.pairs()) a.push_back({p.src.index, p.dst.index});
  return a;
}

// --------------------------------------------------------------- reports

inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const ValidationReport& r, const FiniteMetricSpace& s) {
  json v = json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"kind", to_string(x.kind)},
                 {"points", {s.labels()[x.i.index], s.labels()[x.j.index], s.labels()[x.k.index]}},
                 {"indices", {x.i.index, x.j.index, x.k.index}},
                 {"slack", x.slack}});
  }
  return {{"ok", r.ok}, {"tolerance", r.tolerance}, {"violations", v}};
}

inline json to_json(const MapQuality& q) {
  json res = json::array(), prec = json::array();
  for (const auto& [y, v] : q.resolution_at) res.push_back({{"pixel", y.index}, {"resolution", v}});
  for (const auto& [x, v] : q.precision_at) prec.push_back({{"point", x.index}, {"precision", v}});
  return {{"accuracy", q.accuracy},
          {"resolution", q.resolution},
          {"precision", q.precision},
          {"resolution_at", res},
          {"precision_at", prec}};
}

inline json to_json(const GeneralizationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"lhs", num(c.lhs)},
                      {"rhs", num(c.rhs)},
                      {"slack", num(c.slack)},
                      {"holds", c.holds},
                      {"witness_dependent", c.witness_dependent}});
  return {{"checks", checks}, {"unconditional_ok", r.unconditional_ok}, {"all_ok", r.all_ok}};
}

inline json to_json(const GhResult& g, bool classical = false) {
  const double f = classical ? 0.5 : 1.0;
  return {{"value", num(f * g.value)},
          {"exact", g.exact},
          {"lower_bound", num(f * g.lower_bound)},
          {"upper_bound", num(f * g.upper_bound)},
          {"nodes_explored", g.nodes_explored},
          {"convention", classical ? "classical" : "accuracy"},
          {"witness", pairs_json(g.witness)}};
}

inline json to_json(const ConvergenceEstimate& e) {
  json rows = json::array();
  for (std::size_t i = 0; i < e.schedule.size(); ++i)
    rows.push_back({{"eps", e.schedule[i]}, {"residual", num(e.residuals[i])}});
  return {{"table", rows},
          {"fitted_order", num(e.fitted_order)},
          {"verdict", to_string(e.verdict)},
          {"exact", e.exact},
          {"noise_floor", e.noise_floor}};
}

/// Flat CSV: header line plus one line per row of `rows` (an array of flat
/// objects sharing the keys of the first row). An "eps" column leads.
inline std::string to_csv(const json& rows) {
  std::ostringstream out;
  if (!rows.is_array() || rows.empty()) return "";
  std::vector<std::string> keys;
  if (rows[0].contains("eps")) keys.push_back("eps");
  for (auto it = rows[0].begin(); it != rows[0].end(); ++it)
    if (it.key() != "eps") keys.push_back(it.key());
  for (std::size_t k = 0; k < keys.size(); ++k) out << (k ? "," : "") << keys[k];
  out << "\n";
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < keys.size(); ++k) {
      if (k) out << ",";
      const json& v = r.contains(keys[k]) ? r.at(keys[k]) : json(nullptr);
      if (v.is_string())
        out << v.get<std::string>();
      else if (!v.is_null())
        out << v.dump();
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace mc::io

#endif  // MC_IO_HPP
