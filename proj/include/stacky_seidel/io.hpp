#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stacky_seidel/mirror_map.hpp"

namespace stacky_seidel {

using json = nlohmann::json;

struct ModelInput {
  std::string name;
  ExtendedStackyFan model;
  std::vector<std::pair<std::string, Rat>> caps;  // as written in the file
  std::pair<int, int> z_window{-4, 0};
};

namespace detail {

inline Rat json_rational(const json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      throw Error(ErrorKind::parse_error, "field '" + field + "': " + e.what());
    }
  }
  if (v.is_number_integer()) return Rat(Int(v.dump(), 10));
  throw Error(ErrorKind::parse_error, "field '" + field + "' must be an integer or a \"p/q\" string");
}

inline Int json_integer(const json& v, const std::string& field) {
  const Rat q = json_rational(v, field);
  if (!is_integer(q)) throw Error(ErrorKind::parse_error, "field '" + field + "' must be integral");
  return q.get_num();
}

inline const json& require(const json& obj, const std::string& key) {
  if (!obj.contains(key)) throw Error(ErrorKind::parse_error, "missing field '" + key + "'");
  return obj.at(key);
}

inline const json& require_array(const json& v, const std::string& field) {
  if (!v.is_array()) throw Error(ErrorKind::parse_error, "field '" + field + "' must be a list");
  return v;
}

inline std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

}  // namespace detail

inline ModelInput parse_input_text(const std::string& text, bool allow_non_weak_fano = false) {
  using detail::json_integer;
  using detail::json_rational;
  using detail::require;
  using detail::require_array;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse_error, "line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::parse_error, "top level must be an object");

  ModelInput out;
  if (doc.contains("name") && doc["name"].is_string()) out.name = doc["name"].get<std::string>();

  StackyFan fan;
  const Int rank = json_integer(require(doc, "rank"), "rank");
  if (rank < 1 || rank > 64) throw Error(ErrorKind::parse_error, "field 'rank' out of range");
  fan.rank = static_cast<int>(rank.get_si());
  const auto& rays = require_array(require(doc, "rays"), "rays");
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const std::string f = "rays[" + std::to_string(i) + "]";
    IntVector v;
    for (const auto& x : require_array(rays[i], f)) v.push_back(json_integer(x, f));
    fan.rays.push_back(std::move(v));
  }
  const auto& cones = require_array(require(doc, "max_cones"), "max_cones");
  for (std::size_t c = 0; c < cones.size(); ++c) {
    const std::string f = "max_cones[" + std::to_string(c) + "]";
    IndexSet s;
    for (const auto& x : require_array(cones[c], f)) {
      const Int k = json_integer(x, f);
      if (k < 1 || k > Int(static_cast<unsigned long>(fan.rays.size())))
        throw Error(ErrorKind::parse_error, "field '" + f + "' references a missing ray");
      s.push_back(static_cast<int>(k.get_si()) - 1);
    }
    std::sort(s.begin(), s.end());
    fan.max_cones.push_back(std::move(s));
  }

  std::vector<ExtensionVector> ext;
  if (doc.contains("extension")) {
    const auto& list = require_array(doc["extension"], "extension");
    for (std::size_t j = 0; j < list.size(); ++j) {
      const std::string f = "extension[" + std::to_string(j) + "]";
      const auto& e = list[j];
      if (!e.is_object()) throw Error(ErrorKind::parse_error, "field '" + f + "' must be an object");
      ExtensionVector x;
      for (const auto& v : require_array(require(e, "vector"), f + ".vector")) x.vector.push_back(json_integer(v, f + ".vector"));
      for (const auto& v : require_array(require(e, "anticone"), f + ".anticone")) {
        const Int k = json_integer(v, f + ".anticone");
        if (k < 1) throw Error(ErrorKind::parse_error, "field '" + f + ".anticone' must be 1-based");
        x.anticone.push_back(static_cast<int>(k.get_si()) - 1);
      }
      for (const auto& v : require_array(require(e, "c"), f + ".c")) x.c.push_back(json_rational(v, f + ".c"));
      ext.push_back(std::move(x));
    }
  }

  const auto& rows = require_array(require(doc, "p_basis"), "p_basis");
  std::vector<RatVector> prow;
  for (std::size_t a = 0; a < rows.size(); ++a) {
    const std::string f = "p_basis[" + std::to_string(a) + "]";
    RatVector v;
    for (const auto& x : require_array(rows[a], f)) v.push_back(json_rational(x, f));
    prow.push_back(std::move(v));
  }
  RatMatrix p = RatMatrix::from_rows(prow);

  if (doc.contains("caps")) {
    const auto& caps = doc["caps"];
    if (!caps.is_object()) throw Error(ErrorKind::parse_error, "field 'caps' must be an object");
    for (const auto& [k, v] : caps.items()) out.caps.push_back({k, json_rational(v, "caps." + k)});
  }
  if (doc.contains("z_window")) {
    const auto& w = require_array(doc["z_window"], "z_window");
    if (w.size() != 2) throw Error(ErrorKind::parse_error, "field 'z_window' needs two entries");
    out.z_window = {static_cast<int>(json_integer(w[0], "z_window").get_si()),
                    static_cast<int>(json_integer(w[1], "z_window").get_si())};
  }

  BuildOptions opt;
  opt.allow_non_weak_fano = allow_non_weak_fano;
  out.model = ExtendedStackyFan::build(std::move(fan), std::move(ext), std::move(p), opt);
  return out;
}

inline ModelInput parse_input(const std::string& path, bool allow_non_weak_fano = false) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_input_text(buf.str(), allow_non_weak_fano);
}

// serialization

inline json rat_json(const Rat& q) { return to_string(q); }

inline json vector_json(const RatVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

inline json vector_json(const IntVector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

inline json index_json(const IndexSet& s) {
  json out = json::array();
  for (int i : s) out.push_back(i + 1);
  return out;
}

inline std::string exponent_text(const Exponent& e, std::size_t first_index) {
  std::string out;
  for (std::size_t a = 0; a < e.size(); ++a) {
    if (e[a] == 0) continue;
    if (!out.empty()) out += " ";
    out += "y" + std::to_string(a + first_index);
    if (e[a] != 1) out += is_integer(e[a]) ? "^" + e[a].get_str() : "^(" + e[a].get_str() + ")";
  }
  return out.empty() ? "1" : out;
}

inline std::string monomial_text(const Monomial& mu) {
  std::string out;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += "D" + std::to_string(i + 1);
    if (mu[i] > 1) out += "^" + std::to_string(mu[i]);
  }
  return out;
}

inline std::string sector_text(const IntVector& v) {
  std::string out = "1_(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? "," : "") + v[k].get_str();
  return out + ")";
}

inline std::string class_text(const CohClass& c, const RelationIdeal& ideal) {
  if (c.is_zero()) return "0";
  std::string out;
  for (const auto& [key, a] : c.terms()) {
    if (!out.empty()) out += a < 0 ? " - " : " + ";
    else if (a < 0) out += "-";
    const Rat mag = abs(a);
    std::string piece = mag == 1 ? "" : mag.get_str();
    const std::string mono = monomial_text(key.monomial);
    if (!mono.empty()) piece += (piece.empty() ? "" : "*") + mono;
    if (key.sector != 0 || mono.empty()) piece += (piece.empty() ? "" : "*") + sector_text(ideal.sector(key.sector).v);
    out += piece;
  }
  return out;
}

struct SeriesRow {
  Exponent exponent;
  int zpow = 0;
  std::optional<std::size_t> sector;
  Monomial monomial;
  Rat coefficient;
};

inline std::vector<SeriesRow> series_rows(const Series<Rat>& s) {
  std::vector<SeriesRow> out;
  for (const auto& [e, c] : s.terms()) out.push_back({e, 0, std::nullopt, {}, c});
  return out;
}

inline std::vector<SeriesRow> series_rows(const Series<CohClass>& s) {
  std::vector<SeriesRow> out;
  for (const auto& [e, c] : s.terms())
    for (const auto& [key, a] : c.terms()) out.push_back({e, 0, key.sector, key.monomial, a});
  return out;
}

inline std::vector<SeriesRow> series_rows(const Series<ZClass>& s, std::pair<int, int> window) {
  std::vector<SeriesRow> out;
  for (const auto& [e, z] : s.terms())
    for (const auto& [zp, c] : z.powers()) {
      if (zp < window.first || zp > window.second) continue;
      for (const auto& [key, a] : c.terms()) out.push_back({e, zp, key.sector, key.monomial, a});
    }
  return out;
}

inline json rows_json(const std::vector<SeriesRow>& rows, const RelationIdeal* ideal) {
  json out = json::array();
  for (const auto& r : rows) {
    json sector = nullptr, mono = nullptr;
    if (r.sector && ideal) sector = vector_json(ideal->sector(*r.sector).v);
    if (r.sector) mono = r.monomial;
    out.push_back(json::array({vector_json(r.exponent), r.zpow, sector, mono, to_string(r.coefficient)}));
  }
  return out;
}

}  // namespace stacky_seidel
