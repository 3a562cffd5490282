#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stacky_seidel/io.hpp"

namespace stacky_seidel {

enum class Format { text, structured };

struct RunConfig {
  std::string input;
  std::string subcommand;
  std::vector<std::pair<std::string, Rat>> caps;  // y1..yR and y0
  std::optional<std::pair<int, int>> z_window;
  std::size_t budget = 4'000'000;
  Format format = Format::text;
  std::vector<std::size_t> j;  // 1-based over rays then extension vectors
  bool allow_non_weak_fano = false;
};

// "y1=2,y0=1/2"
inline std::vector<std::pair<std::string, Rat>> parse_caps_option(const std::string& text) {
  std::vector<std::pair<std::string, Rat>> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::parse_error, "caps entry '" + item + "' is not name=value");
    out.push_back({item.substr(0, eq), parse_rational(item.substr(eq + 1))});
    start = end + 1;
  }
  return out;
}

class Report {
 public:
  void add(std::string kind, json payload, std::vector<std::string> text) {
    records_.push_back({std::move(kind), std::move(payload), std::move(text)});
  }

  void verdict(const std::string& scope, const Verdict& v) {
    const std::string name = scope.empty() ? v.name : scope + "/" + v.name;
    statuses_.push_back(v.status);
    std::string line = "[" + std::string(status_name(v.status)) + "] " + name;
    if (!v.detail.empty()) line += ": " + v.detail;
    add("verdict", {{"name", name}, {"status", status_name(v.status)}, {"detail", v.detail}}, {line});
  }

  int exit_status() const {
    bool soft = false;
    for (Status s : statuses_) {
      if (s == Status::fail) return 1;
      if (s != Status::pass) soft = true;
    }
    return soft ? 2 : 0;
  }

  void write(std::ostream& out, Format format) const {
    for (const auto& r : records_) {
      if (format == Format::structured) {
        out << json{{"kind", r.kind}, {"payload", r.payload}}.dump() << '\n';
      } else {
        for (const auto& line : r.text) out << line << '\n';
      }
    }
  }

 private:
  struct Record {
    std::string kind;
    json payload;
    std::vector<std::string> text;
  };
  std::vector<Record> records_;
  std::vector<Status> statuses_;
};

namespace detail {

struct Caps {
  Exponent fiber;
  Rat y0 = 2;
};

inline Caps resolve_caps(const ExtendedStackyFan& x, const std::vector<std::pair<std::string, Rat>>& file,
                         const std::vector<std::pair<std::string, Rat>>& cli) {
  Caps out{Exponent(x.variables(), Rat(2)), Rat(2)};
  auto apply = [&](const std::pair<std::string, Rat>& kv) {
    std::string name = kv.first;
    if (!name.empty() && name.front() == 'y') name.erase(0, 1);
    std::size_t a = 0;
    try {
      std::size_t used = 0;
      a = std::stoul(name, &used);
      if (used != name.size()) throw std::invalid_argument(name);
    } catch (const std::exception&) {
      throw Error(ErrorKind::validation_error, "unknown cap variable '" + kv.first + "'");
    }
    if (kv.second < 0) throw Error(ErrorKind::validation_error, "cap '" + kv.first + "' is negative");
    if (a == 0) {
      out.y0 = kv.second;
      return;
    }
    if (a > x.variables()) throw Error(ErrorKind::validation_error, "unknown cap variable '" + kv.first + "'");
    out.fiber[a - 1] = kv.second;
  };
  for (const auto& kv : file) apply(kv);
  for (const auto& kv : cli) apply(kv);
  return out;
}

inline std::string exponent_list(const Exponent& e) {
  std::string out = "(";
  for (std::size_t a = 0; a < e.size(); ++a) out += (a ? "," : "") + to_string(e[a]);
  return out + ")";
}

inline std::vector<std::string> rows_text(const std::vector<SeriesRow>& rows, const RelationIdeal* ideal,
                                          std::size_t first_index, bool show_z) {
  std::vector<std::string> out;
  if (rows.empty()) out.push_back("  0");
  for (const auto& r : rows) {
    std::string line = "  " + exponent_text(r.exponent, first_index);
    if (show_z) line += " z^" + std::to_string(r.zpow);
    line += " : " + to_string(r.coefficient);
    if (r.sector && ideal) {
      const std::string mono = monomial_text(r.monomial);
      line += " " + (mono.empty() ? std::string("1") : mono);
      if (*r.sector != 0) line += " " + sector_text(ideal->sector(*r.sector).v);
    }
    out.push_back(std::move(line));
  }
  return out;
}

template <typename S>
void add_series(Report& rep, const std::string& kind, const std::string& title, const S& s, const RelationIdeal* ideal,
                std::size_t first_index) {
  const auto rows = series_rows(s);
  std::vector<std::string> text{title + ":"};
  for (auto& line : rows_text(rows, ideal, first_index, false)) text.push_back(std::move(line));
  rep.add(kind, {{"name", title}, {"caps", vector_json(s.caps())}, {"terms", rows_json(rows, ideal)}}, std::move(text));
}

inline std::string bundle_label(const ExtendedStackyFan& x, std::size_t j) {
  return "j=" + std::to_string(j + 1) + (j < x.m() ? " (ray)" : " (box)");
}

inline void describe(const ExtendedStackyFan& x, Report& rep) {
  json p;
  p["rank"] = x.n();
  p["rays"] = x.m();
  p["extension_vectors"] = x.l();
  p["r"] = x.r();
  p["scale"] = x.scale().get_str();
  json boxes = json::array();
  std::vector<std::string> text{"rank " + std::to_string(x.n()) + ", rays " + std::to_string(x.m()) +
                                ", extension vectors " + std::to_string(x.l()) + ", r = " + std::to_string(x.r()) +
                                ", M = " + x.scale().get_str(),
                                "boxes:"};
  for (const auto& b : x.boxes()) {
    boxes.push_back({{"v", vector_json(b.v)}, {"cone", index_json(b.minimal_cone)}, {"coords", vector_json(b.coords)},
                     {"age", to_string(b.age)}});
    text.push_back("  " + sector_text(b.v) + " age " + to_string(b.age));
  }
  p["boxes"] = boxes;
  json anticones = json::array();
  std::string line = "minimal anticones:";
  for (const auto& a : x.minimal_anticones()) {
    anticones.push_back(index_json(a));
    line += " {";
    for (std::size_t k = 0; k < a.size(); ++k) line += (k ? "," : "") + std::to_string(a[k] + 1);
    line += "}";
  }
  p["minimal_anticones"] = anticones;
  text.push_back(line);
  json mrows = json::array();
  text.push_back("divisor classes in the p-basis:");
  for (std::size_t i = 0; i < x.index_count(); ++i) {
    const RatVector row = x.divisor_matrix().row(i);
    mrows.push_back(vector_json(row));
    text.push_back("  D" + std::to_string(i + 1) + " = " + exponent_list(row));
  }
  p["divisor_matrix"] = mrows;
  p["rho"] = vector_json(x.rho());
  p["weak_fano"] = x.weak_fano();
  p["nef_basis"] = x.nef_basis();
  text.push_back("rho = " + exponent_list(x.rho()));
  text.push_back(std::string("weak Fano: ") + (x.weak_fano() ? "true" : "false"));
  text.push_back(std::string("nef basis: ") + (x.nef_basis() ? "true" : "false"));
  json duals = json::array();
  for (std::size_t j = 0; j < x.l(); ++j) {
    const RatVector d = dual_vector(x, j);
    duals.push_back(vector_json(d));
    text.push_back("dual vector " + std::to_string(x.m() + j + 1) + " = " + exponent_list(d) + ", y-exponent " +
                   exponent_list(x.exponents_of(d)));
  }
  p["dual_vectors"] = duals;
  rep.add("describe", p, std::move(text));
}

inline void combinatorial_checks(const ExtendedStackyFan& x, Report& rep) {
  rep.verdict("", {"gale-exact", x.gale_exact() ? Status::pass : Status::fail, ""});
  for (std::size_t j = 0; j < x.l(); ++j)
    rep.verdict("", {"dual-vector-" + std::to_string(x.m() + j + 1),
                     dual_vector_holds(x, j, dual_vector(x, j)) ? Status::pass : Status::fail, ""});
}

inline void ideal_check(const ExtendedStackyFan& x, const RelationIdeal& ideal, Report& rep, const std::string& scope) {
  for (std::size_t s = 0; s < ideal.sector_count(); ++s) {
    std::size_t expected = 0;
    for (const auto& cone : x.fan().max_cones)
      if (is_subset(ideal.sector(s).minimal_cone, cone)) ++expected;
    const std::size_t got = ideal.module_dimension(s);
    rep.verdict(scope, {"sector-dimension " + sector_text(ideal.sector(s).v), got == expected ? Status::pass : Status::fail,
                        std::to_string(got) + " vs " + std::to_string(expected)});
  }
}

inline void ifunction_points(const ExtendedStackyFan& x, const RelationIdeal& ideal, const Exponent& caps,
                             const EnumerationOptions& opt, Report& rep, std::size_t first_index) {
  json pts = json::array();
  std::vector<std::string> text{"effective points:"};
  for (const auto& pt : enumerate_keff(x, caps, opt)) {
    const Rat c = c_coefficient(pt.pairings);
    const int w = z_order(pt.pairings);
    pts.push_back({{"exponent", vector_json(pt.exponent)},
                   {"pairings", vector_json(pt.pairings)},
                   {"sector", vector_json(ideal.sector(pt.sector).v)},
                   {"degree", to_string(pt.degree)},
                   {"C", to_string(c)},
                   {"w", w}});
    text.push_back("  " + exponent_text(pt.exponent, first_index) + " d=" + exponent_list(pt.pairings) + " sector " +
                   sector_text(ideal.sector(pt.sector).v) + " C=" + to_string(c) + " w=" + std::to_string(w));
  }
  rep.add("points", {{"points", pts}}, std::move(text));
}

inline void ifunction_series(const Series<ZClass>& ifn, const RelationIdeal& ideal, std::pair<int, int> window,
                             Report& rep, std::size_t first_index) {
  const auto rows = series_rows(ifn, window);
  std::vector<std::string> text{"I-function, z powers " + std::to_string(window.first) + ".." +
                                std::to_string(window.second) + ":"};
  for (auto& line : rows_text(rows, &ideal, first_index, true)) text.push_back(std::move(line));
  rep.add("ifunction",
          {{"caps", vector_json(ifn.caps())},
           {"z_window", {window.first, window.second}},
           {"terms", rows_json(rows, &ideal)}},
          std::move(text));
}

inline std::size_t checked_index(const ExtendedStackyFan& x, std::size_t j1) {
  if (j1 < 1 || j1 > x.index_count())
    throw Error(ErrorKind::index_out_of_range, "--j must lie in 1.." + std::to_string(x.index_count()));
  return j1 - 1;
}

inline std::vector<std::size_t> selected(const ExtendedStackyFan& x, const RunConfig& cfg, bool required) {
  std::vector<std::size_t> out;
  for (std::size_t j1 : cfg.j) out.push_back(checked_index(x, j1));
  if (out.empty() && required) throw Error(ErrorKind::validation_error, "--j is required for '" + cfg.subcommand + "'");
  return out;
}

inline void mirror_records(const ExtendedStackyFan& x, const RelationIdeal& ideal, const MirrorData& mirror, Report& rep) {
  for (std::size_t a = 0; a < x.r(); ++a)
    add_series(rep, "mirror-map", "g" + std::to_string(a + 1), mirror.g[a], &ideal, 1);
  add_series(rep, "twisted-part", "tau_tw", mirror.tau_tw, &ideal, 1);
}

inline void seidel_records(const ExtendedStackyFan& x, const RelationIdeal& ideal, const SeidelReport& s, const Caps& caps,
                           Report& rep) {
  const std::string scope = bundle_label(x, s.index);
  json head{{"j", s.index + 1},
            {"kind", s.kind == BundleData::Kind::divisor ? "divisor" : "box"},
            {"caps", vector_json(s.caps)},
            {"y0_cap", to_string(caps.y0)}};
  std::vector<std::string> text{"Seidel element " + scope + ", caps " + exponent_list(s.caps) + ", y0 cap " +
                                to_string(caps.y0)};
  if (s.kind == BundleData::Kind::box) {
    const std::size_t jj = s.index - x.m();
    head["anticone"] = index_json(x.extension()[jj].anticone);
    const Exponent shift = x.exponents_of(dual_vector(x, jj));
    head["dual_exponent"] = vector_json(shift);
    head["trusted_region"] = vector_json(exponent_sub(s.caps, shift));
    text.push_back("chosen anticone " + head["anticone"].dump() + ", trusted region " +
                   exponent_list(exponent_sub(s.caps, shift)));
  }
  rep.add("seidel", head, std::move(text));
  add_series(rep, "series", "g0", s.g0, &ideal, 1);
  add_series(rep, "series", "g0 closed form", s.g0_closed, &ideal, 1);
  add_series(rep, "series", "Batyrev element (derivative)", s.batyrev, &ideal, 1);
  add_series(rep, "series", "Batyrev element (closed form)", s.batyrev_closed, &ideal, 1);
  add_series(rep, "series", "pullback of G1", s.g1_pullback, &ideal, 1);
  add_series(rep, "series", "Seidel element", s.seidel, &ideal, 1);
  add_series(rep, "series", "exp(-g0) times Batyrev element", s.rhs, &ideal, 1);
  for (const auto& v : s.verdicts) rep.verdict(scope, v);
}

inline void run_verify(const ExtendedStackyFan& x, const Caps& caps, const EnumerationOptions& opt, Report& rep) {
  combinatorial_checks(x, rep);
  if (!x.weak_fano()) {
    rep.add("weak-fano", {{"weak_fano", false}}, {"weak Fano: false"});
    rep.verdict("", {"theorem", Status::not_applicable, "model is not weak Fano"});
    return;
  }
  rep.add("weak-fano", {{"weak_fano", true}}, {"weak Fano: true"});
  const RelationIdeal ideal(x);
  ideal_check(x, ideal, rep, "");
  const Series<ZClass> ifn = ifunction_reduced(x, ideal, caps.fiber, opt);
  try {
    extract_mirror(x, ideal, ifn);
    rep.verdict("", {"mirror-extraction", Status::pass, ""});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::not_weak_fano_behavior) throw;
    rep.verdict("", {"mirror-extraction", Status::fail, e.what()});
    return;
  }
  const auto& basis = x.lattice_basis();
  for (std::size_t k = 0; k < basis.size(); ++k)
    rep.verdict("", residual_verdict("pd-residual-" + std::to_string(k + 1),
                                     pd_operator_residual(x, ideal, ifn, to_rational(basis[k]))));
  for (std::size_t j = 0; j < x.index_count(); ++j) {
    const SeidelReport s = seidel_element(x, ideal, j, caps.fiber, caps.y0, opt);
    for (const auto& v : s.verdicts) rep.verdict(bundle_label(x, j), v);
  }
}

}  // namespace detail

// report for one subcommand; errors propagate
inline Report run_report(const RunConfig& cfg) {
  const ModelInput in = parse_input(cfg.input, cfg.allow_non_weak_fano);
  const ExtendedStackyFan& x = in.model;
  if (cfg.budget == 0) throw Error(ErrorKind::validation_error, "term budget must be positive");
  const EnumerationOptions opt{cfg.budget};
  const detail::Caps caps = detail::resolve_caps(x, in.caps, cfg.caps);
  const std::pair<int, int> window = cfg.z_window.value_or(in.z_window);
  Report rep;

  const std::string& cmd = cfg.subcommand;
  if (cmd == "describe") {
    detail::describe(x, rep);
  } else if (cmd == "verify") {
    detail::run_verify(x, caps, opt, rep);
  } else if (cmd == "ifunction") {
    const auto js = detail::selected(x, cfg, false);
    if (js.empty()) {
      const RelationIdeal ideal(x);
      detail::ifunction_points(x, ideal, caps.fiber, opt, rep, 1);
      detail::ifunction_series(ifunction_reduced(x, ideal, caps.fiber, opt), ideal, window, rep, 1);
    }
    for (std::size_t j : js) {
      const BundleData b = j < x.m() ? bundle_divisor(x, j) : bundle_box(x, j - x.m());
      const RelationIdeal bi(b.total);
      Exponent total = caps.fiber;
      total.insert(total.begin(), caps.y0);
      rep.add("bundle", {{"j", j + 1}}, {"bundle " + detail::bundle_label(x, j) + ", variables y0..y" +
                                             std::to_string(x.variables())});
      detail::ifunction_points(b.total, bi, total, opt, rep, 0);
      detail::ifunction_series(ifunction_reduced(b.total, bi, total, opt), bi, window, rep, 0);
    }
  } else if (cmd == "mirror") {
    const RelationIdeal ideal(x);
    detail::mirror_records(x, ideal, extract_mirror(x, ideal, ifunction_reduced(x, ideal, caps.fiber, opt)), rep);
  } else if (cmd == "batyrev") {
    const RelationIdeal ideal(x);
    const MirrorData mirror = extract_mirror(x, ideal, ifunction_reduced(x, ideal, caps.fiber, opt));
    for (std::size_t j : detail::selected(x, cfg, true)) {
      const Series<CohClass> a = batyrev_derivative(mirror, x, ideal, j);
      const Series<CohClass> b = batyrev_closed_form(x, ideal, j, caps.fiber);
      detail::add_series(rep, "series", "Batyrev element " + std::to_string(j + 1) + " (derivative)", a, &ideal, 1);
      detail::add_series(rep, "series", "Batyrev element " + std::to_string(j + 1) + " (closed form)", b, &ideal, 1);
      rep.verdict(detail::bundle_label(x, j), compare_series("batyrev-two-way", a, b, TrustedRegion{caps.fiber}));
    }
  } else if (cmd == "seidel") {
    const RelationIdeal ideal(x);
    for (std::size_t j : detail::selected(x, cfg, true))
      detail::seidel_records(x, ideal, seidel_element(x, ideal, j, caps.fiber, caps.y0, opt), caps, rep);
  } else {
    throw Error(ErrorKind::parse_error, "unknown subcommand '" + cmd + "'");
  }
  return rep;
}

inline void write_error(const Error& e, Format format, std::ostream& err) {
  if (format == Format::structured) {
    err << json{{"kind", "error"}, {"payload", {{"error", kind_name(e.kind())}, {"message", e.what()}}}}.dump() << '\n';
  } else {
    err << "error: " << e.what() << '\n';
  }
}

// exit status: 0 all pass, 1 a verdict failed, 2 inconclusive or not applicable, 3 error
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Report rep = run_report(cfg);
    rep.write(out, cfg.format);
    return rep.exit_status();
  } catch (const Error& e) {
    write_error(e, cfg.format, err);
    return 3;
  }
}

}  // namespace stacky_seidel
