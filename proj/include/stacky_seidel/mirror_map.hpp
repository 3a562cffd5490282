#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stacky_seidel/ifunction.hpp"

namespace stacky_seidel {

struct MirrorData {
  std::vector<Series<Rat>> g;  // g_a, a < r
  Series<CohClass> tau_tw;     // twisted part of the z^{-1} coefficient
};

namespace detail {

inline void check_leading(const Series<ZClass>& ifn) {
  const Exponent zero(ifn.variables(), Rat(0));
  for (const auto& [e, z] : ifn.terms())
    for (const auto& [zp, c] : z.powers()) {
      if (zp < 0) continue;
      const bool unit = e == zero && zp == 0 && c.terms().size() == 1 && c.terms().begin()->first.sector == 0 &&
                        degree(c.terms().begin()->first.monomial) == 0 && c.terms().begin()->second == 1;
      if (!unit) throw Error(ErrorKind::not_weak_fano_behavior, "I-function has a nonnegative power of z");
    }
}

// splits a z^{-1} coefficient into g-contributions and a twisted remainder
inline std::pair<RatVector, CohClass> split_z_minus_one(const ExtendedStackyFan& x, const RelationIdeal& ideal,
                                                        const CohClass& c, const RatVector& pi) {
  RatVector g(x.variables(), Rat(0));
  CohClass twisted;
  bool untwisted = false;
  for (const auto& [key, a] : c.terms()) {
    const Rat deg = Rat(degree(key.monomial)) + ideal.sector(key.sector).age;
    if (deg > 1) throw Error(ErrorKind::not_weak_fano_behavior, "z^{-1} coefficient has degree above two");
    if (key.sector == 0) {
      if (degree(key.monomial) != 1)
        throw Error(ErrorKind::not_weak_fano_behavior, "untwisted z^{-1} coefficient is not a divisor class");
      const auto i = static_cast<std::size_t>(
          std::find(key.monomial.begin(), key.monomial.end(), 1) - key.monomial.begin());
      for (std::size_t b = 0; b < x.variables(); ++b) g[b] += a * x.divisor_matrix()(i, b);
      untwisted = true;
    } else {
      twisted.add(key.sector, key.monomial, a);
    }
  }
  // shape of the contributing classes
  int neg_int = 0;
  Int ceil_sum = 0;
  Rat deg = 0;
  for (const auto& v : pi) {
    if (is_integer(v) && v < 0) ++neg_int;
    ceil_sum += ceil_of(v);
    deg += v;
  }
  if (untwisted) ensure(neg_int == 1 && ceil_sum == 0 && deg == 0, "untwisted z^{-1} term of unexpected shape");
  if (!twisted.is_zero()) ensure(neg_int == 0 && ceil_sum == 1, "twisted z^{-1} term of unexpected shape");
  return {g, twisted};
}

}  // namespace detail

inline MirrorData extract_mirror(const ExtendedStackyFan& x, const RelationIdeal& ideal, const Series<ZClass>& ifn) {
  detail::check_leading(ifn);
  MirrorData out{std::vector<Series<Rat>>(x.r(), Series<Rat>(ifn.caps())), Series<CohClass>(ifn.caps())};
  for (const auto& [e, z] : ifn.terms()) {
    const CohClass c = z.at(-1);
    if (c.is_zero()) continue;
    auto [g, tw] = detail::split_z_minus_one(x, ideal, c, x.pairings_of(e));
    for (std::size_t a = 0; a < x.r(); ++a) out.g[a].add_term(e, g[a]);
    out.tau_tw.add_term(e, tw);
  }
  return out;
}

struct CorrectionTarget {
  BundleData::Kind kind = BundleData::Kind::divisor;
  std::size_t index = 0;
};

// closed-form g_0 from the integral classes with one negative pairing
inline Series<Rat> g0_closed_form(const ExtendedStackyFan& x, const CorrectionTarget& target, const Exponent& caps) {
  RatVector weight(x.m(), Rat(0));
  if (target.kind == BundleData::Kind::divisor) {
    if (target.index >= x.m()) throw Error(ErrorKind::index_out_of_range, "ray index out of range");
    weight[target.index] = 1;
  } else {
    if (target.index >= x.l()) throw Error(ErrorKind::index_out_of_range, "extension index out of range");
    weight = x.extension()[target.index].c;
  }
  Series<Rat> out(caps);
  for (const auto& pt : enumerate_keff(x, caps)) {
    if (pt.degree != 0) continue;
    if (!std::all_of(pt.pairings.begin(), pt.pairings.end(), [](const Rat& v) { return is_integer(v); })) continue;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < pt.pairings.size(); ++i)
      if (pt.pairings[i] < 0) neg.push_back(i);
    if (neg.size() != 1 || neg.front() >= x.m() || weight[neg.front()] == 0) continue;
    const std::size_t k = neg.front();
    const long e = to_long(-pt.pairings[k].get_num());
    Rat c = Rat(factorial(e - 1));
    if (e % 2 == 1) c = -c;
    for (std::size_t i = 0; i < pt.pairings.size(); ++i)
      if (i != k) c /= Rat(factorial(to_long(pt.pairings[i].get_num())));
    out.add_term(pt.exponent, Rat(weight[k] * c));
  }
  return out;
}

struct BundleExtraction {
  Series<CohClass> g1;               // [z^{-2} y_0] coefficient, total-space classes
  Series<Rat> g0;                    // correction coefficient
  std::vector<Series<Rat>> g;        // g_a of the total space for a = 1..r
  Series<CohClass> tau_tw;           // twisted z^{-1} part, total-space classes
  Series<ZClass> restricted;         // y_0 = 0 part
};

inline Exponent drop_first(const Exponent& e) { return Exponent(e.begin() + 1, e.end()); }

inline BundleExtraction extract_G1_and_g0(const BundleData& b, const RelationIdeal& ideal, const Series<ZClass>& ifn) {
  const ExtendedStackyFan& x = b.total;
  detail::check_leading(ifn);
  const Exponent fiber_caps = drop_first(ifn.caps());
  BundleExtraction out{Series<CohClass>(fiber_caps), Series<Rat>(fiber_caps),
                       std::vector<Series<Rat>>(x.r() - 1, Series<Rat>(fiber_caps)), Series<CohClass>(fiber_caps),
                       Series<ZClass>(fiber_caps)};
  for (const auto& [e, z] : ifn.terms()) {
    const Exponent f = drop_first(e);
    if (e[0] == 0) out.restricted.add_term(f, z);
    if (e[0] == 1) out.g1.add_term(f, z.at(-2));
    const CohClass c = z.at(-1);
    if (c.is_zero()) continue;
    if (e[0] != 0) throw Error(ErrorKind::y0_dependence_detected, "z^{-1} coefficient depends on y_0");
    auto [g, tw] = detail::split_z_minus_one(x, ideal, c, x.pairings_of(e));
    out.g0.add_term(f, g[0]);
    for (std::size_t a = 1; a < x.r(); ++a) out.g[a - 1].add_term(f, g[a]);
    out.tau_tw.add_term(f, tw);
  }
  return out;
}

// class of sum_a m_ja p_a in the untwisted sector
inline CohClass divisor_class(const ExtendedStackyFan& x, const RelationIdeal& ideal, std::size_t j) {
  const auto cls = operator_classes(x)[j];
  CohClass c;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    Monomial mu(x.m(), 0);
    mu[k] = 1;
    c.add(0, mu, cls[k]);
  }
  return ideal.reduce(c);
}

inline CohClass p_class(const ExtendedStackyFan& x, const RelationIdeal& ideal, std::size_t a) {
  CohClass c;
  for (std::size_t k = 0; k < x.m(); ++k) {
    Monomial mu(x.m(), 0);
    mu[k] = 1;
    c.add(0, mu, x.p_basis()(a, k));
  }
  return ideal.reduce(c);
}

// D~_j through derivatives of the mirror map; j indexes rays then extension vectors
inline Series<CohClass> batyrev_derivative(const MirrorData& mirror, const ExtendedStackyFan& x,
                                           const RelationIdeal& ideal, std::size_t j) {
  if (j >= x.index_count()) throw Error(ErrorKind::index_out_of_range, "divisor index out of range");
  const Exponent& caps = mirror.tau_tw.caps();
  const RatVector w = x.divisor_matrix().row(j);
  Series<CohClass> out(caps);
  out.add_term(Exponent(caps.size(), Rat(0)), divisor_class(x, ideal, j));
  for (std::size_t a = 0; a < x.r(); ++a) {
    const CohClass pa = p_class(x, ideal, a);
    const Series<Rat> dg = directional_derivation(mirror.g[a], w);
    for (const auto& [e, c] : dg.terms()) out.add_term(e, c * pa);
  }
  out += directional_derivation(mirror.tau_tw, w);
  return out;
}

// D~_j summed directly over the classes of each shape
inline Series<CohClass> batyrev_closed_form(const ExtendedStackyFan& x, const RelationIdeal& ideal, std::size_t j,
                                            const Exponent& caps) {
  if (j >= x.index_count()) throw Error(ErrorKind::index_out_of_range, "divisor index out of range");
  Series<CohClass> out(caps);
  if (j < x.m()) {
    CohClass dj;
    Monomial mu(x.m(), 0);
    mu[j] = 1;
    dj.add(0, mu, Rat(1));
    out.add_term(Exponent(caps.size(), Rat(0)), ideal.reduce(dj));
  }
  for (const auto& pt : enumerate_keff(x, caps)) {
    const RatVector& d = pt.pairings;
    if (d[j] == 0) continue;
    std::vector<std::size_t> neg;
    Int ceil_sum = 0;
    bool integral = true;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (is_integer(d[i]) && d[i] < 0) neg.push_back(i);
      if (!is_integer(d[i])) integral = false;
      ceil_sum += ceil_of(d[i]);
    }
    const Rat coeff = c_coefficient(d) * d[j];
    CohClass term;
    if (integral && pt.degree == 0 && neg.size() == 1 && neg.front() < x.m()) {
      bool rest_nonneg = true;
      for (std::size_t i = 0; i < d.size(); ++i)
        if (i != neg.front() && d[i] < 0) rest_nonneg = false;
      if (!rest_nonneg) continue;
      Monomial mu(x.m(), 0);
      mu[neg.front()] = 1;
      term.add(0, mu, coeff);
    } else if (neg.empty() && ceil_sum == 1) {
      term.add(pt.sector, Monomial(x.m(), 0), coeff);
    } else {
      continue;
    }
    out.add_term(pt.exponent, ideal.reduce(term));
  }
  return out;
}

enum class Status { pass, fail, inconclusive, not_applicable };

constexpr std::string_view status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    case Status::not_applicable: return "not applicable";
  }
  return "unknown";
}

struct Verdict {
  std::string name;
  Status status = Status::fail;
  std::string detail;
};

template <typename Coeff>
Verdict compare_series(std::string name, const Series<Coeff>& a, const Series<Coeff>& b, const TrustedRegion& region) {
  if (region.empty()) return {std::move(name), Status::inconclusive, "empty trusted region"};
  Series<Coeff> diff(exponent_min(exponent_min(a.caps(), b.caps()), region.upper));
  for (const auto& [e, c] : a.terms())
    if (region.contains(e)) diff.add_term(e, c);
  for (const auto& [e, c] : b.terms())
    if (region.contains(e)) {
      Coeff neg = c;
      neg *= Rat(-1);
      diff.add_term(e, neg);
    }
  if (diff.is_zero()) return {std::move(name), Status::pass, ""};
  return {std::move(name), Status::fail, std::to_string(diff.terms().size()) + " differing coefficients"};
}

inline Verdict residual_verdict(std::string name, const Residual& r) {
  if (r.inconclusive()) return {std::move(name), Status::inconclusive, "empty trusted region"};
  if (r.vanishes()) return {std::move(name), Status::pass, ""};
  return {std::move(name), Status::fail, std::to_string(r.values.terms().size()) + " nonzero residual coefficients"};
}

struct SeidelReport {
  BundleData::Kind kind = BundleData::Kind::divisor;
  std::size_t index = 0;  // over rays then extension vectors
  Exponent caps;
  Series<Rat> g0;
  Series<Rat> g0_closed;
  Series<CohClass> g1_pullback;
  Series<CohClass> batyrev;
  Series<CohClass> batyrev_closed;
  Series<CohClass> seidel;
  Series<CohClass> rhs;
  std::vector<Verdict> verdicts;

  bool all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status == Status::pass; });
  }
};

inline Series<CohClass> pullback_series(const Series<CohClass>& s, const BundleData& b, const RelationIdeal& bi,
                                        const RelationIdeal& fi) {
  Series<CohClass> out(s.caps());
  for (const auto& [e, c] : s.terms()) out.add_term(e, pullback_fiber(c, b, bi, fi));
  return out;
}

inline Series<ZClass> pullback_series(const Series<ZClass>& s, const BundleData& b, const RelationIdeal& bi,
                                      const RelationIdeal& fi) {
  Series<ZClass> out(s.caps());
  for (const auto& [e, z] : s.terms()) {
    ZClass p;
    for (const auto& [zp, c] : z.powers()) p.add(zp, pullback_fiber(c, b, bi, fi));
    out.add_term(e, p);
  }
  return out;
}

// S~ for the bundle of index j (rays, then extension vectors), with every identity checked
inline SeidelReport seidel_element(const ExtendedStackyFan& x, const RelationIdeal& ideal, std::size_t j,
                                   const Exponent& caps, const Rat& y0_cap, const EnumerationOptions& opt = {}) {
  if (j >= x.index_count()) throw Error(ErrorKind::index_out_of_range, "bundle index out of range");
  SeidelReport rep;
  rep.kind = j < x.m() ? BundleData::Kind::divisor : BundleData::Kind::box;
  rep.index = j;
  rep.caps = caps;
  const BundleData b = rep.kind == BundleData::Kind::divisor ? bundle_divisor(x, j) : bundle_box(x, j - x.m());
  const RelationIdeal bi(b.total);
  Exponent total_caps = caps;
  total_caps.insert(total_caps.begin(), y0_cap);

  const Series<ZClass> ix = ifunction_reduced(x, ideal, caps, opt);
  const Series<ZClass> ie = ifunction_reduced(b.total, bi, total_caps, opt);
  const MirrorData mirror = extract_mirror(x, ideal, ix);
  auto& v = rep.verdicts;

  bool p0_ok = true;
  for (const auto& pt : enumerate_keff(b.total, total_caps, opt))
    p0_ok = p0_ok && is_integer(pt.exponent[0]) && pt.exponent[0] >= 0;
  v.push_back({"p0-integrality", p0_ok ? Status::pass : Status::fail, ""});

  v.push_back(residual_verdict("bundle-pde", bundle_pde_residual(b, bi, ie)));

  BundleExtraction ext;
  try {
    ext = extract_G1_and_g0(b, bi, ie);
    v.push_back({"y0-independence", Status::pass, ""});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::y0_dependence_detected) throw;
    v.push_back({"y0-independence", Status::fail, e.what()});
    return rep;
  }
  const TrustedRegion full{caps};
  v.push_back(compare_series("fiber-restriction", pullback_series(ext.restricted, b, bi, ideal), ix, full));
  bool g_agree = true;
  for (std::size_t a = 0; a < x.r(); ++a)
    g_agree = g_agree && compare_series("", ext.g[a], mirror.g[a], full).status == Status::pass;
  v.push_back({"mirror-map-agreement", g_agree ? Status::pass : Status::fail, ""});
  v.push_back(compare_series("twisted-agreement", pullback_series(ext.tau_tw, b, bi, ideal), mirror.tau_tw, full));

  const CorrectionTarget target{rep.kind, rep.kind == BundleData::Kind::divisor ? j : j - x.m()};
  rep.g0 = ext.g0;
  rep.g0_closed = g0_closed_form(x, target, caps);
  v.push_back(compare_series("g0-two-way", rep.g0, rep.g0_closed, full));

  rep.g1_pullback = pullback_series(ext.g1, b, bi, ideal);
  rep.batyrev = batyrev_derivative(mirror, x, ideal, j);
  rep.batyrev_closed = batyrev_closed_form(x, ideal, j, caps);
  v.push_back(compare_series("batyrev-two-way", rep.batyrev, rep.batyrev_closed, full));

  const Series<Rat> damp = series_exp(rep.g0, -1);
  rep.seidel = series_product(damp, rep.g1_pullback);
  if (rep.kind == BundleData::Kind::divisor) {
    v.push_back(compare_series("batyrev-equals-pullback", rep.batyrev, rep.g1_pullback, full));
    rep.rhs = series_product(damp, rep.batyrev);
    v.push_back(compare_series("seidel-identity", rep.seidel, rep.rhs, full));
  } else {
    const Exponent shift = x.exponents_of(dual_vector(x, j - x.m()));
    Exponent neg = shift;
    for (auto& s : neg) s = -s;
    const Series<CohClass> shifted = monomial_shift(rep.batyrev, neg, ShiftPolicy::allow_negative);
    const TrustedRegion region{exponent_sub(caps, shift)};
    v.push_back(compare_series("batyrev-equals-pullback", shifted, rep.g1_pullback, region));
    rep.rhs = series_product(damp, shifted);
    v.push_back(compare_series("seidel-identity", rep.seidel, rep.rhs, region));
  }
  return rep;
}

}  // namespace stacky_seidel
