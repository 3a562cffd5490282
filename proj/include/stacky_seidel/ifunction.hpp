#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "stacky_seidel/keff.hpp"

namespace stacky_seidel {

// polynomial in D-symbols with Laurent coefficients in z, keyed by (z power, monomial)
using ZPoly = std::map<std::pair<int, Monomial>, Rat>;

inline void zpoly_add(ZPoly& p, int zpow, const Monomial& mu, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = p.try_emplace({zpow, mu}, c);
  if (fresh) return;
  it->second += c;
  if (it->second == 0) p.erase(it);
}

inline ZPoly zpoly_multiply(const ZPoly& a, const ZPoly& b, int max_degree) {
  ZPoly out;
  for (const auto& [ka, ca] : a)
    for (const auto& [kb, cb] : b) {
      Monomial mu = ka.second + kb.second;
      if (degree(mu) > max_degree) continue;
      zpoly_add(out, ka.first + kb.first, mu, ca * cb);
    }
  return out;
}

inline ZPoly zpoly_constant(std::size_t symbols, const Rat& c = 1, int zpow = 0) {
  ZPoly out;
  zpoly_add(out, zpow, Monomial(symbols, 0), c);
  return out;
}

// class + scalar * z, class given by linear coefficients over the symbols
inline ZPoly zpoly_linear(const RatVector& cls, const Rat& scalar) {
  ZPoly out;
  for (std::size_t i = 0; i < cls.size(); ++i) {
    if (cls[i] == 0) continue;
    Monomial mu(cls.size(), 0);
    mu[i] = 1;
    zpoly_add(out, 0, mu, cls[i]);
  }
  zpoly_add(out, 1, Monomial(cls.size(), 0), scalar);
  return out;
}

inline ZClass zpoly_apply(const ZPoly& op, const ZClass& x, const RelationIdeal& ideal) {
  std::map<int, CohClass> raw;
  for (const auto& [zp, cls] : x.powers())
    for (const auto& [key, c] : op)
      for (const auto& [term, a] : cls.terms()) raw[zp + key.first].add(term.sector, term.monomial + key.second, a * c);
  ZClass out;
  for (const auto& [zp, cls] : raw) out.add(zp, ideal.reduce(cls));
  return out;
}

// w(d) = sum_i ceil(d_i) + #{i : d_i negative integer}
inline int z_order(const RatVector& d) {
  Int w = 0;
  for (const auto& x : d) {
    w += ceil_of(x);
    if (is_integer(x) && x < 0) w += 1;
  }
  return static_cast<int>(to_long(w));
}

// leading coefficient of the hypergeometric factor
inline Rat c_coefficient(const RatVector& d) {
  Rat c = 1;
  for (const auto& x : d) {
    if (x < 0) {
      for (Int k = ceil_of(x); k < 0; ++k) {
        const Rat f = x - Rat(k);
        if (f != 0) c *= f;
      }
    } else {
      for (Int k = 0; Rat(k) < x; ++k) c /= x - Rat(k);
    }
  }
  return c;
}

struct FactorExpansion {
  int leading_z_power = 0;  // -w(d)
  Rat leading_coefficient;  // C_d
  Monomial class_factor;    // product of D_i over negative integral d_i
  ZPoly expansion;          // full Laurent expansion, truncated above max_degree in D
};

// product over i of prod_{k<=0}(D_i + kz) / prod_{k<=d_i}(D_i + kz), k = d_i mod 1;
// indices >= symbols carry the zero class
inline FactorExpansion factor_expansion(std::size_t symbols, const RatVector& d, int max_degree) {
  FactorExpansion out;
  out.leading_z_power = -z_order(d);
  out.leading_coefficient = c_coefficient(d);
  out.class_factor = Monomial(symbols, 0);
  for (std::size_t i = 0; i < symbols && i < d.size(); ++i)
    if (is_integer(d[i]) && d[i] < 0) out.class_factor[i] = 1;

  ZPoly acc = zpoly_constant(symbols);
  for (std::size_t i = 0; i < d.size() && !acc.empty(); ++i) {
    const Rat& x = d[i];
    const bool has_class = i < symbols;
    Monomial unit(symbols, 0);
    if (has_class) unit[i] = 1;
    if (x > 0) {
      for (Rat k = x; k > 0; k -= 1) {
        ZPoly inv;
        if (!has_class) {
          zpoly_add(inv, -1, Monomial(symbols, 0), Rat(1) / k);
        } else {
          Monomial pw(symbols, 0);
          Rat coeff = Rat(1) / k;
          for (int t = 0; t <= max_degree; ++t) {
            zpoly_add(inv, -t - 1, pw, coeff);
            ++pw[i];
            coeff /= -k;
          }
        }
        acc = zpoly_multiply(acc, inv, max_degree);
      }
    } else if (x < 0) {
      for (Rat k = x + 1; k <= 0; k += 1) {
        ZPoly lin;
        if (has_class) zpoly_add(lin, 0, unit, Rat(1));
        zpoly_add(lin, 1, Monomial(symbols, 0), k);
        acc = zpoly_multiply(acc, lin, max_degree);
      }
    }
  }
  out.expansion = std::move(acc);
  return out;
}

inline ZClass place_on_sector(const ZPoly& p, std::size_t sector, const RelationIdeal& ideal) {
  std::map<int, CohClass> raw;
  for (const auto& [key, c] : p) raw[key.first].add(sector, key.second, c);
  ZClass out;
  for (const auto& [zp, cls] : raw) out.add(zp, ideal.reduce(cls));
  return out;
}

// reduced I-function, the factor exp(sum p_a log y_a / z) stripped
inline Series<ZClass> ifunction_reduced(const ExtendedStackyFan& x, const RelationIdeal& ideal, const Exponent& caps,
                                        const EnumerationOptions& opt = {}) {
  Series<ZClass> out(caps);
  const int max_degree = static_cast<int>(x.n());
  for (const auto& pt : enumerate_keff(x, caps, opt)) {
    const FactorExpansion f = factor_expansion(x.m(), pt.pairings, max_degree);
    out.add_term(pt.exponent, place_on_sector(f.expansion, pt.sector, ideal));
  }
  return out;
}

// linear class of sum_a m_ia p_a over the ray symbols, one row per index i
inline std::vector<RatVector> operator_classes(const ExtendedStackyFan& x) {
  const std::size_t big_r = x.variables();
  std::vector<RatVector> p_class(big_r, RatVector(x.m(), Rat(0)));
  for (std::size_t a = 0; a < big_r; ++a)
    for (std::size_t k = 0; k < x.m(); ++k) p_class[a][k] = x.p_basis()(a, k);
  std::vector<RatVector> out(x.index_count(), RatVector(x.m(), Rat(0)));
  for (std::size_t i = 0; i < x.index_count(); ++i)
    for (std::size_t a = 0; a < big_r; ++a)
      for (std::size_t k = 0; k < x.m(); ++k) out[i][k] += x.divisor_matrix()(i, a) * p_class[a][k];
  return out;
}

struct Residual {
  Series<ZClass> values;  // restricted to the trusted region
  TrustedRegion region;

  bool inconclusive() const { return region.empty(); }
  bool vanishes() const { return !region.empty() && values.is_zero(); }
};

// sum over terms of op(pi(e)) * I_e placed at e + offset
inline Series<ZClass> apply_conjugated(const ExtendedStackyFan& x, const RelationIdeal& ideal,
                                       const Series<ZClass>& ifn, const Exponent& offset, const Exponent& out_caps,
                                       const std::function<ZPoly(const RatVector&)>& op) {
  Series<ZClass> out(out_caps);
  for (const auto& [e, z] : ifn.terms()) out.add_term(exponent_add(e, offset), zpoly_apply(op(x.pairings_of(e)), z, ideal));
  return out;
}

// y^d prod_{d_i<0} prod_{k<-d_i} (D_i - kz) I - prod_{d_i>0} prod_{k<d_i} (D_i - kz) I
inline Residual pd_operator_residual(const ExtendedStackyFan& x, const RelationIdeal& ideal,
                                     const Series<ZClass>& ifn, const RatVector& d) {
  if (d.size() != x.index_count()) throw Error(ErrorKind::index_out_of_range, "relation vector has wrong length");
  for (const auto& v : d)
    if (!is_integer(v)) throw Error(ErrorKind::non_integral_d, "relation vector is not integral");
  for (std::size_t k = 0; k < x.n(); ++k) {
    Rat s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += Rat(x.beta()(k, i)) * d[i];
    if (s != 0) throw Error(ErrorKind::non_integral_d, "relation vector is not in the kernel");
  }
  const auto classes = operator_classes(x);
  const int max_degree = static_cast<int>(x.n());
  const Exponent shift = x.exponents_of(d);
  const Exponent& caps = ifn.caps();
  const Exponent zero(caps.size(), Rat(0));
  const Exponent big_caps = exponent_add(caps, [&] {
    Exponent s = shift;
    for (auto& v : s) v = std::max(v, Rat(0));
    return s;
  }());

  auto side = [&](bool negative) {
    return [&, negative](const RatVector& pi) {
      ZPoly acc = zpoly_constant(x.m());
      for (std::size_t i = 0; i < d.size(); ++i) {
        const bool take = negative ? d[i] < 0 : d[i] > 0;
        if (!take) continue;
        const long count = to_long(abs(d[i].get_num()));
        for (long k = 0; k < count; ++k) acc = zpoly_multiply(acc, zpoly_linear(classes[i], pi[i] - Rat(k)), max_degree);
      }
      return acc;
    };
  };
  Series<ZClass> lhs = apply_conjugated(x, ideal, ifn, shift, big_caps, side(true));
  Series<ZClass> rhs = apply_conjugated(x, ideal, ifn, zero, big_caps, side(false));
  Exponent upper = caps;
  for (std::size_t a = 0; a < upper.size(); ++a) upper[a] += std::min(shift[a], Rat(0));
  TrustedRegion region{upper};
  return {(lhs - rhs).restricted(region), region};
}

enum class BoxOperator { from_divisor_matrix, with_y0_term };

// z y_0^{-1} (y_0 d_0)^2 I - y^{delta} y_0^{-1} (sum_a m_la y_a d_a) I on the total space
inline Residual bundle_pde_residual(const BundleData& b, const RelationIdeal& ideal, const Series<ZClass>& ifn,
                                    BoxOperator variant = BoxOperator::from_divisor_matrix) {
  const ExtendedStackyFan& x = b.total;
  const std::size_t m = b.fiber_rays();
  const std::size_t ell = b.kind == BundleData::Kind::divisor ? b.index : m + 2 + b.index;
  const int max_degree = static_cast<int>(x.n());
  const std::size_t big_r = x.variables();

  RatVector delta(x.index_count(), Rat(0));
  delta[ell] = -1;
  delta[b.new_ray_up()] = 1;
  delta[b.new_ray_down()] = 1;
  const Exponent t_delta = x.exponents_of(delta);
  ensure(t_delta[0] == 1, "bundle relation has the wrong y_0 degree");
  Exponent e0(big_r, Rat(0));
  e0[0] = 1;

  RatVector p0_class(x.m(), Rat(0));
  for (std::size_t k = 0; k < x.m(); ++k) p0_class[k] = x.p_basis()(0, k);
  RatVector weights = x.divisor_matrix().row(ell);
  if (variant == BoxOperator::with_y0_term && b.kind == BundleData::Kind::box) weights[0] -= 1;
  RatVector op_class(x.m(), Rat(0));
  for (std::size_t a = 0; a < big_r; ++a)
    for (std::size_t k = 0; k < x.m(); ++k) op_class[k] += weights[a] * x.p_basis()(a, k);

  const Exponent& caps = ifn.caps();
  Exponent lhs_offset(big_r, Rat(0));
  lhs_offset[0] = -1;
  const Exponent rhs_offset = exponent_sub(t_delta, e0);
  Exponent out_caps = caps;
  for (std::size_t a = 0; a < big_r; ++a) out_caps[a] += std::max(Rat(0), rhs_offset[a]);

  auto lhs_op = [&](const RatVector& pi) {
    const Exponent t = x.exponents_of(pi);
    ZPoly lin = zpoly_linear(p0_class, t[0]);
    ZPoly sq = zpoly_multiply(lin, lin, max_degree);
    ZPoly out;
    for (const auto& [k, c] : sq) zpoly_add(out, k.first - 1, k.second, c);
    return out;
  };
  auto rhs_op = [&](const RatVector& pi) {
    const Exponent t = x.exponents_of(pi);
    Rat scalar = 0;
    for (std::size_t a = 0; a < big_r; ++a) scalar += weights[a] * t[a];
    ZPoly out;
    for (std::size_t k = 0; k < op_class.size(); ++k) {
      if (op_class[k] == 0) continue;
      Monomial mu(op_class.size(), 0);
      mu[k] = 1;
      zpoly_add(out, -1, mu, op_class[k]);
    }
    zpoly_add(out, 0, Monomial(op_class.size(), 0), scalar);
    return out;
  };
  Series<ZClass> lhs = apply_conjugated(x, ideal, ifn, lhs_offset, out_caps, lhs_op);
  Series<ZClass> rhs = apply_conjugated(x, ideal, ifn, rhs_offset, out_caps, rhs_op);
  Exponent upper = exponent_sub(caps, e0);
  for (std::size_t a = 0; a < big_r; ++a) upper[a] = std::min(upper[a], Rat(caps[a] + rhs_offset[a]));
  TrustedRegion region{upper};
  return {(lhs - rhs).restricted(region), region};
}

}  // namespace stacky_seidel
