#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "stacky_seidel/extended_fan.hpp"

namespace stacky_seidel {

using Monomial = std::vector<int>;  // exponents of D_1..D_M

inline int degree(const Monomial& mu) { return std::accumulate(mu.begin(), mu.end(), 0); }

inline Monomial operator+(const Monomial& a, const Monomial& b) {
  Monomial out(a);
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

struct TermKey {
  std::size_t sector = 0;
  Monomial monomial;

  auto operator<=>(const TermKey&) const = default;
};

// element of the twisted-sector module, sum of c * D^mu * 1_v
class CohClass {
 public:
  CohClass() = default;

  static CohClass unit(std::size_t sector, std::size_t symbols) {
    CohClass out;
    out.add(sector, Monomial(symbols, 0), Rat(1));
    return out;
  }

  void add(std::size_t sector, const Monomial& mu, const Rat& c) {
    if (c == 0) return;
    TermKey key{sector, mu};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), c);
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }

  const std::map<TermKey, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Rat coefficient(std::size_t sector, const Monomial& mu) const {
    auto it = terms_.find(TermKey{sector, mu});
    return it == terms_.end() ? Rat(0) : it->second;
  }

  CohClass& operator+=(const CohClass& o) {
    for (const auto& [k, c] : o.terms_) add(k.sector, k.monomial, c);
    return *this;
  }
  CohClass& operator-=(const CohClass& o) {
    for (const auto& [k, c] : o.terms_) add(k.sector, k.monomial, -c);
    return *this;
  }
  CohClass& operator*=(const Rat& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [k, c] : terms_) c *= s;
    return *this;
  }

  friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
  friend CohClass operator-(CohClass a, const CohClass& b) { return a -= b; }
  friend CohClass operator*(const Rat& s, CohClass a) { return a *= s; }
  friend bool operator==(const CohClass&, const CohClass&) = default;

 private:
  std::map<TermKey, Rat> terms_;
};

using DivisorPoly = std::map<Monomial, Rat>;

inline DivisorPoly linear_poly(const RatVector& coeffs) {
  DivisorPoly out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] == 0) continue;
    Monomial mu(coeffs.size(), 0);
    mu[i] = 1;
    out[mu] = coeffs[i];
  }
  return out;
}

// relations of every sector module Q[D_1..D_M] 1_v
class RelationIdeal {
 public:
  RelationIdeal() = default;

  RelationIdeal(const StackyFan& fan, std::vector<BoxElement> sectors, int degree_cap = -1)
      : fan_(fan), sectors_(std::move(sectors)), degree_cap_(degree_cap < 0 ? 2 * (fan.rank + 1) : degree_cap) {
    const std::size_t m = fan_.rays.size(), n = static_cast<std::size_t>(fan_.rank);
    for (std::size_t u = 0; u < n; ++u) {
      RatVector rel(m);
      for (std::size_t i = 0; i < m; ++i) rel[i] = Rat(fan_.rays[i][u]);
      linear_.push_back(std::move(rel));
    }
    sr_ = nonfaces_over({});
    for (const auto& s : sectors_) star_nonfaces_.push_back(nonfaces_over(s.minimal_cone));
    slices_.resize(sectors_.size());
    for (std::size_t s = 0; s < sectors_.size(); ++s)
      for (int k = 0; k <= sector_dimension(s); ++k) slices_[s].push_back(build_slice(s, k));
  }

  explicit RelationIdeal(const ExtendedStackyFan& x, int degree_cap = -1)
      : RelationIdeal(x.fan(), x.boxes(), degree_cap) {}

  std::size_t symbols() const { return fan_.rays.size(); }
  std::size_t sector_count() const { return sectors_.size(); }
  const BoxElement& sector(std::size_t s) const { return sectors_.at(s); }
  int degree_cap() const { return degree_cap_; }
  const std::vector<RatVector>& linear_relations() const { return linear_; }
  const std::vector<IndexSet>& sr_monomials() const { return sr_; }
  const std::vector<IndexSet>& sector_nonfaces(std::size_t s) const { return star_nonfaces_.at(s); }

  // rays i with {i} and the sector's cone not spanning a cone
  IndexSet sector_kill(std::size_t s) const {
    IndexSet out;
    for (const auto& nf : star_nonfaces_.at(s))
      if (nf.size() == 1) out.push_back(nf.front());
    return out;
  }

  int sector_dimension(std::size_t s) const {
    return fan_.rank - static_cast<int>(sectors_.at(s).minimal_cone.size());
  }

  std::size_t sector_of(const IntVector& v) const {
    for (std::size_t k = 0; k < sectors_.size(); ++k)
      if (sectors_[k].v == v) return k;
    throw Error(ErrorKind::not_a_box, "no sector for vector");
  }

  std::vector<Monomial> monomials(int deg) const {
    std::vector<Monomial> out;
    Monomial mu(symbols(), 0);
    enumerate(0, deg, mu, out);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  // rank of the degree-k part of the sector ideal
  std::size_t slice_rank(std::size_t s, int k) const { return build_slice(s, k).rows.size(); }

  // dimension over Q of the whole sector module
  std::size_t module_dimension(std::size_t s) const {
    std::size_t out = 0;
    for (const auto& sl : slices_.at(s)) out += sl.basis.size() - sl.rows.size();
    return out;
  }

  CohClass reduce(const CohClass& c) const {
    std::map<std::pair<std::size_t, int>, std::vector<std::pair<Monomial, Rat>>> groups;
    for (const auto& [key, coeff] : c.terms()) {
      if (key.sector >= sectors_.size() || key.monomial.size() != symbols())
        throw Error(ErrorKind::internal_error, "class term outside the ideal's ring");
      const int deg = degree(key.monomial);
      if (deg > sector_dimension(key.sector)) continue;
      if (Rat(2 * deg) + 2 * sectors_[key.sector].age > Rat(degree_cap_)) continue;
      groups[{key.sector, deg}].push_back({key.monomial, coeff});
    }
    CohClass out;
    for (const auto& [sd, terms] : groups) {
      const Slice& sl = slices_[sd.first][static_cast<std::size_t>(sd.second)];
      RatVector vec(sl.basis.size(), Rat(0));
      for (const auto& [mu, coeff] : terms) vec[sl.index.at(mu)] += coeff;
      for (const auto& [piv, row] : sl.rows) {
        if (vec[piv] == 0) continue;
        const Rat f = vec[piv];
        for (std::size_t j = 0; j < vec.size(); ++j)
          if (row[j] != 0) vec[j] -= f * row[j];
      }
      for (std::size_t j = 0; j < vec.size(); ++j) out.add(sd.first, sl.basis[j], vec[j]);
    }
    return out;
  }

 private:
  struct Slice {
    std::vector<Monomial> basis;
    std::map<Monomial, std::size_t> index;
    std::vector<std::pair<std::size_t, RatVector>> rows;  // reduced echelon rows keyed by pivot
  };

  void enumerate(std::size_t i, int left, Monomial& mu, std::vector<Monomial>& out) const {
    if (i + 1 == mu.size() || mu.empty()) {
      if (mu.empty()) {
        if (left == 0) out.push_back(mu);
        return;
      }
      mu[i] = left;
      out.push_back(mu);
      mu[i] = 0;
      return;
    }
    for (int e = left; e >= 0; --e) {
      mu[i] = e;
      enumerate(i + 1, left - e, mu, out);
    }
    mu[i] = 0;
  }

  // minimal S, disjoint from base, with S + base not a cone
  std::vector<IndexSet> nonfaces_over(const IndexSet& base) const {
    const std::size_t m = fan_.rays.size();
    IndexSet free;
    for (std::size_t i = 0; i < m; ++i)
      if (!std::binary_search(base.begin(), base.end(), static_cast<int>(i))) free.push_back(static_cast<int>(i));
    std::vector<IndexSet> out;
    const std::size_t max_size = std::min(free.size(), static_cast<std::size_t>(fan_.rank) + 1);
    for (std::size_t k = 1; k <= max_size; ++k) {
      std::vector<bool> pick(free.size(), false);
      std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        IndexSet s;
        for (std::size_t t = 0; t < free.size(); ++t)
          if (pick[t]) s.push_back(free[t]);
        if (std::any_of(out.begin(), out.end(), [&](const IndexSet& o) { return is_subset(o, s); })) continue;
        IndexSet u = s;
        u.insert(u.end(), base.begin(), base.end());
        std::sort(u.begin(), u.end());
        if (!is_face(fan_, u)) out.push_back(s);
      } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  Slice build_slice(std::size_t s, int k) const {
    Slice sl;
    sl.basis = monomials(k);
    for (std::size_t j = 0; j < sl.basis.size(); ++j) sl.index[sl.basis[j]] = j;
    std::vector<RatVector> gens;
    const auto& nonfaces = star_nonfaces_[s];
    for (std::size_t j = 0; j < sl.basis.size(); ++j) {
      const Monomial& mu = sl.basis[j];
      const bool killed = std::any_of(nonfaces.begin(), nonfaces.end(), [&](const IndexSet& nf) {
        return std::all_of(nf.begin(), nf.end(), [&](int i) { return mu[static_cast<std::size_t>(i)] > 0; });
      });
      if (killed) {
        RatVector g(sl.basis.size(), Rat(0));
        g[j] = 1;
        gens.push_back(std::move(g));
      }
    }
    if (k >= 1)
      for (const auto& nu : monomials(k - 1))
        for (const auto& rel : linear_) {
          RatVector g(sl.basis.size(), Rat(0));
          bool any = false;
          for (std::size_t i = 0; i < rel.size(); ++i) {
            if (rel[i] == 0) continue;
            Monomial mu = nu;
            ++mu[i];
            g[sl.index.at(mu)] += rel[i];
            any = true;
          }
          if (any) gens.push_back(std::move(g));
        }
    RatMatrix a(gens.size(), sl.basis.size());
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = 0; j < sl.basis.size(); ++j) a(i, j) = gens[i][j];
    const auto piv = detail::rref(a);
    for (std::size_t i = 0; i < piv.size(); ++i) sl.rows.push_back({piv[i], a.row(i)});
    return sl;
  }

  StackyFan fan_;
  std::vector<BoxElement> sectors_;
  int degree_cap_ = 0;
  std::vector<RatVector> linear_;
  std::vector<IndexSet> sr_;
  std::vector<std::vector<IndexSet>> star_nonfaces_;
  std::vector<std::vector<Slice>> slices_;
};

inline CohClass reduce_class(const CohClass& c, const RelationIdeal& ideal) { return ideal.reduce(c); }

inline CohClass module_multiply(const CohClass& c, const DivisorPoly& p, const RelationIdeal& ideal) {
  CohClass out;
  for (const auto& [key, a] : c.terms())
    for (const auto& [mu, b] : p) out.add(key.sector, key.monomial + mu, a * b);
  return ideal.reduce(out);
}

// restriction to the fiber over the fixed point of the upward ray
inline CohClass pullback_fiber(const CohClass& c, const BundleData& bundle, const RelationIdeal& bundle_ideal,
                               const RelationIdeal& fiber_ideal) {
  const std::size_t m = bundle.fiber_rays();
  CohClass out;
  for (const auto& [key, a] : c.terms()) {
    if (key.monomial[m] > 0 || key.monomial[m + 1] > 0) continue;
    const IntVector& v = bundle_ideal.sector(key.sector).v;
    if (v.back() != 0) throw Error(ErrorKind::sector_projection_failure, "sector does not project to the fiber");
    const IntVector fv(v.begin(), v.end() - 1);
    std::size_t s = 0;
    try {
      s = fiber_ideal.sector_of(fv);
    } catch (const Error&) {
      throw Error(ErrorKind::sector_projection_failure, "projected sector is not a fiber box element");
    }
    out.add(s, Monomial(key.monomial.begin(), key.monomial.begin() + static_cast<std::ptrdiff_t>(m)), a);
  }
  return fiber_ideal.reduce(out);
}

}  // namespace stacky_seidel
