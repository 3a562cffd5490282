#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stacky_seidel/stacky_fan.hpp"

namespace stacky_seidel {

// s_j together with a choice of anticone I_j and the coefficients c_ji (one per ray, zero on I_j)
struct ExtensionVector {
  IntVector vector;
  IndexSet anticone;  // over rays and extension indices 0..m+l-1
  RatVector c;
};

struct BuildOptions {
  bool allow_non_weak_fano = false;
  bool require_integral_basis = true;
  bool require_nef_basis = true;
};

class ExtendedStackyFan {
 public:
  static ExtendedStackyFan build(StackyFan fan, std::vector<ExtensionVector> ext, RatMatrix p_basis,
                                 const BuildOptions& opt = {});

  const StackyFan& fan() const { return fan_; }
  std::size_t n() const { return static_cast<std::size_t>(fan_.rank); }
  std::size_t m() const { return fan_.rays.size(); }
  std::size_t l() const { return ext_.size(); }
  std::size_t r() const { return m() - n(); }
  // number of Novikov variables, r + l
  std::size_t variables() const { return m() + l() - n(); }
  std::size_t index_count() const { return m() + l(); }

  const std::vector<ExtensionVector>& extension() const { return ext_; }
  const IntMatrix& beta() const { return beta_; }
  const RatMatrix& p_basis() const { return p_basis_; }
  const std::vector<IntVector>& lattice_basis() const { return kernel_; }
  // m_ia: D^S_i = sum_a m_ia p^S_a
  const RatMatrix& divisor_matrix() const { return divisor_; }
  const RatVector& rho() const { return rho_; }
  const std::vector<BoxElement>& boxes() const { return boxes_; }
  const Int& scale() const { return scale_; }
  bool weak_fano() const { return weak_fano_; }
  bool nef_basis() const { return nef_basis_; }
  const std::vector<IndexSet>& minimal_anticones() const { return minimal_anticones_; }

  RatVector pairings_of(const RatVector& exponents) const { return divisor_.apply(exponents); }
  RatVector exponents_of(const RatVector& pairings) const { return p_basis_.apply(pairings); }

  // upward closed: contains every extension index and the remaining rays span a cone
  bool is_anticone(const IndexSet& s) const {
    return std::any_of(minimal_anticones_.begin(), minimal_anticones_.end(),
                       [&](const IndexSet& a) { return is_subset(a, s); });
  }

  std::size_t sector_of(const IntVector& v) const {
    for (std::size_t k = 0; k < boxes_.size(); ++k)
      if (boxes_[k].v == v) return k;
    throw Error(ErrorKind::not_a_box, "vector is not a box element");
  }

  // sum_i <u, b^S_i> m_ia == 0 for every u
  bool gale_exact() const {
    for (std::size_t u = 0; u < n(); ++u)
      for (std::size_t a = 0; a < variables(); ++a) {
        Rat s = 0;
        for (std::size_t i = 0; i < index_count(); ++i) s += Rat(beta_(u, i)) * divisor_(i, a);
        if (s != 0) return false;
      }
    return true;
  }

 private:
  StackyFan fan_;
  std::vector<ExtensionVector> ext_;
  IntMatrix beta_;
  RatMatrix p_basis_;
  std::vector<IntVector> kernel_;
  RatMatrix divisor_;
  RatVector rho_;
  std::vector<BoxElement> boxes_;
  Int scale_ = 1;
  bool weak_fano_ = false;
  bool nef_basis_ = false;
  std::vector<IndexSet> minimal_anticones_;
};

// pairings of D^S_{m+j}^vee: 1 at m+j, -c_ji off the anticone
inline RatVector dual_vector(const ExtendedStackyFan& x, std::size_t j) {
  if (j >= x.l()) throw Error(ErrorKind::index_out_of_range, "extension index out of range");
  RatVector d(x.index_count(), Rat(0));
  d[x.m() + j] = 1;
  for (std::size_t i = 0; i < x.m(); ++i) d[i] = -x.extension()[j].c[i];
  return d;
}

// the defining clauses of D^S_{m+j}^vee, plus membership in (1/M) L^S
inline bool dual_vector_holds(const ExtendedStackyFan& x, std::size_t j, const RatVector& d) {
  if (d.size() != x.index_count() || d[x.m() + j] != 1) return false;
  for (int i : x.extension()[j].anticone)
    if (static_cast<std::size_t>(i) != x.m() + j && d[static_cast<std::size_t>(i)] != 0) return false;
  for (std::size_t k = 0; k < x.n(); ++k) {
    Rat s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) s += Rat(x.beta()(k, i)) * d[i];
    if (s != 0) return false;
  }
  for (const auto& v : d)
    if (!is_integer(v * Rat(x.scale()))) return false;
  return true;
}

inline bool in_cone_of_rows(const ExtendedStackyFan& x, const RatVector& p, const IndexSet& rows) {
  std::vector<RatVector> gens;
  for (int i : rows) gens.push_back(x.divisor_matrix().row(static_cast<std::size_t>(i)));
  return cone_member(p, gens);
}

inline ExtendedStackyFan ExtendedStackyFan::build(StackyFan fan, std::vector<ExtensionVector> ext,
                                                  RatMatrix p_basis, const BuildOptions& opt) {
  require_valid(fan);
  ExtendedStackyFan x;
  x.fan_ = std::move(fan);
  x.boxes_ = box_elements(x.fan_);
  const std::size_t n = x.n(), m = x.m(), l = ext.size();

  for (std::size_t j = 0; j < l; ++j) {
    auto& e = ext[j];
    const std::string tag = "extension " + std::to_string(j + 1);
    if (e.vector.size() != n) throw Error(ErrorKind::validation_error, tag + " has wrong dimension");
    if (e.c.size() != m) throw Error(ErrorKind::validation_error, tag + " needs one coefficient per ray");
    for (std::size_t k = 0; k < l; ++k) e.anticone.push_back(static_cast<int>(m + k));
    std::sort(e.anticone.begin(), e.anticone.end());
    e.anticone.erase(std::unique(e.anticone.begin(), e.anticone.end()), e.anticone.end());
    IndexSet complement;
    for (std::size_t i = 0; i < m; ++i) {
      const bool in_i = std::binary_search(e.anticone.begin(), e.anticone.end(), static_cast<int>(i));
      if (e.c[i] < 0 || e.c[i] >= 1) throw Error(ErrorKind::validation_error, tag + ": coefficients must lie in [0,1)");
      if (in_i && e.c[i] != 0)
        throw Error(ErrorKind::inconsistent_anticone, tag + ": nonzero coefficient on an anticone ray");
      if (!in_i) complement.push_back(static_cast<int>(i));
    }
    for (int i : e.anticone)
      if (i < 0 || static_cast<std::size_t>(i) >= m + l)
        throw Error(ErrorKind::validation_error, tag + ": anticone index out of range");
    if (!is_face(x.fan_, complement))
      throw Error(ErrorKind::inconsistent_anticone, tag + ": complement of the anticone is not a cone");
    for (std::size_t k = 0; k < n; ++k) {
      Rat s = 0;
      for (std::size_t i = 0; i < m; ++i) s += e.c[i] * Rat(x.fan_.rays[i][k]);
      if (s != Rat(e.vector[k]))
        throw Error(ErrorKind::inconsistent_anticone, tag + ": coefficients do not reproduce the vector");
    }
    const auto box = as_box(x.fan_, e.vector);
    if (!box || box->is_zero()) throw Error(ErrorKind::validation_error, tag + " is not a nonzero box element");
    if (box->age > 1) throw Error(ErrorKind::validation_error, tag + " has age greater than one");
  }
  x.ext_ = std::move(ext);

  x.beta_ = IntMatrix(n, m + l);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) x.beta_(k, i) = x.fan_.rays[i][k];
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t k = 0; k < n; ++k) x.beta_(k, m + j) = x.ext_[j].vector[k];
  const auto snf = smith_normal_form(x.beta_);
  bool generates = snf.rank == n;
  for (std::size_t k = 0; k < snf.rank; ++k) generates = generates && snf.d(k, k) == 1;
  if (!generates) throw Error(ErrorKind::validation_error, "rays and extension vectors do not generate the lattice");

  x.kernel_ = kernel_basis(x.beta_);
  const std::size_t big_r = m + l - n;
  ensure(x.kernel_.size() == big_r, "kernel has unexpected rank");
  if (p_basis.rows() != big_r || p_basis.cols() != m + l)
    throw Error(ErrorKind::validation_error, "p_basis must have " + std::to_string(big_r) + " rows of length " +
                                                 std::to_string(m + l));
  x.p_basis_ = std::move(p_basis);

  RatMatrix k_mat(m + l, big_r);
  for (std::size_t a = 0; a < big_r; ++a)
    for (std::size_t i = 0; i < m + l; ++i) k_mat(i, a) = Rat(x.kernel_[a][i]);
  const RatMatrix pairing = x.p_basis_ * k_mat;
  const auto pinv = inverse(pairing);
  if (!pinv) throw Error(ErrorKind::non_integral_basis, "p_basis is linearly dependent on the kernel lattice");
  if (opt.require_integral_basis) {
    for (std::size_t a = 0; a < big_r; ++a)
      for (std::size_t b = 0; b < big_r; ++b)
        if (!is_integer(pairing(a, b)))
          throw Error(ErrorKind::non_integral_basis, "p_basis is not integral on the kernel lattice");
    const Rat det = determinant(pairing);
    if (det != 1 && det != -1) throw Error(ErrorKind::non_integral_basis, "p_basis is not a lattice basis");
  }
  x.divisor_ = k_mat * *pinv;
  if (opt.require_integral_basis)
    for (std::size_t i = 0; i < m + l; ++i)
      for (std::size_t a = 0; a < big_r; ++a)
        if (!is_integer(x.divisor_(i, a))) throw Error(ErrorKind::non_integral_basis, "non-integral m_ia");

  const std::size_t r = m - n;
  for (std::size_t j = 0; j < l; ++j)
    for (std::size_t a = 0; a < r; ++a)
      if (x.divisor_(m + j, a) != 0)
        throw Error(ErrorKind::validation_error,
                    "last l basis vectors must span the extension divisors (p_" + std::to_string(a + 1) + ")");

  for (std::size_t j = 0; j < l; ++j) {
    const RatVector d = dual_vector(x, j);
    for (std::size_t k = 0; k < n; ++k) {
      Rat s = 0;
      for (std::size_t i = 0; i < m + l; ++i) s += Rat(x.beta_(k, i)) * d[i];
      if (s != 0) throw Error(ErrorKind::inconsistent_anticone, "dual vector violates the kernel relation");
    }
  }

  x.rho_ = RatVector(big_r, Rat(0));
  for (std::size_t i = 0; i < m + l; ++i)
    for (std::size_t a = 0; a < big_r; ++a) x.rho_[a] += x.divisor_(i, a);

  x.scale_ = 1;
  for (const auto& cone : x.fan_.max_cones) x.scale_ = lcm_of(x.scale_, cone_index(x.fan_, cone));
  for (const auto& b : x.boxes_)
    for (const auto& c : b.coords)
      if (!mpz_divisible_p(x.scale_.get_mpz_t(), c.get_den_mpz_t()))
        throw Error(ErrorKind::scale_too_small, "box denominators do not divide the scale");

  for (const auto& cone : x.fan_.max_cones) {
    IndexSet a;
    for (std::size_t i = 0; i < m + l; ++i)
      if (!std::binary_search(cone.begin(), cone.end(), static_cast<int>(i))) a.push_back(static_cast<int>(i));
    x.minimal_anticones_.push_back(std::move(a));
  }
  std::sort(x.minimal_anticones_.begin(), x.minimal_anticones_.end());

  x.weak_fano_ = std::all_of(x.minimal_anticones_.begin(), x.minimal_anticones_.end(),
                             [&](const IndexSet& a) { return in_cone_of_rows(x, x.rho_, a); });

  x.nef_basis_ = true;
  for (std::size_t a = 0; a < big_r; ++a) {
    RatVector unit(big_r, Rat(0));
    unit[a] = 1;
    for (const auto& anti : x.minimal_anticones_) x.nef_basis_ = x.nef_basis_ && in_cone_of_rows(x, unit, anti);
    if (a >= r) {
      IndexSet ext_rows;
      for (std::size_t j = 0; j < l; ++j) ext_rows.push_back(static_cast<int>(m + j));
      x.nef_basis_ = x.nef_basis_ && in_cone_of_rows(x, unit, ext_rows);
    }
  }
  if (opt.require_nef_basis && !x.nef_basis_)
    throw Error(ErrorKind::validation_error, "p_basis does not lie in the closed extended Kahler cone");
  if (!opt.allow_non_weak_fano && !x.weak_fano_)
    throw Error(ErrorKind::weak_fano_violation, "the extended first Chern class is not in the closed Kahler cone");
  return x;
}

inline bool weak_fano_check(const ExtendedStackyFan& x) { return x.weak_fano(); }

struct DivisorImages {
  RatMatrix m;                   // m_ia over all a
  std::vector<RatVector> images;  // D_i over a < r
  RatVector rho;
};

inline DivisorImages divisor_images(const ExtendedStackyFan& x) {
  DivisorImages out{x.divisor_matrix(), {}, x.rho()};
  for (std::size_t i = 0; i < x.index_count(); ++i) {
    RatVector v = x.divisor_matrix().row(i);
    v.resize(x.r());
    out.images.push_back(std::move(v));
  }
  return out;
}

struct Reduction {
  BoxElement box;
  std::size_t sector = 0;
};

// v(d) = sum_i {-d_i} b_i
inline Reduction reduction_v(const ExtendedStackyFan& x, const RatVector& d) {
  if (d.size() != x.index_count()) throw Error(ErrorKind::index_out_of_range, "pairing vector has wrong length");
  for (std::size_t j = 0; j < x.l(); ++j)
    if (!is_integer(d[x.m() + j])) throw Error(ErrorKind::not_in_k, "extension pairing is not integral");
  for (std::size_t k = 0; k < x.n(); ++k) {
    Rat s = 0;
    for (std::size_t i = 0; i < x.index_count(); ++i) s += Rat(x.beta()(k, i)) * d[i];
    if (s != 0) throw Error(ErrorKind::not_in_k, "pairings violate the kernel relation");
  }
  IndexSet frac_support;
  RatVector v(x.n(), Rat(0));
  for (std::size_t i = 0; i < x.m(); ++i) {
    const Rat f = frac_of(-d[i]);
    if (f == 0) continue;
    frac_support.push_back(static_cast<int>(i));
    for (std::size_t k = 0; k < x.n(); ++k) v[k] += f * Rat(x.fan().rays[i][k]);
  }
  if (!is_face(x.fan(), frac_support)) throw Error(ErrorKind::not_in_k, "non-integral pairings do not span a cone");
  IntVector vi(x.n());
  for (std::size_t k = 0; k < x.n(); ++k) {
    if (!is_integer(v[k])) throw Error(ErrorKind::not_a_box, "reduction is not a lattice point");
    vi[k] = v[k].get_num();
  }
  const std::size_t s = x.sector_of(vi);
  if (x.boxes()[s].minimal_cone != frac_support) throw Error(ErrorKind::not_a_box, "reduction has the wrong support");
  return {x.boxes()[s], s};
}

struct BundleData {
  enum class Kind { divisor, box };

  Kind kind = Kind::divisor;
  std::size_t index = 0;  // ray index (divisor) or extension index (box), 0-based
  ExtendedStackyFan total;
  RatVector shift;  // c_i per fiber ray
  Int n_j = 1;
  // D^S_i of the total space, in its index order, as (fiber p-coordinates, weight on the extra factor)
  std::vector<std::pair<RatVector, Rat>> weights;

  std::size_t fiber_rays() const { return shift.size(); }
  std::size_t new_ray_up() const { return fiber_rays(); }
  std::size_t new_ray_down() const { return fiber_rays() + 1; }

  // fiber pairings d of a class with total-space pairings pi
  RatVector fiber_pairings(const RatVector& pi) const {
    const std::size_t m = fiber_rays();
    RatVector d;
    for (std::size_t i = 0; i < m; ++i) d.push_back(pi[i] + shift[i] * pi[m]);
    for (std::size_t k = m + 2; k < pi.size(); ++k) d.push_back(pi[k]);
    return d;
  }
};

namespace detail {

inline BundleData make_bundle(const ExtendedStackyFan& x, BundleData::Kind kind, std::size_t index, RatVector c) {
  if (!x.weak_fano()) throw Error(ErrorKind::weak_fano_violation, "bundles need a weak Fano fiber");
  const std::size_t n = x.n(), m = x.m(), l = x.l(), big_r = x.variables();
  StackyFan fan;
  fan.rank = static_cast<int>(n + 1);
  for (const auto& b : x.fan().rays) {
    IntVector v = b;
    v.push_back(0);
    fan.rays.push_back(std::move(v));
  }
  IntVector up(n + 1, Int(0));
  up[n] = 1;
  fan.rays.push_back(up);
  RatVector down(n, Rat(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) down[k] += c[i] * Rat(x.fan().rays[i][k]);
  IntVector down_i;
  for (const auto& v : down) {
    ensure(is_integer(v), "twisting vector is not integral");
    down_i.push_back(v.get_num());
  }
  down_i.push_back(-1);
  fan.rays.push_back(down_i);
  for (const auto& cone : x.fan().max_cones)
    for (int extra : {static_cast<int>(m), static_cast<int>(m + 1)}) {
      IndexSet lifted = cone;
      lifted.push_back(extra);
      fan.max_cones.push_back(lifted);
    }

  std::vector<ExtensionVector> ext;
  for (const auto& e : x.extension()) {
    ExtensionVector f;
    f.vector = e.vector;
    f.vector.push_back(0);
    for (int i : e.anticone) f.anticone.push_back(static_cast<std::size_t>(i) < m ? i : i + 2);
    f.anticone.push_back(static_cast<int>(m));
    f.anticone.push_back(static_cast<int>(m + 1));
    std::sort(f.anticone.begin(), f.anticone.end());
    f.c = e.c;
    f.c.push_back(0);
    f.c.push_back(0);
    ext.push_back(std::move(f));
  }

  // p_0 pairs with the upward ray; p_a lifts through d_i = pi_i + c_i pi_up
  RatMatrix p(big_r + 1, m + l + 2);
  p(0, m) = 1;
  for (std::size_t a = 0; a < big_r; ++a) {
    Rat up_entry = 0;
    for (std::size_t i = 0; i < m; ++i) {
      p(a + 1, i) = x.p_basis()(a, i);
      up_entry += x.p_basis()(a, i) * c[i];
    }
    p(a + 1, m) = up_entry;
    for (std::size_t j = 0; j < l; ++j) p(a + 1, m + 2 + j) = x.p_basis()(a, m + j);
  }

  BuildOptions opt;
  opt.allow_non_weak_fano = true;
  opt.require_integral_basis = kind == BundleData::Kind::divisor;
  opt.require_nef_basis = false;

  BundleData out;
  out.kind = kind;
  out.index = index;
  out.total = ExtendedStackyFan::build(std::move(fan), std::move(ext), std::move(p), opt);
  out.shift = c;
  for (const auto& ci : c) out.n_j = lcm_of(out.n_j, ci.get_den());

  if (!out.total.weak_fano()) throw Error(ErrorKind::weak_fano_violation, "bundle total space is not weak Fano");
  Rat age = 0;
  for (const auto& ci : c) age += ci;
  RatVector expected = x.rho();
  expected.insert(expected.begin(), Rat(2) - age);
  ensure(out.total.rho() == expected, "bundle first Chern class mismatch");
  // total-space order: rays, up, down, extensions
  for (std::size_t i = 0; i < m + l; ++i) {
    ensure(out.total.divisor_matrix()(i < m ? i : i + 2, 0) == (i < m ? Rat(-c[i]) : Rat(0)),
           "bundle divisor matrix mismatch");
    if (i == m) {
      out.weights.push_back({RatVector(big_r, Rat(0)), Rat(out.n_j)});
      out.weights.push_back({RatVector(big_r, Rat(0)), Rat(out.n_j)});
    }
    out.weights.push_back({x.divisor_matrix().row(i), i < m ? Rat(-c[i] * Rat(out.n_j)) : Rat(0)});
  }
  if (l == 0) {
    out.weights.push_back({RatVector(big_r, Rat(0)), Rat(out.n_j)});
    out.weights.push_back({RatVector(big_r, Rat(0)), Rat(out.n_j)});
  }
  for (const auto& b : out.total.boxes()) {
    if (b.v.back() != 0) throw Error(ErrorKind::sector_projection_failure, "bundle box leaves the fiber");
  }
  return out;
}

}  // namespace detail

inline BundleData bundle_divisor(const ExtendedStackyFan& x, std::size_t j) {
  if (j >= x.m()) throw Error(ErrorKind::index_out_of_range, "ray index out of range");
  RatVector c(x.m(), Rat(0));
  c[j] = 1;
  return detail::make_bundle(x, BundleData::Kind::divisor, j, std::move(c));
}

inline BundleData bundle_box(const ExtendedStackyFan& x, std::size_t j) {
  if (j >= x.l()) throw Error(ErrorKind::index_out_of_range, "extension index out of range");
  return detail::make_bundle(x, BundleData::Kind::box, j, x.extension()[j].c);
}

}  // namespace stacky_seidel
