#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stacky_seidel/coh_classes.hpp"

namespace stacky_seidel {

using Exponent = RatVector;

inline bool coefficient_is_zero(const Rat& c) { return c == 0; }
inline bool coefficient_is_zero(const CohClass& c) { return c.is_zero(); }

// coefficient of a Laurent polynomial in z, keyed by the power of z
class ZClass {
 public:
  ZClass() = default;

  void add(int zpow, const CohClass& c) {
    if (c.is_zero()) return;
    auto& slot = by_z_[zpow];
    slot += c;
    if (slot.is_zero()) by_z_.erase(zpow);
  }

  const std::map<int, CohClass>& powers() const { return by_z_; }
  bool is_zero() const { return by_z_.empty(); }

  CohClass at(int zpow) const {
    auto it = by_z_.find(zpow);
    return it == by_z_.end() ? CohClass{} : it->second;
  }

  ZClass& operator+=(const ZClass& o) {
    for (const auto& [p, c] : o.by_z_) add(p, c);
    return *this;
  }
  ZClass& operator-=(const ZClass& o) {
    for (const auto& [p, c] : o.by_z_) add(p, Rat(-1) * c);
    return *this;
  }
  ZClass& operator*=(const Rat& s) {
    if (s == 0) {
      by_z_.clear();
      return *this;
    }
    for (auto& [p, c] : by_z_) c *= s;
    return *this;
  }
  friend bool operator==(const ZClass&, const ZClass&) = default;

 private:
  std::map<int, CohClass> by_z_;
};

inline bool coefficient_is_zero(const ZClass& c) { return c.is_zero(); }

inline bool exponent_le(const Exponent& a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

inline Exponent exponent_add(const Exponent& a, const Exponent& b) {
  Exponent out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

inline Exponent exponent_sub(const Exponent& a, const Exponent& b) {
  Exponent out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

inline Exponent exponent_min(const Exponent& a, const Exponent& b) {
  Exponent out(a);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

// exponents e <= upper componentwise; nothing to compare if some bound is negative
struct TrustedRegion {
  Exponent upper;

  bool empty() const {
    return std::any_of(upper.begin(), upper.end(), [](const Rat& u) { return u < 0; });
  }
  bool contains(const Exponent& e) const { return exponent_le(e, upper); }
};

// truncated series sum_e c_e y^e, exact for every e <= caps
template <typename Coeff>
class Series {
 public:
  Series() = default;
  explicit Series(Exponent caps) : caps_(std::move(caps)) {}

  const Exponent& caps() const { return caps_; }
  std::size_t variables() const { return caps_.size(); }
  const std::map<Exponent, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const Coeff& c) {
    if (e.size() != caps_.size()) throw Error(ErrorKind::incompatible_caps, "exponent has wrong length");
    if (!exponent_le(e, caps_) || coefficient_is_zero(c)) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
      return;
    }
    it->second += c;
    if (coefficient_is_zero(it->second)) terms_.erase(it);
  }

  Coeff coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  Series& operator+=(const Series& o) {
    check_caps(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Series& operator-=(const Series& o) {
    check_caps(o);
    for (const auto& [e, c] : o.terms_) {
      Coeff neg = c;
      neg *= Rat(-1);
      add_term(e, neg);
    }
    return *this;
  }
  Series& operator*=(const Rat& s) {
    if (s == 0) terms_.clear();
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend bool operator==(const Series&, const Series&) = default;

  Series restricted(const TrustedRegion& region) const {
    Series out(exponent_min(caps_, region.upper));
    for (const auto& [e, c] : terms_)
      if (region.contains(e)) out.terms_.emplace(e, c);
    return out;
  }

  // re-express with tighter caps
  Series truncated(const Exponent& caps) const {
    Series out(exponent_min(caps_, caps));
    for (const auto& [e, c] : terms_) out.add_term(e, c);
    return out;
  }

 private:
  void check_caps(const Series& o) const {
    if (o.caps_ != caps_) throw Error(ErrorKind::incompatible_caps, "series caps differ");
  }

  Exponent caps_;
  std::map<Exponent, Coeff> terms_;
};

template <typename Coeff>
Series<Coeff> series_product(const Series<Rat>& a, const Series<Coeff>& b) {
  if (a.variables() != b.variables()) throw Error(ErrorKind::incompatible_caps, "series in different variables");
  Series<Coeff> out(exponent_min(a.caps(), b.caps()));
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponent e = exponent_add(ea, eb);
      if (!exponent_le(e, out.caps())) continue;
      Coeff c = cb;
      c *= ca;
      out.add_term(e, c);
    }
  return out;
}

inline Series<Rat> series_one(const Exponent& caps) {
  Series<Rat> out(caps);
  out.add_term(Exponent(caps.size(), Rat(0)), Rat(1));
  return out;
}

// exp(sign * a) for a without constant term
inline Series<Rat> series_exp(const Series<Rat>& a, int sign = 1) {
  const Exponent zero(a.variables(), Rat(0));
  if (a.coefficient(zero) != 0) throw Error(ErrorKind::nonzero_constant_term, "exp needs a zero constant term");
  for (const auto& [e, c] : a.terms())
    if (std::any_of(e.begin(), e.end(), [](const Rat& x) { return x < 0; }))
      throw Error(ErrorKind::negative_exponent_escape, "exp of a series with negative exponents");
  Series<Rat> scaled = a;
  scaled *= Rat(sign);
  Series<Rat> out = series_one(a.caps());
  Series<Rat> power = out;
  for (long k = 1; !power.is_zero(); ++k) {
    power = series_product(power, scaled);
    power *= Rat(1, k);
    out += power;
  }
  return out;
}

// y_a d/dy_a
template <typename Coeff>
Series<Coeff> log_derivation(const Series<Coeff>& a, std::size_t index) {
  if (index >= a.variables()) throw Error(ErrorKind::index_out_of_range, "derivation index out of range");
  Series<Coeff> out(a.caps());
  for (const auto& [e, c] : a.terms()) {
    Coeff d = c;
    d *= e[index];
    out.add_term(e, d);
  }
  return out;
}

// sum_a w_a y_a d/dy_a
template <typename Coeff>
Series<Coeff> directional_derivation(const Series<Coeff>& a, const RatVector& w) {
  Series<Coeff> out(a.caps());
  for (const auto& [e, c] : a.terms()) {
    Rat f = 0;
    for (std::size_t i = 0; i < w.size(); ++i) f += w[i] * e[i];
    Coeff d = c;
    d *= f;
    out.add_term(e, d);
  }
  return out;
}

enum class ShiftPolicy { strict, allow_negative };

// y^shift * a, caps move along so no term is lost
template <typename Coeff>
Series<Coeff> monomial_shift(const Series<Coeff>& a, const Exponent& shift, ShiftPolicy policy = ShiftPolicy::strict) {
  if (shift.size() != a.variables()) throw Error(ErrorKind::incompatible_caps, "shift has wrong length");
  Series<Coeff> out(exponent_add(a.caps(), shift));
  for (const auto& [e, c] : a.terms()) {
    Exponent f = exponent_add(e, shift);
    if (policy == ShiftPolicy::strict && std::any_of(f.begin(), f.end(), [](const Rat& x) { return x < 0; }))
      throw Error(ErrorKind::negative_exponent_escape, "shift produces a negative exponent");
    out.add_term(f, c);
  }
  return out;
}

}  // namespace stacky_seidel
