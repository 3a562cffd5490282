#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stacky_seidel/lattice.hpp"

namespace stacky_seidel {

using IndexSet = std::vector<int>;  // sorted, 0-based

struct StackyFan {
  int rank = 0;
  std::vector<IntVector> rays;
  std::vector<IndexSet> max_cones;

  std::size_t ray_count() const { return rays.size(); }
};

struct FanValidation {
  bool valid = true;
  ErrorKind kind = ErrorKind::validation_error;
  std::vector<std::size_t> offending_cones;
  std::string message;
};

namespace detail {

inline RatMatrix cone_matrix(const StackyFan& fan, const IndexSet& cone) {
  RatMatrix out(static_cast<std::size_t>(fan.rank), cone.size());
  for (std::size_t k = 0; k < cone.size(); ++k)
    for (std::size_t i = 0; i < out.rows(); ++i) out(i, k) = Rat(fan.rays[cone[k]][i]);
  return out;
}

// coordinates of x in the simplicial cone, if x lies in its span
inline std::optional<RatVector> cone_coordinates(const StackyFan& fan, const IndexSet& cone, const RatVector& x) {
  if (cone.empty()) {
    if (std::all_of(x.begin(), x.end(), [](const Rat& v) { return v == 0; })) return RatVector{};
    return std::nullopt;
  }
  return solve(cone_matrix(fan, cone), x);
}

inline bool all_nonneg(const RatVector& c) {
  return std::all_of(c.begin(), c.end(), [](const Rat& v) { return v >= 0; });
}

inline FanValidation fail(ErrorKind kind, std::vector<std::size_t> cones, std::string msg) {
  return {false, kind, std::move(cones), std::move(msg)};
}

}  // namespace detail

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool is_face(const StackyFan& fan, const IndexSet& s) {
  return std::any_of(fan.max_cones.begin(), fan.max_cones.end(),
                     [&](const IndexSet& c) { return is_subset(s, c); });
}

inline Int cone_index(const StackyFan& fan, const IndexSet& cone) {
  const Rat det = determinant(detail::cone_matrix(fan, cone));
  return abs(det.get_num());
}

inline FanValidation validate_fan(const StackyFan& fan) {
  using detail::fail;
  const auto n = static_cast<std::size_t>(fan.rank);
  if (fan.rank < 1) return fail(ErrorKind::validation_error, {}, "rank must be positive");
  for (std::size_t i = 0; i < fan.rays.size(); ++i) {
    if (fan.rays[i].size() != n)
      return fail(ErrorKind::validation_error, {}, "ray " + std::to_string(i + 1) + " has wrong dimension");
    if (std::all_of(fan.rays[i].begin(), fan.rays[i].end(), [](const Int& v) { return v == 0; }))
      return fail(ErrorKind::validation_error, {}, "ray " + std::to_string(i + 1) + " is zero");
    for (std::size_t k = 0; k < i; ++k)
      if (fan.rays[k] == fan.rays[i])
        return fail(ErrorKind::validation_error, {}, "repeated ray " + std::to_string(i + 1));
  }
  if (fan.max_cones.empty()) return fail(ErrorKind::not_complete, {}, "no cones");
  std::vector<bool> used(fan.rays.size(), false);
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
    const auto& cone = fan.max_cones[c];
    if (!std::is_sorted(cone.begin(), cone.end()) ||
        std::adjacent_find(cone.begin(), cone.end()) != cone.end())
      return fail(ErrorKind::validation_error, {c}, "cone indices must be distinct");
    for (int i : cone) {
      if (i < 0 || static_cast<std::size_t>(i) >= fan.rays.size())
        return fail(ErrorKind::validation_error, {c}, "cone references unknown ray");
      used[static_cast<std::size_t>(i)] = true;
    }
    if (cone.size() > n || rank_of(detail::cone_matrix(fan, cone)) != cone.size())
      return fail(ErrorKind::not_simplicial, {c}, "cone rays are not linearly independent");
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) return fail(ErrorKind::validation_error, {}, "ray " + std::to_string(i + 1) + " lies in no cone");
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c)
    if (fan.max_cones[c].size() != n)
      return fail(ErrorKind::not_complete, {c}, "maximal cone is not full-dimensional");

  // facets shared by exactly two cones lying on opposite sides
  std::map<IndexSet, std::vector<std::pair<std::size_t, int>>> facets;
  for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
    const auto& cone = fan.max_cones[c];
    for (std::size_t drop = 0; drop < cone.size(); ++drop) {
      IndexSet f;
      for (std::size_t k = 0; k < cone.size(); ++k)
        if (k != drop) f.push_back(cone[k]);
      facets[f].push_back({c, cone[drop]});
    }
  }
  std::vector<std::vector<std::size_t>> adj(fan.max_cones.size());
  for (const auto& [f, owners] : facets) {
    if (owners.size() != 2) {
      std::vector<std::size_t> bad;
      for (const auto& o : owners) bad.push_back(o.first);
      return fail(ErrorKind::not_complete, bad, "facet not shared by exactly two cones");
    }
    auto side = [&](int extra) {
      IndexSet cols = f;
      cols.push_back(extra);
      return sgn(determinant(detail::cone_matrix(fan, cols)));
    };
    if (side(owners[0].second) * side(owners[1].second) >= 0)
      return fail(ErrorKind::not_complete, {owners[0].first, owners[1].first}, "adjacent cones overlap");
    adj[owners[0].first].push_back(owners[1].first);
    adj[owners[1].first].push_back(owners[0].first);
  }
  std::vector<bool> seen(fan.max_cones.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    for (std::size_t d : adj[c])
      if (!seen[d]) {
        seen[d] = true;
        stack.push_back(d);
      }
  }
  for (std::size_t c = 0; c < seen.size(); ++c)
    if (!seen[c]) return fail(ErrorKind::not_complete, {c}, "cone graph is disconnected");

  // an interior point of the first cone must lie in no other cone
  RatVector centre(n, Rat(0));
  for (int i : fan.max_cones[0])
    for (std::size_t k = 0; k < n; ++k) centre[k] += fan.rays[static_cast<std::size_t>(i)][k];
  for (std::size_t c = 1; c < fan.max_cones.size(); ++c) {
    const auto coords = detail::cone_coordinates(fan, fan.max_cones[c], centre);
    if (coords && detail::all_nonneg(*coords))
      return fail(ErrorKind::not_complete, {0, c}, "cones cover some region more than once");
  }
  return {};
}

inline void require_valid(const StackyFan& fan) {
  const auto v = validate_fan(fan);
  if (!v.valid) throw Error(v.kind, v.message);
}

struct BoxElement {
  IntVector v;
  IndexSet minimal_cone;
  RatVector coords;  // aligned with minimal_cone, each in (0,1)
  Rat age;

  bool is_zero() const { return minimal_cone.empty(); }
};

// v in Box(fan), described through its minimal cone
inline std::optional<BoxElement> as_box(const StackyFan& fan, const IntVector& v) {
  const RatVector x = to_rational(v);
  for (const auto& cone : fan.max_cones) {
    const auto coords = detail::cone_coordinates(fan, cone, x);
    if (!coords || !detail::all_nonneg(*coords)) continue;
    BoxElement out{v, {}, {}, Rat(0)};
    for (std::size_t k = 0; k < cone.size(); ++k) {
      if ((*coords)[k] == 0) continue;
      if ((*coords)[k] >= 1) return std::nullopt;
      out.minimal_cone.push_back(cone[k]);
      out.coords.push_back((*coords)[k]);
      out.age += (*coords)[k];
    }
    return out;
  }
  return std::nullopt;
}

inline bool box_before(const BoxElement& a, const BoxElement& b) {
  if (a.age != b.age) return a.age < b.age;
  return a.v < b.v;
}

// every box element, the zero element first
inline std::vector<BoxElement> box_elements(const StackyFan& fan) {
  const auto n = static_cast<std::size_t>(fan.rank);
  std::map<IntVector, BoxElement> found;
  for (const auto& cone : fan.max_cones) {
    IntMatrix b(n, n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i) b(i, k) = fan.rays[static_cast<std::size_t>(cone[k])][i];
    // Z^n / B Z^n is represented by u * y, 0 <= y_k < d_k
    const auto snf = smith_normal_form(b);
    const auto binv = inverse(to_rational(b));
    ensure(binv.has_value(), "maximal cone is singular");
    std::vector<long> bound(n), y(n, 0);
    for (std::size_t k = 0; k < n; ++k) bound[k] = to_long(snf.d(k, k));
    for (;;) {
      RatVector x(n, Rat(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) x[i] += Rat(snf.u(i, k) * y[k]);
      RatVector c = binv->apply(x);
      BoxElement e{IntVector(n, Int(0)), {}, {}, Rat(0)};
      for (std::size_t k = 0; k < n; ++k) {
        c[k] = frac_of(c[k]);
        if (c[k] == 0) continue;
        e.minimal_cone.push_back(cone[k]);
        e.coords.push_back(c[k]);
        e.age += c[k];
      }
      RatVector vx(n, Rat(0));
      for (std::size_t k = 0; k < e.minimal_cone.size(); ++k)
        for (std::size_t i = 0; i < n; ++i)
          vx[i] += e.coords[k] * Rat(fan.rays[static_cast<std::size_t>(e.minimal_cone[k])][i]);
      for (std::size_t i = 0; i < n; ++i) {
        ensure(is_integer(vx[i]), "box representative is not integral");
        e.v[i] = vx[i].get_num();
      }
      found.emplace(e.v, e);
      std::size_t k = 0;
      while (k < n && ++y[k] == bound[k]) y[k++] = 0;
      if (k == n) break;
    }
  }
  std::vector<BoxElement> out;
  for (auto& [v, e] : found) out.push_back(std::move(e));
  std::sort(out.begin(), out.end(), box_before);
  return out;
}

}  // namespace stacky_seidel
