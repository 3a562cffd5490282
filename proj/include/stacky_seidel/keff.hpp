#pragma once

#include <cstddef>
#include <vector>

#include "stacky_seidel/novikov_series.hpp"

namespace stacky_seidel {

struct ExponentPoint {
  RatVector pairings;  // D^S_i . d for i < m + l
  Exponent exponent;   // y-exponent, p^S_a . d
  std::size_t sector = 0;
  Rat degree;          // rho^S . d
  IndexSet integral_nonneg;
};

struct EnumerationOptions {
  std::size_t budget = 4'000'000;  // grid points visited
};

// points of K_eff with exponents <= caps
inline std::vector<ExponentPoint> enumerate_keff(const ExtendedStackyFan& x, const Exponent& caps,
                                                 const EnumerationOptions& opt = {}) {
  const std::size_t big_r = x.variables();
  if (caps.size() != big_r) throw Error(ErrorKind::incompatible_caps, "caps have wrong length");
  Int grid = x.scale();
  for (const auto& e : x.extension())
    for (const auto& c : e.c) grid = lcm_of(grid, c.get_den());
  Int row_den = 1;
  for (std::size_t a = 0; a < big_r; ++a)
    for (std::size_t i = 0; i < x.index_count(); ++i) row_den = lcm_of(row_den, x.p_basis()(a, i).get_den());
  grid *= row_den;

  std::vector<long> top(big_r);
  Int total = 1;
  for (std::size_t a = 0; a < big_r; ++a) {
    if (caps[a] < 0) throw Error(ErrorKind::validation_error, "negative cap");
    top[a] = to_long(floor_of(caps[a] * Rat(grid)));
    total *= top[a] + 1;
    if (total > Int(static_cast<unsigned long>(opt.budget)))
      throw Error(ErrorKind::caps_explosion, "enumeration grid exceeds the budget");
  }

  std::vector<ExponentPoint> out;
  std::vector<long> k(big_r, 0);
  for (;;) {
    Exponent t(big_r);
    for (std::size_t a = 0; a < big_r; ++a) t[a] = make_rat(Int(k[a]), grid);
    RatVector pi = x.pairings_of(t);
    IndexSet pattern;
    for (std::size_t i = 0; i < pi.size(); ++i)
      if (is_integer(pi[i]) && pi[i] >= 0) pattern.push_back(static_cast<int>(i));
    if (x.is_anticone(pattern)) {
      for (const auto& v : pi)
        if (!mpz_divisible_p(x.scale().get_mpz_t(), v.get_den_mpz_t()))
          throw Error(ErrorKind::scale_too_small, "pairing denominator does not divide the scale");
      const Reduction red = reduction_v(x, pi);
      Rat deg = 0;
      for (const auto& v : pi) deg += v;
      out.push_back({std::move(pi), std::move(t), red.sector, deg, std::move(pattern)});
    }
    std::size_t a = 0;
    while (a < big_r && ++k[a] > top[a]) k[a++] = 0;
    if (a == big_r) break;
  }
  return out;
}

}  // namespace stacky_seidel
