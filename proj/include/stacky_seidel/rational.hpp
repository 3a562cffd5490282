#pragma once

#include <gmpxx.h>

#include <climits>
#include <string>
#include <string_view>
#include <vector>

#include "stacky_seidel/error.hpp"

namespace stacky_seidel {

using Int = mpz_class;
using Rat = mpq_class;
using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw Error(ErrorKind::zero_denominator_factor, "zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& x) { return x.get_den() == 1; }

inline Int floor_of(const Rat& x) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline Int ceil_of(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

// fractional part in [0,1)
inline Rat frac_of(const Rat& x) { return x - Rat(floor_of(x)); }

inline Int lcm_of(const Int& a, const Int& b) {
  Int out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

inline Int gcd_of(const Int& a, const Int& b) {
  Int out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

inline long to_long(const Int& x) {
  if (!x.fits_slong_p()) throw Error(ErrorKind::caps_explosion, "integer too large: " + x.get_str());
  return x.get_si();
}

inline Int factorial(long n) {
  Int out;
  if (n < 0) throw Error(ErrorKind::internal_error, "negative factorial");
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

inline RatVector to_rational(const IntVector& v) { return RatVector(v.begin(), v.end()); }

// always "p/q", q > 0
inline std::string to_string(const Rat& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

// accepts "p", "p/q", optional sign and surrounding blanks
inline Rat parse_rational(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  auto digits_ok = [](std::string_view t, bool allow_sign) {
    if (allow_sign && !t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  const auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false))
    throw Error(ErrorKind::parse_error, "malformed rational '" + std::string(s) + "'");
  if (num.front() == '+') num.remove_prefix(1);
  Int n(std::string(num), 10);
  Int d(std::string(den), 10);
  if (d == 0) throw Error(ErrorKind::parse_error, "zero denominator in '" + std::string(s) + "'");
  return make_rat(n, d);
}

}  // namespace stacky_seidel
