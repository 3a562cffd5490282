#pragma once

#include <string>

#include "stacky_seidel/io.hpp"

namespace support {

using namespace stacky_seidel;

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".json"; }

inline ExtendedStackyFan load(const std::string& name, bool allow_non_weak_fano = false) {
  return parse_input(fixture(name), allow_non_weak_fano).model;
}

inline Rat q(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

inline Exponent exps(std::initializer_list<Rat> xs) { return Exponent(xs); }

inline Monomial unit_monomial(std::size_t symbols, std::size_t i) {
  Monomial mu(symbols, 0);
  mu[i] = 1;
  return mu;
}

}  // namespace support
