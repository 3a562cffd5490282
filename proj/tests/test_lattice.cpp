#include <gtest/gtest.h>

#include <random>

#include "stacky_seidel/lattice.hpp"
#include "support.hpp"

using namespace stacky_seidel;
using support::q;

namespace {

IntMatrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = dist(gen);
  return a;
}

bool is_unimodular(const IntMatrix& u) {
  const Rat d = determinant(to_rational(u));
  return d == 1 || d == -1;
}

// integer combination test by exact solve; basis is independent
bool in_integer_span(const IntVector& x, const std::vector<IntVector>& basis) {
  if (basis.empty()) {
    for (const auto& v : x)
      if (v != 0) return false;
    return true;
  }
  std::vector<RatVector> cols;
  for (const auto& b : basis) cols.push_back(to_rational(b));
  const auto sol = solve(RatMatrix::from_columns(cols, x.size()), to_rational(x));
  if (!sol) return false;
  for (const auto& c : *sol)
    if (!is_integer(c)) return false;
  return true;
}

// vertex enumeration: x lies in the cone iff it is a nonnegative combination of some independent subset
bool cone_oracle(const RatVector& x, const std::vector<RatVector>& gens) {
  const std::size_t k = gens.size();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<RatVector> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) sub.push_back(gens[i]);
    if (sub.empty()) {
      if (std::all_of(x.begin(), x.end(), [](const Rat& v) { return v == 0; })) return true;
      continue;
    }
    const RatMatrix a = RatMatrix::from_columns(sub, x.size());
    if (rank_of(a) != sub.size()) continue;
    const auto c = solve(a, x);
    if (!c) continue;
    if (std::all_of(c->begin(), c->end(), [](const Rat& v) { return v >= 0; })) return true;
  }
  return false;
}

}  // namespace

TEST(Smith, IdentityIsFixed) {
  const IntMatrix id = IntMatrix::identity(2);
  const auto s = smith_normal_form(id);
  EXPECT_EQ(s.d, id);
  EXPECT_EQ(s.u * s.d * s.v, id);
  EXPECT_EQ(s.rank, 2u);
}

TEST(Smith, DiagonalTwoThree) {
  const IntMatrix a = IntMatrix::from_rows({{2, 0}, {0, 3}});
  const auto s = smith_normal_form(a);
  EXPECT_EQ(s.d(0, 0), 1);
  EXPECT_EQ(s.d(1, 1), 6);
  EXPECT_EQ(s.u * s.d * s.v, a);
}

TEST(Smith, WeightedLineRow) {
  const IntMatrix a = IntMatrix::from_rows({{1, -2}});
  const auto s = smith_normal_form(a);
  EXPECT_EQ(s.d(0, 0), 1);
  EXPECT_EQ(s.d(0, 1), 0);
  EXPECT_EQ(s.rank, 1u);
  EXPECT_EQ(kernel_basis(a).size(), 1u);
}

TEST(Smith, RandomReconstructionAndUnimodularity) {
  std::mt19937 gen(20240611);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const IntMatrix a = random_matrix(gen, dim(gen), dim(gen), 9);
    const auto s = smith_normal_form(a);
    ASSERT_EQ(s.u * s.d * s.v, a) << "trial " << trial;
    ASSERT_TRUE(is_unimodular(s.u));
    ASSERT_TRUE(is_unimodular(s.v));
    for (std::size_t i = 0; i < s.d.rows(); ++i)
      for (std::size_t j = 0; j < s.d.cols(); ++j)
        if (i != j) {
          ASSERT_EQ(s.d(i, j), 0);
        }
    const std::size_t diag = std::min(a.rows(), a.cols());
    for (std::size_t k = 0; k + 1 < diag; ++k) {
      const Int& dk = s.d(k, k);
      const Int& dn = s.d(k + 1, k + 1);
      if (dk == 0) {
        ASSERT_EQ(dn, 0);
      } else {
        ASSERT_TRUE(mpz_divisible_p(dn.get_mpz_t(), dk.get_mpz_t()));
      }
      ASSERT_GE(dk, 0);
    }
    ASSERT_EQ(s.rank, rank_of(to_rational(a)));
  }
}

TEST(Kernel, IdentityIsTrivial) { EXPECT_TRUE(kernel_basis(IntMatrix::identity(3)).empty()); }

TEST(Kernel, WeightedLine) {
  const auto k = kernel_basis(IntMatrix::from_rows({{1, -2}}));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (IntVector{2, 1}));
}

TEST(Kernel, HirzebruchRays) {
  const IntMatrix a = IntMatrix::from_rows({{1, 0, -1, 0}, {0, 1, 2, -1}});
  const auto k = kernel_basis(a);
  ASSERT_EQ(k.size(), 2u);
  // every (a, b, a, b + 2a) with small a, b is an integer combination
  for (int s = -3; s <= 3; ++s)
    for (int t = -3; t <= 3; ++t) EXPECT_TRUE(in_integer_span({s, t, s, t + 2 * s}, k));
  for (const auto& v : k) {
    EXPECT_EQ(v[0], v[2]);
    EXPECT_EQ(v[3], v[1] + 2 * v[0]);
  }
}

TEST(Kernel, SaturationAgainstBruteForce) {
  std::mt19937 gen(77);
  std::uniform_int_distribution<std::size_t> rows(1, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t cols = trial % 2 == 0 ? 3 : 4;
    const IntMatrix a = random_matrix(gen, rows(gen), cols, 3);
    const auto basis = kernel_basis(a);
    ASSERT_EQ(basis.size(), cols - rank_of(to_rational(a)));
    for (const auto& b : basis) {
      const auto img = a.apply(b);
      for (const auto& v : img) ASSERT_EQ(v, 0);
    }
    std::vector<long> x(cols, -5);
    for (;;) {
      bool zero = true;
      for (std::size_t i = 0; i < a.rows() && zero; ++i) {
        long s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j).get_si() * x[j];
        zero = s == 0;
      }
      if (zero) {
        IntVector xi(x.begin(), x.end());
        ASSERT_TRUE(in_integer_span(xi, basis)) << "trial " << trial;
      }
      std::size_t k = 0;
      while (k < cols && ++x[k] > 5) x[k++] = -5;
      if (k == cols) break;
    }
  }
}

TEST(ConeMember, Examples) {
  EXPECT_TRUE(cone_member({q(0), q(0)}, {{q(1), q(2)}}));
  EXPECT_TRUE(cone_member({q(1), q(1)}, {{q(1), q(0)}, {q(0), q(1)}}));
  EXPECT_FALSE(cone_member({q(-1), q(0)}, {{q(1), q(0)}, {q(0), q(1)}}));
  EXPECT_TRUE(cone_member({q(2), q(1)}, {{q(1), q(1)}, {q(1), q(-1)}}));
  const auto c = solve(RatMatrix::from_columns({{q(1), q(1)}, {q(1), q(-1)}}, 2), {q(2), q(1)});
  ASSERT_TRUE(c);
  EXPECT_EQ((*c)[0], q(3, 2));
  EXPECT_EQ((*c)[1], q(1, 2));
}

TEST(ConeMember, AgreesWithVertexEnumeration) {
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 1 + static_cast<std::size_t>(trial % 3);
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 4);
    std::vector<RatVector> gens(k, RatVector(dim));
    for (auto& g : gens)
      for (auto& v : g) v = entry(gen);
    std::vector<int> x(dim, -2);
    for (;;) {
      const RatVector xr(x.begin(), x.end());
      ASSERT_EQ(cone_member(xr, gens), cone_oracle(xr, gens)) << "trial " << trial;
      std::size_t i = 0;
      while (i < dim && ++x[i] > 2) x[i++] = -2;
      if (i == dim) break;
    }
  }
}

TEST(Rational, ParseAndPrint) {
  EXPECT_EQ(parse_rational("3/6"), q(1, 2));
  EXPECT_EQ(parse_rational("-4"), q(-4));
  EXPECT_EQ(to_string(q(2)), "2/1");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("0.5"), Error);
  EXPECT_EQ(floor_of(q(-1, 2)), -1);
  EXPECT_EQ(ceil_of(q(-1, 2)), 0);
  EXPECT_EQ(frac_of(q(-1, 3)), q(2, 3));
}
