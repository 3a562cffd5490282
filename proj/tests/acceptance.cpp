// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <gmpxx.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "stacky_seidel/driver.hpp"

using namespace stacky_seidel;

namespace {

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name + ".json"; }

ExtendedStackyFan load(const std::string& name, bool allow = false) { return parse_input(fixture(name), allow).model; }

Rat q(long num, long den = 1) { return make_rat(Int(num), Int(den)); }

const std::vector<std::string> weak_fano_fixtures{"p1", "p12", "h2", "p13"};

// collects the reason for the first failure
struct Check {
  bool ok = true;
  std::string why;

  void operator()(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      why = what;
    }
  }
};

CohClass reduced_divisor(const RelationIdeal& ideal, std::size_t i, const Rat& c = 1) {
  Monomial mu(ideal.symbols(), 0);
  mu[i] = 1;
  CohClass out;
  out.add(0, mu, c);
  return ideal.reduce(out);
}

BundleData bundle_of(const ExtendedStackyFan& x, std::size_t j) {
  return j < x.m() ? bundle_divisor(x, j) : bundle_box(x, j - x.m());
}

IntMatrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  IntMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = dist(gen);
  return a;
}

bool in_integer_span(const IntVector& x, const std::vector<IntVector>& basis) {
  if (basis.empty()) return std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; });
  std::vector<RatVector> cols;
  for (const auto& b : basis) cols.push_back(to_rational(b));
  const auto sol = solve(RatMatrix::from_columns(cols, x.size()), to_rational(x));
  return sol && std::all_of(sol->begin(), sol->end(), [](const Rat& c) { return is_integer(c); });
}

// nonnegative solution on some independent subset of generators
bool cone_oracle(const RatVector& x, const std::vector<RatVector>& gens) {
  if (std::all_of(x.begin(), x.end(), [](const Rat& v) { return v == 0; })) return true;
  for (unsigned mask = 1; mask < (1u << gens.size()); ++mask) {
    std::vector<RatVector> sub;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if (mask & (1u << i)) sub.push_back(gens[i]);
    const RatMatrix a = RatMatrix::from_columns(sub, x.size());
    if (rank_of(a) != sub.size()) continue;
    const auto c = solve(a, x);
    if (c && std::all_of(c->begin(), c->end(), [](const Rat& v) { return v >= 0; })) return true;
  }
  return false;
}

Check lattice_algorithms() {
  Check c;
  std::mt19937 gen(1009);
  std::uniform_int_distribution<std::size_t> dim(1, 5);
  for (int t = 0; t < 200; ++t) {
    const IntMatrix a = random_matrix(gen, dim(gen), dim(gen), 9);
    const auto s = smith_normal_form(a);
    c(s.u * s.d * s.v == a, "smith reconstruction");
    const Rat du = determinant(to_rational(s.u)), dv = determinant(to_rational(s.v));
    c((du == 1 || du == -1) && (dv == 1 || dv == -1), "smith unimodularity");
    for (std::size_t i = 0; i < s.d.rows(); ++i)
      for (std::size_t j = 0; j < s.d.cols(); ++j)
        if (i != j) c(s.d(i, j) == 0, "smith off-diagonal");
    for (std::size_t k = 0; k + 1 < std::min(a.rows(), a.cols()); ++k) {
      const Int& dk = s.d(k, k);
      const Int& dn = s.d(k + 1, k + 1);
      c(dk >= 0, "smith sign");
      c(dk == 0 ? dn == 0 : mpz_divisible_p(dn.get_mpz_t(), dk.get_mpz_t()) != 0, "smith divisibility");
    }
  }
  for (int t = 0; t < 60; ++t) {
    const std::size_t cols = 3 + static_cast<std::size_t>(t % 2);
    const IntMatrix a = random_matrix(gen, 1 + static_cast<std::size_t>(t % 3), cols, 3);
    const auto basis = kernel_basis(a);
    c(basis.size() == cols - rank_of(to_rational(a)), "kernel rank");
    std::vector<long> x(cols, -4);
    for (;;) {
      bool zero = true;
      for (std::size_t i = 0; i < a.rows() && zero; ++i) {
        long s = 0;
        for (std::size_t j = 0; j < cols; ++j) s += a(i, j).get_si() * x[j];
        zero = s == 0;
      }
      if (zero) c(in_integer_span(IntVector(x.begin(), x.end()), basis), "kernel saturation");
      std::size_t k = 0;
      while (k < cols && ++x[k] > 4) x[k++] = -4;
      if (k == cols) break;
    }
  }
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int t = 0; t < 60; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 3);
    std::vector<RatVector> gens(1 + static_cast<std::size_t>(t % 4), RatVector(d));
    for (auto& g : gens)
      for (auto& v : g) v = entry(gen);
    std::vector<int> x(d, -2);
    for (;;) {
      const RatVector xr(x.begin(), x.end());
      c(cone_member(xr, gens) == cone_oracle(xr, gens), "cone membership");
      std::size_t i = 0;
      while (i < d && ++x[i] > 2) x[i++] = -2;
      if (i == d) break;
    }
  }
  return c;
}

Check boxes_and_duals() {
  Check c;
  const auto p12 = load("p12");
  c(p12.boxes().size() == 2 && p12.boxes()[0].is_zero() && p12.boxes()[1].v == IntVector{-1} &&
        p12.boxes()[1].age == q(1, 2),
    "P(1,2) boxes");
  const auto p13 = load("p13");
  c(p13.boxes().size() == 3 && p13.boxes()[1].age == q(1, 3) && p13.boxes()[2].age == q(2, 3), "P(1,3) ages");
  const auto h2 = load("h2");
  c(h2.boxes().size() == 1 && h2.boxes()[0].is_zero(), "H2 boxes");
  for (const auto& name : weak_fano_fixtures) {
    const auto x = load(name);
    for (std::size_t j = 0; j < x.l(); ++j) c(dual_vector_holds(x, j, dual_vector(x, j)), name + " dual vector");
  }
  return c;
}

Check projective_line_ifunction() {
  Check c;
  const auto x = load("p1");
  const RelationIdeal ideal(x);
  const auto ifn = ifunction_reduced(x, ideal, Exponent{q(3)});
  c(ifn.terms().size() == 4, "term count");
  Rat h = 0;
  for (long k = 0; k <= 3; ++k) {
    if (k > 0) h += q(1, k);
    const Rat f = Rat(1) / Rat(factorial(k) * factorial(k));
    ZClass expect;
    expect.add(-2 * static_cast<int>(k), f * CohClass::unit(0, 2));
    expect.add(-2 * static_cast<int>(k) - 1, reduced_divisor(ideal, 0, -2 * h * f));
    c(ifn.coefficient(Exponent{q(k)}) == expect, "coefficient k=" + std::to_string(k));
  }
  return c;
}

Check mirror_maps() {
  Check c;
  {
    const auto x = load("p1");
    const RelationIdeal ideal(x);
    const auto m = extract_mirror(x, ideal, ifunction_reduced(x, ideal, Exponent{q(3)}));
    c(m.g[0].is_zero() && m.tau_tw.is_zero(), "P1 corrections");
  }
  {
    const auto x = load("p12");
    const RelationIdeal ideal(x);
    const Exponent caps{q(2), q(2)};
    const auto m = extract_mirror(x, ideal, ifunction_reduced(x, ideal, caps));
    const Exponent lead{q(1, 2), q(1)};
    c(m.tau_tw.coefficient(lead) == CohClass::unit(1, 2), "P(1,2) twisted leading coefficient");
    for (const auto& [e, cls] : m.tau_tw.terms()) c(exponent_le(lead, e), "P(1,2) twisted leading exponent");
  }
  for (const auto& name : weak_fano_fixtures) {
    const auto x = load(name);
    const RelationIdeal ideal(x);
    const auto ifn = ifunction_reduced(x, ideal, Exponent(x.variables(), Rat(3)));
    for (const auto& [e, z] : ifn.terms()) {
      const CohClass slice = z.at(-1);
      for (const auto& [key, a] : slice.terms())
        c(Rat(2 * degree(key.monomial)) + 2 * ideal.sector(key.sector).age <= 2, name + " z^-1 degree");
    }
  }
  return c;
}

Check hirzebruch_correction() {
  Check c;
  const auto x = load("h2");
  const RelationIdeal ideal(x);
  const Exponent caps{q(1), q(4)};
  const std::vector<Rat> expect{q(1), q(3, 2), q(10, 3), q(35, 4)};
  Series<Rat> target(caps);
  for (long k = 1; k <= 4; ++k) target.add_term(Exponent{q(0), q(k)}, expect[static_cast<std::size_t>(k - 1)]);
  c(g0_closed_form(x, {BundleData::Kind::divisor, 1}, caps) == target, "closed form");
  const auto b = bundle_divisor(x, 1);
  const RelationIdeal bi(b.total);
  const auto ext = extract_G1_and_g0(b, bi, ifunction_reduced(b.total, bi, Exponent{q(1), q(1), q(4)}));
  c(ext.g0 == target, "extraction from the bundle I-function");
  return c;
}

Check bundle_extraction() {
  Check c;
  for (const auto& name : weak_fano_fixtures) {
    const auto x = load(name);
    const RelationIdeal ideal(x);
    const Exponent caps(x.variables(), Rat(2));
    for (std::size_t j = 0; j < x.index_count(); ++j) {
      const auto b = bundle_of(x, j);
      const RelationIdeal bi(b.total);
      Exponent total = caps;
      total.insert(total.begin(), Rat(2));
      const auto ie = ifunction_reduced(b.total, bi, total);
      const std::string tag = name + " j=" + std::to_string(j + 1);
      for (const auto& [e, z] : ie.terms())
        if (e[0] > 0) c(z.at(-1).is_zero(), tag + " y0 in z^-1 slice");
      const auto rep = seidel_element(x, ideal, j, caps, Rat(2));
      for (const auto& v : rep.verdicts)
        if (v.name == "p0-integrality" || v.name == "y0-independence" || v.name == "fiber-restriction" ||
            v.name == "mirror-map-agreement" || v.name == "twisted-agreement")
          c(v.status == Status::pass, tag + " " + v.name);
    }
  }
  return c;
}

Check differential_equations() {
  Check c;
  for (const std::string name : {"p1", "p12", "h2"}) {
    const auto x = load(name);
    for (std::size_t j = 0; j < x.m(); ++j) {
      const auto b = bundle_divisor(x, j);
      const RelationIdeal bi(b.total);
      const auto ie = ifunction_reduced(b.total, bi, Exponent(b.total.variables(), Rat(2)));
      const auto r = bundle_pde_residual(b, bi, ie);
      c(!r.inconclusive() && r.vanishes(), name + " divisor bundle " + std::to_string(j + 1));
    }
  }
  {
    const auto b = bundle_box(load("p12"), 0);
    const RelationIdeal bi(b.total);
    const auto r = bundle_pde_residual(b, bi, ifunction_reduced(b.total, bi, Exponent(3, Rat(2))));
    c(!r.inconclusive() && r.vanishes(), "P(1,2) box bundle");
  }
  for (const auto& name : weak_fano_fixtures) {
    const auto x = load(name);
    const RelationIdeal ideal(x);
    const auto ifn = ifunction_reduced(x, ideal, Exponent(x.variables(), Rat(3)));
    for (const auto& d : x.lattice_basis()) {
      const auto r = pd_operator_residual(x, ideal, ifn, to_rational(d));
      c(!r.inconclusive() && r.vanishes(), name + " kernel operator");
    }
  }
  return c;
}

// exp(-g) for a one-variable series via a' = -g' a
std::vector<Rat> exp_minus(const std::vector<Rat>& g) {
  std::vector<Rat> a(g.size(), Rat(0));
  a[0] = 1;
  for (std::size_t n = 1; n < g.size(); ++n) {
    Rat s = 0;
    for (std::size_t k = 1; k <= n; ++k) s += Rat(long(k)) * g[k] * a[n - k];
    a[n] = -s / Rat(long(n));
  }
  return a;
}

Check seidel_elements() {
  Check c;
  for (const auto& name : weak_fano_fixtures) {
    const auto x = load(name);
    const RelationIdeal ideal(x);
    for (std::size_t j = 0; j < x.m(); ++j) {
      const auto rep = seidel_element(x, ideal, j, Exponent(x.variables(), Rat(2)), Rat(2));
      for (const auto& v : rep.verdicts)
        if (v.name == "batyrev-two-way" || v.name == "batyrev-equals-pullback" || v.name == "seidel-identity")
          c(v.status == Status::pass, name + " ray " + std::to_string(j + 1) + " " + v.name);
    }
  }
  const auto x = load("h2");
  const RelationIdeal ideal(x);
  const auto rep = seidel_element(x, ideal, 1, Exponent{q(1), q(4)}, Rat(1));
  c(rep.all_pass(), "H2 ray 2 verdicts");
  std::vector<Rat> g(5, Rat(0)), d(5);
  for (long k = 0; k <= 4; ++k) {
    Int bin;
    mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(2 * k), static_cast<unsigned long>(k));
    d[static_cast<std::size_t>(k)] = Rat(bin);
    if (k > 0) g[static_cast<std::size_t>(k)] = Rat(factorial(2 * k - 1)) / Rat(factorial(k) * factorial(k));
  }
  const auto e = exp_minus(g);
  std::vector<Rat> expect{q(1), q(1), q(3), q(10)};
  for (std::size_t n = 0; n < 4; ++n) {
    Rat s = 0;
    for (std::size_t k = 0; k <= n; ++k) s += e[k] * d[n - k];
    c(s == expect[n], "oracle coefficient " + std::to_string(n));
    c(rep.seidel.coefficient(Exponent{q(0), q(long(n))}) == reduced_divisor(ideal, 1, s),
      "H2 Seidel coefficient " + std::to_string(n));
  }
  return c;
}

Check box_seidel() {
  Check c;
  const auto x = load("p12");
  const RelationIdeal ideal(x);
  const auto rep = seidel_element(x, ideal, 2, Exponent{q(2), q(2)}, Rat(1));
  for (const auto& v : rep.verdicts) c(v.status == Status::pass, v.name + " " + v.detail);
  c(rep.seidel.coefficient(Exponent{q(0), q(0)}) == CohClass::unit(1, 2), "leading term");
  return c;
}

Check not_applicable() {
  Check c;
  const auto x = load("f3", true);
  c(!weak_fano_check(x), "weak Fano check");
  RunConfig cfg;
  cfg.subcommand = "verify";
  cfg.input = fixture("f3");
  cfg.allow_non_weak_fano = true;
  cfg.format = Format::structured;
  std::ostringstream out, err;
  c(run(cfg, out, err) == 2, "exit status");
  bool flagged = false;
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);) {
    const auto r = json::parse(line);
    if (r["kind"] == "verdict" && r["payload"]["name"] == "theorem")
      flagged = r["payload"]["status"] == "not applicable";
  }
  c(flagged, "theorem verdict");
  return c;
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Check()> body;
    double limit = 0;  // seconds, 0 for none
  };
  const std::vector<Criterion> criteria{
      {"lattice algorithms against oracles", lattice_algorithms, 10},
      {"box elements and dual vectors", boxes_and_duals},
      {"projective line I-function closed form", projective_line_ifunction},
      {"mirror maps and z^-1 degree bound", mirror_maps},
      {"Hirzebruch correction coefficient two ways", hirzebruch_correction, 30},
      {"bundle extraction and fiber agreement", bundle_extraction},
      {"differential operators annihilate", differential_equations, 60},
      {"Seidel elements on every ray", seidel_elements},
      {"box Seidel element on trusted region", box_seidel},
      {"non weak Fano reported not applicable", not_applicable},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
      c = criteria[i].body();
    } catch (const std::exception& e) {
      c.ok = false;
      c.why = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.ok && criteria[i].limit > 0 && secs > criteria[i].limit) {
      c.ok = false;
      c.why = "over the time limit";
    }
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].name << " (" << secs
              << " s)" << (c.ok ? "" : " [" + c.why + "]") << '\n';
    if (!c.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
