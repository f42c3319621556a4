#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopcurv/geometry.hpp"
#include "loopcurv/report.hpp"

using namespace loopcurv;

namespace {

TrigPoly rsin(int n, long num, long den = 1) {
  return TrigPoly::sine(n, CCoeff(Coeff(make_rat(num, den))));
}

TrigMatrix ad_contract(const LieAlgebraSpec& L, const LoopField& f) {
  const int d = L.dim;
  TrigMatrix m = mat_zero(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j)
        if (L.c(i, j, k) != 0 && !f.components[j].is_zero())
          m[i * d + k] +=
              trig_scale(f.components[j], CCoeff(Coeff(L.c(i, j, k))));
  return m;
}

LoopField diff_field(const LoopField& x, unsigned order) {
  LoopField out = x;
  for (auto& p : out.components) p = trig_diff(p, order);
  return out;
}

bool mats_equal(const TrigMatrix& a, const TrigMatrix& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

// single parity-0 matrix at one grade; requires no odd term there
TrigMatrix grade_matrix(const Symbol& s, const Rat& g) {
  TrigMatrix out = mat_zero(s.dim());
  for (const SymbolTerm& t : grade_extract(s, g)) {
    REQUIRE(t.parity == 0);
    out = mat_add(s.dim(), out, t.coeff);
  }
  return out;
}

bool terms_negated(const Symbol& a, const Symbol& b) {
  if (a.terms().size() != b.terms().size()) return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const SymbolTerm& ta = a.terms()[i];
    const SymbolTerm& tb = b.terms()[i];
    if (ta.grade.value != tb.grade.value || ta.parity != tb.parity)
      return false;
    if (!mats_equal(ta.coeff, mat_scale(tb.coeff, CCoeff(-1)))) return false;
  }
  return true;
}

std::mt19937& global_rng() {
  static std::mt19937 rng(40100);
  return rng;
}

LieAlgebraSpec random_algebra(std::mt19937& rng) {
  std::uniform_int_distribution<int> pick(0, 3);
  switch (pick(rng)) {
    case 0: return su2();
    case 1: return so3(make_rat(1));
    case 2: return so3(make_rat(-2));
    default: return so3(make_rat(3, 2));
  }
}

LoopField random_field(std::mt19937& rng, const LieAlgebraSpec& L,
                       int max_degree, bool based) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (;;) {
    std::vector<TrigPoly> comps(L.dim);
    for (int j = 0; j < L.dim; ++j) {
      TrigPoly p;
      for (int n = 1; n <= max_degree; ++n) {
        if (coin(rng) < 0.4)
          p += TrigPoly::sine(n, CCoeff(Coeff(make_rat(num(rng), den(rng)))));
        if (coin(rng) < 0.4)
          p += TrigPoly::cosine(n,
                                CCoeff(Coeff(make_rat(num(rng), den(rng)))));
      }
      if (!based && coin(rng) < 0.3)
        p += TrigPoly::constant(CCoeff(Coeff(make_rat(num(rng), den(rng)))));
      if (based) p += TrigPoly::constant(-p.value_at_zero());
      comps[j] = std::move(p);
    }
    LoopField f(L, std::move(comps));
    if (!f.is_zero()) return f;
  }
}

}  // namespace

TEST_CASE("Sobolev parameter validation and regimes") {
  CHECK_THROWS_AS(SobolevParam(Rat(1, 2), Space::free), SobolevRange);
  CHECK_THROWS_AS(SobolevParam(Rat(1, 4), Space::based), SobolevRange);
  CHECK(SobolevParam(Rat(3, 4), Space::free).regime == Regime::fractional);
  CHECK(SobolevParam(Rat(1), Space::based).regime == Regime::critical);
  CHECK(SobolevParam(Rat(7, 2), Space::free).regime == Regime::supercritical);
  CHECK(default_cutoff(Rat(2)) == Rat(-5));
  CHECK(default_cutoff(Rat(3, 4)) == Rat(-3));
  CHECK(default_cutoff(Rat(1)) == Rat(-3));
}

TEST_CASE("connection grades 0 and -1 match the closed forms") {
  std::mt19937& rng = global_rng();
  for (int it = 0; it < 6; ++it) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 3, true);
    std::uniform_int_distribution<int> den(1, 6);
    const int q = den(rng);
    std::uniform_int_distribution<int> numd(q / 2 + 1, 4 * q);
    const Rat s = make_rat(numd(rng), q);
    for (Space sp : {Space::free, Space::based}) {
      const SobolevParam p(s, sp);
      const ConnectionSymbol nab = connection_symbol(L, x, p, Rat(-1));
      // grade 0: C^i_{jk} X^j
      CHECK(mats_equal(grade_matrix(nab.total, Rat(0)), ad_contract(L, x)));
      // grade -1: i s C^i_{jk} Xdot^j, odd
      const auto g1 = grade_extract(nab.total, Rat(-1));
      if (!g1.empty()) {
        REQUIRE(g1.size() == 1);
        CHECK(g1[0].parity == 1);
        const TrigMatrix expect = mat_scale(
            ad_contract(L, diff_field(x, 1)), CCoeff(Coeff(0), Coeff(s)));
        CHECK(mats_equal(g1[0].coeff, expect));
      }
    }
  }
}

TEST_CASE("connection grade -2 in the supercritical regime") {
  std::mt19937& rng = global_rng();
  for (const Rat& s : {Rat(2), Rat(7, 2), Rat(9, 5)}) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 2, true);
    for (Space sp : {Space::free, Space::based}) {
      const SobolevParam p(s, sp);
      const ConnectionSymbol nab = connection_symbol(L, x, p, Rat(-2));
      const TrigMatrix expect =
          mat_scale(ad_contract(L, diff_field(x, 2)),
                    CCoeff(Coeff(Rat(-s * (s + Rat(1, 2))))));
      CHECK(mats_equal(grade_matrix(nab.total, Rat(-2)), expect));
    }
  }
}

TEST_CASE("critical merge: based connection grade -2 is -C Xdotdot") {
  std::mt19937& rng = global_rng();
  const SobolevParam p(Rat(1), Space::based);
  for (int it = 0; it < 4; ++it) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 3, true);
    const ConnectionSymbol nab = connection_symbol(L, x, p, Rat(-2));
    const TrigMatrix expect =
        mat_scale(ad_contract(L, diff_field(x, 2)), CCoeff(-1));
    CHECK(mats_equal(grade_matrix(nab.total, Rat(-2)), expect));
    // audit trail: the power-bracket part contributes +1/2 C Xdotdot
    const TrigMatrix from_b = grade_matrix(nab.part_b, Rat(-2));
    CHECK(mats_equal(from_b, mat_scale(ad_contract(L, diff_field(x, 2)),
                                       CCoeff(Coeff(Rat(1, 2))))));
  }
}

TEST_CASE("fractional leading connection term -1/2 C (Lap^s X)") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  const Rat s(3, 4);
  const SobolevParam p(s, Space::based);
  const ConnectionSymbol nab = connection_symbol(L, x, p, Rat(-2));
  // Lap^s X = X for sin(t)
  const TrigMatrix expect =
      mat_scale(ad_contract(L, x), CCoeff(Coeff(Rat(-1, 2))));
  CHECK(mats_equal(grade_matrix(nab.total, Rat(-3, 2)), expect));
}

TEST_CASE("curvature grades 0 and -1 vanish exactly (randomized sweep)") {
  std::mt19937& rng = global_rng();
  int cases = 0;
  while (cases < 50) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 3, false);
    const LoopField y = random_field(rng, L, 3, false);
    std::uniform_int_distribution<int> den(1, 8);
    const int q = den(rng);
    std::uniform_int_distribution<int> numd(q / 2 + 1, 4 * q);
    const SobolevParam p(make_rat(numd(rng), q), Space::free);
    const CurvatureSymbol omega = curvature_symbol(L, x, y, p, Rat(-1));
    CHECK(grade_extract(omega.total, Rat(0)).empty());
    CHECK(grade_extract(omega.total, Rat(-1)).empty());
    ++cases;
  }
}

TEST_CASE("supercritical curvature grade -2 and second-derivative cancel") {
  std::mt19937& rng = global_rng();
  for (int it = 0; it < 5; ++it) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 3, false);
    const LoopField y = random_field(rng, L, 3, false);
    std::uniform_int_distribution<int> numd(9, 32);
    const Rat s = make_rat(numd(rng), 8);  // s > 1
    const SobolevParam p(s, Space::free);
    const CurvatureSymbol omega = curvature_symbol(L, x, y, p, Rat(-2));
    // s^2 C^i_{jk} C^j_{lm} Xdot^l Ydot^m: no Xdotdot/Ydotdot remains
    const TrigMatrix expect = mat_scale(
        ad_contract(L, bracket_fields(L, diff_field(x, 1), diff_field(y, 1))),
        CCoeff(Coeff(Rat(s * s))));
    CHECK(mats_equal(grade_matrix(omega.total, Rat(-2)), expect));
  }
}

TEST_CASE("critical curvature grade -2 is exactly empty (based)") {
  std::mt19937& rng = global_rng();
  const SobolevParam p(Rat(1), Space::based);
  for (int it = 0; it < 5; ++it) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 3, true);
    const LoopField y = random_field(rng, L, 3, true);
    const CurvatureSymbol omega = curvature_symbol(L, x, y, p, Rat(-2));
    CHECK(omega.total.is_empty());
  }
}

TEST_CASE("critical free-loop curvature keeps a grade -2 term") {
  // unlike the based case, the free assembly at s = 1 leaves
  // -1/2 ad_{[X,Y]} |xi|^{-2}
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  const LoopField y = example_field_y();
  const SobolevParam p(Rat(1), Space::free);
  const CurvatureSymbol omega = curvature_symbol(L, x, y, p, Rat(-2));
  const TrigMatrix expect = mat_scale(
      ad_contract(L, bracket_fields(L, x, y)), CCoeff(Coeff(Rat(-1, 2))));
  CHECK(mats_equal(grade_matrix(omega.total, Rat(-2)), expect));
  CHECK(leading_order(omega) == Rat(-2));
}

TEST_CASE("curvature is antisymmetric term by term") {
  std::mt19937& rng = global_rng();
  for (const Rat& s : {Rat(2), Rat(3, 4)}) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 1, true);
    const LoopField y = random_field(rng, L, 1, true);
    const SobolevParam p(s, Space::based);
    const CurvatureSymbol oxy = curvature_symbol(L, x, y, p, Rat(-2));
    const CurvatureSymbol oyx = curvature_symbol(L, y, x, p, Rat(-2));
    if (oxy.total.is_empty())
      CHECK(oyx.total.is_empty());
    else
      CHECK(terms_negated(oxy.total, oyx.total));
  }
}

TEST_CASE("abelian algebras are flat at every grade") {
  const LieAlgebraSpec A = abelian(3);
  std::vector<TrigPoly> cx(3), cy(3);
  cx[0] = rsin(1, 1);
  cy[1] = rsin(2, 3);
  const LoopField x(A, std::move(cx));
  const LoopField y(A, std::move(cy));
  for (const Rat& s : {Rat(3, 4), Rat(1), Rat(2)}) {
    const SobolevParam p(s, Space::free);
    const ConnectionSymbol nab = connection_symbol(A, x, p, Rat(-4));
    CHECK(nab.total.is_empty());
    const CurvatureSymbol omega = curvature_symbol(A, x, y, p, Rat(-4));
    CHECK(omega.total.is_empty());
  }
}

TEST_CASE("leading order across the regimes") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  const LoopField y = example_field_y();
  CHECK(leading_order(curvature_symbol(L, x, y, SobolevParam(Rat(2), Space::free),
                                       Rat(-2))) == Rat(-2));
  CHECK(leading_order(curvature_symbol(
            L, x, y, SobolevParam(Rat(3, 4), Space::based), Rat(-2))) ==
        Rat(-3, 2));
  CHECK_FALSE(leading_order(curvature_symbol(
      L, x, y, SobolevParam(Rat(1), Space::based), Rat(-4))));
}

TEST_CASE("free and based assemblies agree on shared grades (s != 1)") {
  std::mt19937& rng = global_rng();
  for (const Rat& s : {Rat(3, 4), Rat(2), Rat(5, 2)}) {
    const LieAlgebraSpec L = su2();
    // frequency-1 fields keep the based fractional powers exact
    const LoopField x = random_field(rng, L, 1, true);
    const LoopField y = random_field(rng, L, 1, true);
    const ConnectionSymbol cf =
        connection_symbol(L, x, SobolevParam(s, Space::free), Rat(-2));
    const ConnectionSymbol cb =
        connection_symbol(L, x, SobolevParam(s, Space::based), Rat(-2));
    const CurvatureSymbol of_ =
        curvature_symbol(L, x, y, SobolevParam(s, Space::free), Rat(-2));
    const CurvatureSymbol ob =
        curvature_symbol(L, x, y, SobolevParam(s, Space::based), Rat(-2));
    for (const Rat& g : {Rat(0), Rat(-1), Rat(-2)}) {
      auto part = [&](const Symbol& sym, int parity) {
        TrigMatrix m = mat_zero(3);
        for (const SymbolTerm& t : grade_extract(sym, g))
          if (t.parity == parity) m = mat_add(3, m, t.coeff);
        return m;
      };
      for (int parity : {0, 1}) {
        CHECK(mats_equal(part(cf.total, parity), part(cb.total, parity)));
        CHECK(mats_equal(part(of_.total, parity), part(ob.total, parity)));
      }
    }
  }
}

TEST_CASE("torsion vanishes under the minus convention only") {
  std::mt19937& rng = global_rng();
  for (int it = 0; it < 4; ++it) {
    const LieAlgebraSpec L = random_algebra(rng);
    const LoopField x = random_field(rng, L, 2, true);
    const LoopField y = random_field(rng, L, 2, true);
    std::uniform_int_distribution<int> numd(5, 16);
    const SobolevParam p(make_rat(numd(rng), 4), Space::free);
    CHECK(torsion_check(L, x, y, p, Rat(-4)).is_empty());
    const Symbol flipped =
        torsion_check(L, x, y, p, Rat(-4), SignConvention::plus);
    CHECK_FALSE(flipped.is_empty());
    CHECK(flipped.leading_grade() == Rat(0));
  }
  // degenerate inputs
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  CHECK(torsion_check(L, x, x, SobolevParam(Rat(2), Space::free), Rat(-3))
            .is_empty());
  const LieAlgebraSpec A = abelian(2);
  std::vector<TrigPoly> c(2);
  c[0] = rsin(1, 1);
  const LoopField ax(A, std::move(c));
  CHECK(torsion_check(A, ax, ax, SobolevParam(Rat(1), Space::free), Rat(-3))
            .is_empty());
}

TEST_CASE("validation errors of the assembly layer") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  std::vector<TrigPoly> c(3);
  c[0] = TrigPoly::cosine(1, CCoeff(1));  // cos(0) = 1 != 0
  const LoopField not_based(L, std::move(c));
  CHECK_THROWS_AS(connection_symbol(L, not_based,
                                    SobolevParam(Rat(1), Space::based),
                                    Rat(-2)),
                  InvalidInput);
  std::vector<TrigPoly> c2(3);
  c2[0] = rsin(1, 1);
  const LoopField other(abelian(3), std::move(c2));
  CHECK_THROWS_AS(
      connection_symbol(L, other, SobolevParam(Rat(1), Space::free), Rat(-2)),
      InvalidInput);
  CHECK_THROWS_AS(
      connection_symbol(L, x, SobolevParam(Rat(1), Space::free), Rat(1)),
      InvalidInput);
}
