#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loopcurv/report.hpp"

using namespace loopcurv;

namespace {

LoopField sin_field(int direction, int freq = 1, long num = 1) {
  std::vector<TrigPoly> c(3);
  c[direction] = TrigPoly::sine(freq, CCoeff(Coeff(make_rat(num))));
  return LoopField(su2(), std::move(c));
}

}  // namespace

TEST_CASE("multiplier matrices: values and inverses") {
  const TruncatedOperator m1 = multiplier_matrix(Rat(1), 1, 8, 3);
  CHECK(m1.get(0, 0, 0, 0) == std::complex<double>(1.0, 0.0));
  CHECK(m1.get(0, 2, 1, 1) == std::complex<double>(5.0, 0.0));
  CHECK(m1.get(0, -2, 2, 2) == std::complex<double>(5.0, 0.0));
  CHECK(m1.get(0, 2, 0, 1) == std::complex<double>(0.0, 0.0));

  const TruncatedOperator m1i = multiplier_matrix(Rat(1), -1, 8, 3);
  CHECK(m1i.get(0, 2, 1, 1).real() == doctest::Approx(0.2).epsilon(1e-14));

  const Eigen::MatrixXcd prod = op_mul(m1, m1i).to_dense();
  CHECK((prod - Eigen::MatrixXcd::Identity(prod.rows(), prod.cols()))
            .norm() < 1e-12);

  // based multipliers annihilate the zero mode in both directions
  const TruncatedOperator b = multiplier_matrix(Rat(3, 4), 1, 8, 3,
                                                Space::based);
  CHECK(b.get(0, 0, 0, 0) == std::complex<double>(0.0, 0.0));
  CHECK(b.get(0, 2, 0, 0).real() ==
        doctest::Approx(std::pow(4.0, 0.75)).epsilon(1e-14));
  CHECK_THROWS_AS(multiplier_matrix(Rat(1), 2, 8, 3), InvalidInput);
}

TEST_CASE("convolution matrix of the pointwise bracket") {
  const LieAlgebraSpec L = su2();
  CHECK_THROWS_AS(ad_matrix(L, sin_field(0, 9), 4), InvalidTruncation);

  std::vector<TrigPoly> c(3);
  c[0] = TrigPoly::constant(CCoeff(1));
  const TruncatedOperator adc = ad_matrix(L, LoopField(L, std::move(c)), 6);
  // constant e acts block-diagonally as ad_e: (ad_e)^i_k = C^i_{1k}
  CHECK(adc.bandwidth() == 0);
  CHECK(adc.get(0, 3, 1, 2) == std::complex<double>(2.0, 0.0));
  CHECK(adc.get(0, 3, 2, 1) == std::complex<double>(-2.0, 0.0));

  // sin(t) e on the mode e^{i t} f: i e^{2 i t} g - i g
  const TruncatedOperator ads = ad_matrix(L, sin_field(0), 6);
  CHECK(ads.get(1, 1, 2, 1) == std::complex<double>(0.0, 1.0));
  CHECK(ads.get(-1, 1, 2, 1) == std::complex<double>(0.0, -1.0));
  CHECK(ads.get(1, 1, 1, 1) == std::complex<double>(0.0, 0.0));

  const LieAlgebraSpec A = abelian(3);
  std::vector<TrigPoly> ac(3);
  ac[1] = TrigPoly::sine(2, CCoeff(Coeff(make_rat(7))));
  const TruncatedOperator za = ad_matrix(A, LoopField(A, std::move(ac)), 6);
  CHECK(za.to_dense().norm() == 0.0);
}

TEST_CASE("matrix action matches the exact bracket on embedded fields") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  std::vector<TrigPoly> yc(3);
  yc[1] = TrigPoly::sine(2, CCoeff(Coeff(make_rat(3, 2))));
  yc[2] = TrigPoly::cosine(1, CCoeff(Coeff(make_rat(-2))));
  const LoopField y(L, std::move(yc));

  const int N = 16;
  const TruncatedOperator adx = ad_matrix(L, x, N);
  const Eigen::VectorXcd got = adx.apply(field_to_vector(y, N));
  const Eigen::VectorXcd expect = field_to_vector(bracket_fields(L, x, y), N);
  CHECK((got - expect).norm() < 1e-14);
}

TEST_CASE("connection matrices are skew-adjoint for the s-metric") {
  const LieAlgebraSpec L = su2();
  const int N = 48;
  for (const Rat& s : {Rat(3, 4), Rat(2)}) {
    const TruncatedOperator m = connection_matrix(L, example_field_x(), s, N);
    const TruncatedOperator gram = multiplier_matrix(s, 1, N, 3);
    const TruncatedOperator r =
        op_add(op_mul(gram, m), op_mul(m.adjoint(), gram));
    double worst = 0, scale = 0;
    for (int n = -N + 2; n <= N - 2; ++n)
      for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, r.column(n, j).norm());
        scale = std::max(scale, op_mul(gram, m).column(n, j).norm());
      }
    CHECK(worst <= 1e-8 * scale);
  }
}

TEST_CASE("order estimation from column norm decay") {
  // inverse multiplier has exact power-law decay
  const TruncatedOperator m = multiplier_matrix(Rat(1), -1, 300, 2);
  const OrderEstimate est = estimate_order(m, 32, 256);
  CHECK(std::abs(est.slope + 2.0) < 0.01);
  CHECK(est.r_squared > 0.9999);
  CHECK(est.norms.size() == 225);

  TruncatedOperator zero(300, 2, 0, Space::free, "zero");
  CHECK_THROWS_AS(estimate_order(zero, 32, 256), RankDeficient);

  const TruncatedOperator band = ad_matrix(su2(), example_field_x(), 64);
  CHECK_THROWS_AS(estimate_order(band, 1, 40), InvalidInput);   // inside margin
  CHECK_THROWS_AS(estimate_order(band, 32, 64), InvalidInput);  // clipped end
}

TEST_CASE("trace diagnostics of explicit operators") {
  TruncatedOperator zero(256, 1, 0, Space::free, "zero");
  const TraceDiagnostics zd = trace_partial_sums(zero, 64);
  CHECK(zd.partial_sums.back() == 0.0);

  const TruncatedOperator m = multiplier_matrix(Rat(2), -1, 256, 3);
  const TraceDiagnostics diag = trace_partial_sums(m, 512);
  CHECK(diag.singular_values[0] == doctest::Approx(1.0));
  // sigma_k ~ (k/6)^{-4}: dyadic tails shrink by about 2^3
  const double ratio = diag.tail_sum(64) / diag.tail_sum(128);
  CHECK(ratio > 4.0);
  CHECK(ratio < 16.0);

  TruncatedOperator small(64, 1, 0, Space::free, "small");
  CHECK_THROWS_AS(trace_partial_sums(small, 8), InvalidInput);
}

TEST_CASE("symbol consistency: exact multiplier, decaying truncations") {
  const LieAlgebraSpec L = su2();
  // a based power is a single-term symbol: the two layers agree to
  // machine precision at every probe
  const Rat s(3, 4);
  const TruncatedOperator bm = multiplier_matrix(s, -1, 128, 3, Space::based);
  const Symbol bs = power_symbol(Space::based, -1, s, 1, 3);
  const ConsistencyReport rep = symbol_consistency(bs, bm, {16, 32, 64});
  CHECK(rep.max_rel_err < 1e-13);

  // truncated connection symbol: the error must fall with n at the rate of
  // the first omitted grade
  const SobolevParam p(Rat(2), Space::free);
  const ConnectionSymbol nab =
      connection_symbol(L, example_field_x(), p, Rat(-3));
  const TruncatedOperator mc = connection_matrix(L, example_field_x(), Rat(2),
                                                 512);
  const ConsistencyReport rc =
      symbol_consistency(nab.total, mc, {64, 128, 256});
  CHECK(rc.points[0].rel_err > rc.points[1].rel_err);
  CHECK(rc.points[1].rel_err > rc.points[2].rel_err);
  CHECK(rc.points[1].rel_err / rc.points[0].rel_err < 0.6);
  CHECK(rc.max_rel_err < 1e-2);

  // the critical based curvature vanishes on every probe; the oracle
  // reports that as rank deficiency rather than a fit
  const TruncatedOperator mz = curvature_matrix(
      L, example_field_x(), example_field_y(), Rat(1), 128, Space::based);
  const CurvatureSymbol oz =
      curvature_symbol(L, example_field_x(), example_field_y(),
                       SobolevParam(Rat(1), Space::based), Rat(-3));
  REQUIRE(oz.total.is_empty());
  CHECK_THROWS_AS(symbol_consistency(oz.total, mz, {16, 32, 64}),
                  RankDeficient);
  double worst = 0;
  for (int n : {16, 32, 64})
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, mz.column(n, j).norm());
  CHECK(worst < 1e-12);  // much faster than any power decay
}

TEST_CASE("curvature matrix antisymmetry and degenerate inputs") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  const LoopField y = example_field_y();
  const int N = 24;
  const TruncatedOperator oxy = curvature_matrix(L, x, y, Rat(2), N);
  const TruncatedOperator oyx = curvature_matrix(L, y, x, Rat(2), N);
  CHECK((oxy.to_dense() + oyx.to_dense()).norm() < 1e-12);
  const TruncatedOperator oxx = curvature_matrix(L, x, x, Rat(2), N);
  CHECK(oxx.to_dense().norm() < 1e-12);
}

TEST_CASE("numeric torsion residual in both spaces") {
  const LieAlgebraSpec L = su2();
  const LoopField x = example_field_x();
  const LoopField y = example_field_y();
  const int N = 64;
  const Eigen::VectorXcd vx = field_to_vector(x, N);
  const Eigen::VectorXcd vy = field_to_vector(y, N);
  const Eigen::VectorXcd vz = field_to_vector(bracket_fields(L, x, y), N);
  // the based model space excludes the zero mode, so the bracket is
  // compared after the same projection the operators carry
  Eigen::VectorXcd vz_based = vz;
  vz_based.segment(N * 3, 3).setZero();
  for (Space sp : {Space::free, Space::based}) {
    const Eigen::VectorXcd& target = sp == Space::free ? vz : vz_based;
    for (const Rat& s : {Rat(3, 4), Rat(1), Rat(2)}) {
      const TruncatedOperator mx = connection_matrix(L, x, s, N, sp);
      const TruncatedOperator my = connection_matrix(L, y, s, N, sp);
      const double res =
          (mx.apply(vy) - my.apply(vx) - target).norm() / vy.norm();
      CHECK(res <= 1e-10);
    }
  }
}

TEST_CASE("spectral layer input validation") {
  const LieAlgebraSpec L = su2();
  std::vector<TrigPoly> c(3);
  c[0] = TrigPoly::cosine(1, CCoeff(1));
  const LoopField not_based(L, std::move(c));
  CHECK_THROWS_AS(connection_matrix(L, not_based, Rat(1), 32, Space::based),
                  InvalidInput);
}
