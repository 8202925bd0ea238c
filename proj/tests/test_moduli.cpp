#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zollfins/errors.hpp"
#include "zollfins/jacobi.hpp"
#include "zollfins/moduli.hpp"

using namespace zollfins;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> interior(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 1; i <= n; ++i) out.push_back(lo + (hi - lo) * i / (n + 1));
  return out;
}

// Squared implicit equations written out by hand for the two worked profiles.
double example1_residual(double eps, double R, double v1, double v2) {
  const double l2 = std::cos(R) * std::cos(R);
  const double c2 = std::sin(R) * std::sin(R);
  const double rhs = -v2 + eps * v1 * v1 * l2 - eps * c2;
  return (1 - v1 * v1) / l2 - rhs * rhs;
}

double example2_residual(double R, double v1, double v2) {
  const double l2 = std::cos(R) * std::cos(R);
  const double s2 = std::sin(R) * std::sin(R);
  const double b = std::pow(v1, 4) * l2 * l2 + 6 * v1 * v1 * l2 * s2 - 3 * s2 * s2 - 3 * v2;
  return (1 - v1 * v1) / l2 - b * b / 9.0;
}

}  // namespace

TEST_CASE("coordinates of geodesics") {
  const ZollProfile p = ZollProfile::example1(0.25);
  ModuliPoint m = coords_of_geodesic(p, {kPi / 6, 1.0, 0.5, 1});
  CHECK(m.R == doctest::Approx(kPi / 6));
  CHECK(m.Theta == doctest::Approx(1.0));
  m = coords_of_geodesic(p, {kPi / 6, 1.0, -0.5, 1});
  CHECK(m.R == doctest::Approx(-kPi / 6));
  CHECK(m.Theta == doctest::Approx(1.0 + kPi));
  m = coords_of_geodesic(p, {1e-9, kPi / 2, 0.0, 1});
  CHECK(std::abs(m.R) < 1e-15);
  CHECK(std::abs(m.Theta) < 1e-12);
  CHECK_THROWS_AS(coords_of_geodesic(p, {kPi / 2, 0.0, 1.0, 1}), DomainError);
}

TEST_CASE("coordinates are constant along a geodesic") {
  for (const ZollProfile& p : {ZollProfile(), ZollProfile::example2()}) {
    for (double c : {0.45, -0.45, 0.0}) {
      const GeodesicState s{std::asin(std::abs(c)) + 1e-9, 0.7, c, 1};
      const ModuliPoint m0 = coords_of_geodesic(p, s);
      const GeodesicTrace tr = integrate_geodesic(p, s, 2 * kPi, 1e-11, 64);
      for (const GeodesicSample& x : tr.samples) {
        if (c == 0.0 && std::sin(x.r) < 1e-3) continue;  // pole passage
        const ModuliPoint m = coords_of_geodesic(p, {x.r, x.theta, c, x.sign});
        CHECK(m.R == doctest::Approx(m0.R));
        CHECK(std::abs(std::remainder(m.Theta - m0.Theta, 2 * kPi)) < 1e-7);
      }
    }
  }
}

TEST_CASE("turning-point sample") {
  const ZollProfile p = ZollProfile::example2();
  const double R = 0.7;
  const IndicatrixSample s = indicatrix_parametric(p, R, R, 1);
  CHECK(std::abs(s.v1) < 1e-15);
  CHECK(s.v2 == doctest::Approx(-(1 + p.h(std::cos(R))) / std::cos(R)).epsilon(1e-14));
  CHECK_THROWS_AS(indicatrix_parametric(p, R, R - 0.01, 1), DomainError);
  CHECK_THROWS_AS(indicatrix_parametric(p, kPi / 2, 1.0, 1), DomainError);
}

TEST_CASE("round sphere gives the ellipse") {
  for (double R : {0.0, kPi / 6, kPi / 3}) {
    const IndicatrixCurve curve = indicatrix_curve(ZollProfile(), R, 500);
    const double l2 = std::cos(R) * std::cos(R);
    CHECK(curve.samples.size() >= 1000);
    for (const IndicatrixSample& s : curve.samples) {
      CHECK(std::abs(s.v1 * s.v1 + l2 * s.v2 * s.v2 - 1.0) < 1e-10);
      CHECK(indicatrix_regularized(ZollProfile(), R, s.r, s.branch).v2 ==
            doctest::Approx(-std::cos(s.r) / l2).epsilon(1e-13));
    }
    CHECK(curve.convex);
    CHECK(curve.winding == 1);
  }
}

TEST_CASE("single eps x (1 - x^2) sample satisfies the hand-written equation") {
  const IndicatrixSample s = indicatrix_parametric(ZollProfile::example1(0.25), 0.4, 1.0, 1);
  CHECK(std::abs(example1_residual(0.25, 0.4, s.v1, s.v2)) < 1e-8);
}

TEST_CASE("parametric samples satisfy the implicit equation") {
  const std::vector<double> Rs{-1.4, -1.0, -0.6, -0.2, 0.0, 0.3, 0.7, 1.1, 1.45};
  for (double eps : {0.25, 0.45}) {
    const ZollProfile p = ZollProfile::example1(eps);
    for (double R : Rs) {
      const double rc = std::abs(R);
      for (double r : interior(rc, kPi - rc, 200)) {
        for (int b : {1, -1}) {
          const IndicatrixSample s = indicatrix_parametric(p, R, r, b);
          CHECK(std::abs(example1_residual(eps, R, s.v1, s.v2)) < 1e-8);
          CHECK(std::abs(implicit_residual(p, R, s.v1, s.v2)) < 1e-8);
        }
      }
    }
  }
  const ZollProfile p = ZollProfile::example2();
  for (double R : Rs) {
    const double rc = std::abs(R);
    for (double r : interior(rc, kPi - rc, 200)) {
      for (int b : {1, -1}) {
        const IndicatrixSample s = indicatrix_parametric(p, R, r, b);
        CHECK(std::abs(example2_residual(R, s.v1, s.v2)) < 1e-8);
        CHECK(std::abs(implicit_residual(p, R, s.v1, s.v2)) < 1e-8);
      }
    }
  }
}

TEST_CASE("regularized and parametric forms agree away from the equator") {
  for (const ZollProfile& p : {ZollProfile::example1(0.45), ZollProfile::example2()}) {
    for (double R : {-0.9, 0.2, 1.2}) {
      const double rc = std::abs(R);
      for (double r : interior(rc, kPi - rc, 40)) {
        if (std::abs(r - kPi / 2) < 0.05) continue;
        const double a = indicatrix_parametric(p, R, r, 1).v2;
        CHECK(std::abs(a - indicatrix_regularized(p, R, r, 1).v2) < 1e-10);
        CHECK(std::abs(a - indicatrix_regularized(p, R, r, 1, 0.0, JIntegral::kClosedForm).v2) < 1e-10);
      }
      // finite through r = pi/2
      CHECK(std::isfinite(indicatrix_regularized(p, R, kPi / 2, -1).v2));
    }
  }
}

TEST_CASE("F-equation degree and top-row cancellation") {
  const ImplicitStructure e1(ZollProfile::example1(0.25));
  const ImplicitStructure e2(ZollProfile::example2());
  CHECK(e1.s_degree == 2);
  CHECK(e2.s_degree == 4);
  CHECK(implicit_polynomial(ZollProfile::example1(0.25), 0.4).f_degree == 4);
  CHECK(implicit_polynomial(ZollProfile::example2(), 0.4).f_degree == 8);
  CHECK(implicit_polynomial(ZollProfile(), 0.4).f_degree == 2);
  // S(v1) for h = x (1 - x^2)^2, read off the hand-written squared equation
  const double R = 0.55;
  const ImplicitPolynomial poly = implicit_polynomial(ZollProfile::example2(), R);
  const double l2 = std::cos(R) * std::cos(R);
  const double s2 = std::sin(R) * std::sin(R);
  for (double v1 : {-0.9, -0.3, 0.0, 0.5, 1.0}) {
    const double expected = -(std::pow(v1, 4) * l2 * l2 + 6 * v1 * v1 * l2 * s2 - 3 * s2 * s2) / 3.0;
    CHECK(poly.eval_s(v1) == doctest::Approx(expected).epsilon(1e-13));
  }
  const ImplicitPolynomial p1 = implicit_polynomial(ZollProfile::example1(0.3), R);
  for (double v1 : {-0.7, 0.2, 0.9}) CHECK(p1.eval_s(v1) == doctest::Approx(-0.3 * v1 * v1 * l2 + 0.3 * s2).epsilon(1e-13));
  CHECK_FALSE(p1.describe(ImplicitStructure(ZollProfile::example1(0.3))).empty());
}

TEST_CASE("chart points lie on the curve with correct tangent") {
  const ZollProfile p = ZollProfile::example2();
  const IndicatrixChart chart(p, 0.8);
  for (double u : interior(0.0, 2 * kPi, 30)) {
    const auto x = chart.point(u);
    CHECK(std::abs(implicit_residual(p, 0.8, x[0], x[1])) < 1e-12);
    const double h = 1e-6;
    const auto a = chart.point(u + h);
    const auto b = chart.point(u - h);
    const auto t = chart.tangent(u);
    CHECK(std::abs((a[0] - b[0]) / (2 * h) - t[0]) < 1e-7);
    CHECK(std::abs((a[1] - b[1]) / (2 * h) - t[1]) < 1e-7);
  }
  for (double r : {0.9, 1.5, 2.2}) {
    for (int b : {1, -1}) {
      const auto x = chart.point(chart.angle_of(r, b));
      const IndicatrixSample s = indicatrix_parametric(p, 0.8, r, b);
      CHECK(std::abs(x[0] - s.v1) < 1e-12);
      CHECK(std::abs(x[1] - s.v2) < 1e-10);
    }
  }
}

TEST_CASE("closed curves") {
  for (const ZollProfile& p : {ZollProfile::example1(0.45), ZollProfile::example2()}) {
    for (double R : {-1.3, 0.0, 0.8, 1.5}) {
      const IndicatrixCurve c = indicatrix_curve(p, R, 64, 0.3);
      CHECK(c.closure_gap < 1e-10);
      CHECK(c.winding == 1);
      CHECK(c.star_shaped);
      CHECK(c.convex);
      CHECK(c.violation.empty());
      CHECK_NOTHROW(require_convex(c));
      CHECK(c.samples.front().Theta == 0.3);
    }
  }
  const IndicatrixCurve bad = indicatrix_curve(ZollProfile::example1(0.6), 0.0, 64);
  CHECK_FALSE(bad.convex);
  CHECK_THROWS_AS(require_convex(bad), ConvexityError);
  CHECK_THROWS_AS(indicatrix_curve(ZollProfile(), 0.3, 4), DomainError);
}

TEST_CASE("indicatrix curvature: both sides, and a polyline oracle") {
  for (const ZollProfile& p : {ZollProfile::example1(0.25), ZollProfile::example1(0.45), ZollProfile::example2()}) {
    for (double R : {-1.0, 0.1, 0.9}) {
      const double rc = std::abs(R);
      for (double r : interior(rc, kPi - rc, 25)) {
        for (int b : {1, -1}) {
          const CurvaturePair k = indicatrix_curvature(p, R, r, b);
          CHECK(k.from_metric > 0.0);
          CHECK(std::abs(k.from_curve - k.from_metric) <= 1e-6 * std::abs(k.from_metric));
        }
      }
    }
  }
  // same ratio det(x'', x') / det(x', x) from finite differences of parametric samples
  const ZollProfile p = ZollProfile::example2();
  const double R = 0.5;
  for (double r : {0.8, 1.3, 2.0}) {
    const double d = 1e-4;
    const auto a = indicatrix_parametric(p, R, r - d, 1);
    const auto m = indicatrix_parametric(p, R, r, 1);
    const auto c = indicatrix_parametric(p, R, r + d, 1);
    const double d1 = (c.v1 - a.v1) / (2 * d), d2 = (c.v2 - a.v2) / (2 * d);
    const double dd1 = (c.v1 - 2 * m.v1 + a.v1) / (d * d), dd2 = (c.v2 - 2 * m.v2 + a.v2) / (d * d);
    const double k = (dd1 * d2 - dd2 * d1) / (d1 * m.v2 - d2 * m.v1);
    CHECK(k == doctest::Approx(indicatrix_curvature(p, R, r, 1).from_curve).epsilon(1e-5));
  }
  // negative curvature where G < 0
  bool negative = false;
  const ZollProfile bad = ZollProfile::example1(0.6);
  for (double r : interior(0.0, kPi, 200)) negative = negative || indicatrix_curvature(bad, 0.0, r, 1).from_curve < 0.0;
  CHECK(negative);
}
