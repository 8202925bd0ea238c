#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zollfins/errors.hpp"
#include "zollfins/profile.hpp"

using namespace zollfins;

namespace {

constexpr double kPi = std::numbers::pi;

// Plain power sums, no Horner.
double h_oracle(const std::vector<double>& a, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * std::pow(x, 2.0 * k + 1.0);
  return s;
}
double dh_oracle(const std::vector<double>& a, double x) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * (2.0 * k + 1.0) * std::pow(x, 2.0 * k);
  return s;
}
double d2h_oracle(const std::vector<double>& a, double x) {
  double s = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) s += a[k] * (2.0 * k + 1.0) * (2.0 * k) * std::pow(x, 2.0 * k - 1.0);
  return s;
}

}  // namespace

TEST_CASE("h, h' and h'' match power sums") {
  const std::vector<std::vector<double>> coeffs = {{0.25, -0.25}, {1.0, -2.0, 1.0}, {0.1, 0.2, -0.4, 0.1}};
  for (const auto& a : coeffs) {
    const ZollProfile p(a);
    for (int i = 0; i <= 40; ++i) {
      const double x = -1.0 + i / 20.0;
      CHECK(eval_h(p, x) == doctest::Approx(h_oracle(a, x)).epsilon(1e-14));
      const auto [d1, d2] = eval_h_derivs(p, x);
      CHECK(d1 == doctest::Approx(dh_oracle(a, x)).epsilon(1e-13));
      CHECK(d2 == doctest::Approx(d2h_oracle(a, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("second-derivative coefficients b_{2k+1} = 2(k+1)(2k+3) a_{2k+3}") {
  const ZollProfile p({0.1, 0.2, -0.4, 0.1});
  const auto b = p.second_derivative_coeffs();
  REQUIRE(b.size() == 3);
  CHECK(b[0] == doctest::Approx(2 * 1 * 3 * 0.2));
  CHECK(b[1] == doctest::Approx(2 * 2 * 5 * -0.4));
  CHECK(b[2] == doctest::Approx(2 * 3 * 7 * 0.1));
}

TEST_CASE("Zoll conditions are enforced") {
  CHECK_THROWS_AS(ZollProfile({0.5}), ProfileError);              // h(1) != 0
  CHECK_THROWS_AS(ZollProfile({3.0, -3.0}), ProfileError);        // max |h| = 2/sqrt(3) > 1
  CHECK_THROWS_AS(ZollProfile({0.1, -0.1 + 1e-9}), ProfileError);  // sum off by 1e-9
  CHECK_NOTHROW(ZollProfile({0.1, -0.1 + 1e-13}));
  CHECK_NOTHROW(ZollProfile::example2());
  CHECK_THROWS_AS(ZollProfile({NAN, 0.0}), ProfileError);
}

TEST_CASE("parsing") {
  CHECK(ZollProfile::parse("").is_round());
  CHECK(ZollProfile::parse("0").is_round());
  const ZollProfile p = ZollProfile::parse("0.25, -0.25");
  CHECK(p.h(0.5) == doctest::Approx(ZollProfile::example1(0.25).h(0.5)));
  CHECK(ZollProfile::parse(p.literal()).literal() == p.literal());
  CHECK_THROWS_AS(ZollProfile::parse("0.25,abc"), ProfileError);
}

TEST_CASE("domain of h") {
  const ZollProfile p = ZollProfile::example1(0.25);
  CHECK_THROWS_AS(eval_h(p, 1.0 + 1e-9), DomainError);
  CHECK_NOTHROW(eval_h(p, 1.0 + 1e-13));
  CHECK_THROWS_AS(gauss_curvature(p, -0.1), DomainError);
}

TEST_CASE("Gauss curvature: closed form, expanded eps x (1 - x^2) formula and finite differences") {
  for (double eps : {0.25, 0.45, 0.6}) {
    const ZollProfile p = ZollProfile::example1(eps);
    for (int i = 1; i < 60; ++i) {
      const double r = kPi * i / 60.0;
      const double x = std::cos(r);
      // expanded by hand for h = eps x (1 - x^2)
      const double expanded = -(2.0 * eps * x * x * x + 1.0) / std::pow(eps * x * x * x - eps * x - 1.0, 3);
      CHECK(std::abs(gauss_curvature(p, r) - expanded) < 1e-12);
      CHECK(std::abs(gauss_curvature(p, r) - curvature_fd_check(p, r, 1e-4)) < 1e-6);
    }
    CHECK(p.curvature_at_x(-1.0) == doctest::Approx(1.0 - 2.0 * eps).epsilon(1e-14));
    CHECK(p.curvature_at_x(0.0) == doctest::Approx(1.0));
  }
  for (int i = 1; i < 20; ++i) CHECK(gauss_curvature(ZollProfile(), kPi * i / 20.0) == doctest::Approx(1.0));
}

TEST_CASE("h = eps x (1 - x^2): the only real zero of G sits at -cbrt(4 eps^2)/(2 eps)") {
  const double eps = 0.6;
  const ZollProfile p = ZollProfile::example1(eps);
  const double x0 = -std::cbrt(4.0 * eps * eps) / (2.0 * eps);
  CHECK(std::abs(p.curvature_at_x(x0)) < 1e-12);
}

TEST_CASE("h = x (1 - x^2)^2: critical points of G") {
  const ZollProfile p = ZollProfile::example2();
  const auto cps = curvature_critical_points(p);
  REQUIRE(cps.size() == 4);
  const double expected[4][2] = {{-0.81, 0.36}, {-0.35, 2.18}, {0.33, 0.56}, {0.88, 1.42}};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(cps[i].x - expected[i][0]) <= 0.01);
    CHECK(std::abs(cps[i].g - expected[i][1]) <= 0.01);
    // slope oracle: central difference of G vanishes
    const double s = 1e-6;
    CHECK(std::abs((p.curvature_at_x(cps[i].x + s) - p.curvature_at_x(cps[i].x - s)) / (2 * s)) < 1e-6);
  }
}

TEST_CASE("positive-curvature witness") {
  const CurvatureWitness bad = check_positive_curvature(ZollProfile::example1(0.6));
  CHECK_FALSE(bad.positive);
  CHECK(bad.x == doctest::Approx(-1.0));
  CHECK(bad.g == doctest::Approx(-0.2).epsilon(1e-12));
  const CurvatureWitness ok = check_positive_curvature(ZollProfile::example1(0.25));
  CHECK(ok.positive);
  CHECK(ok.g == doctest::Approx(0.5));
  // dense-scan oracle
  for (const ZollProfile& p : {ZollProfile::example1(0.45), ZollProfile::example2()}) {
    double min_g = 1e9;
    for (int i = 0; i <= 200000; ++i) min_g = std::min(min_g, p.curvature_at_x(-1.0 + i / 100000.0));
    const CurvatureWitness w = check_positive_curvature(p);
    CHECK(w.g <= min_g + 1e-12);
    CHECK(w.g == doctest::Approx(min_g).epsilon(1e-8));
  }
}

TEST_CASE("metric coefficients") {
  const ZollProfile p = ZollProfile::example2();
  const MetricCoeffs m = metric_coeffs(p, 1.1);
  const double one_h = 1.0 + h_oracle({1.0, -2.0, 1.0}, std::cos(1.1));
  CHECK(m.g_rr == doctest::Approx(one_h * one_h));
  CHECK(m.g_thth == doctest::Approx(std::sin(1.1) * std::sin(1.1)));
  CHECK_THROWS_AS(metric_coeffs(p, 0.0), DomainError);
  CHECK_THROWS_AS(metric_coeffs(p, kPi), DomainError);
  CHECK_THROWS_AS(curvature_fd_check(p, 1.0, 1e-9), DomainError);
}
