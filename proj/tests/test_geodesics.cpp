#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zollfins/errors.hpp"
#include "zollfins/geodesics.hpp"

using namespace zollfins;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<ZollProfile> profiles() {
  return {ZollProfile(), ZollProfile::example1(0.25), ZollProfile::example1(0.45), ZollProfile::example2()};
}

// Trapezoid rule on a periodic smooth integrand, independent of the library quadrature.
template <class F>
double trapezoid(F f, double a, double b, int n) {
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + (b - a) * i / n);
  return s * (b - a) / n;
}

}  // namespace

TEST_CASE("closure integrals equal pi") {
  for (const ZollProfile& p : profiles()) {
    for (double c : {0.0, 0.1, -0.1, 0.3, -0.3, 0.5, -0.5, 0.7, -0.7, 0.9, -0.9}) {
      const ClosureIntegrals ci = closure_integrals(p, c);
      CHECK(std::abs(ci.period - kPi) < 1e-8);
      CHECK(std::abs(ci.advance - kPi) < 1e-8);
    }
    // near-meridian and near-equator
    CHECK(std::abs(closure_integrals(p, 1e-6).advance - kPi) < 1e-8);
    CHECK(std::abs(closure_integrals(p, 0.999).advance - kPi) < 1e-8);
  }
}

TEST_CASE("closure integrals against a trapezoid oracle in the original variables") {
  const ZollProfile p = ZollProfile::example2();
  for (double c : {0.3, 0.7}) {
    const double lam = std::sqrt(1 - c * c);
    // dt = (1 + h) du, dtheta = c (1 + h) / (c^2 + lam^2 sin^2 u) du over u in [0, pi]
    const double T = trapezoid([&](double u) { return 1.0 + p.h(lam * std::cos(u)); }, 0.0, kPi, 4000);
    const double A = trapezoid(
        [&](double u) { return c * (1.0 + p.h(lam * std::cos(u))) / (c * c + lam * lam * std::sin(u) * std::sin(u)); },
        0.0, kPi, 20000);
    const ClosureIntegrals ci = closure_integrals(p, c);
    CHECK(ci.period == doctest::Approx(T).epsilon(1e-11));
    CHECK(ci.advance == doctest::Approx(A).epsilon(1e-9));
  }
}

TEST_CASE("state validation") {
  CHECK(turning_latitude(0.5) == doctest::Approx(kPi / 6));
  CHECK_THROWS_AS(validate_state({0.3, 0.0, 0.5, 1}), DomainError);  // sin 0.3 < 0.5
  CHECK_THROWS_AS(validate_state({1.0, 0.0, 0.5, 0}), DomainError);
  CHECK_THROWS_AS(turning_latitude(1.5), DomainError);
  const ZollProfile p = ZollProfile::example1(0.25);
  CHECK(unit_energy_residual(p, {1.0, 0.0, 0.4, -1}) < 1e-15);
  const FlowRate f = flow_rhs(p, {1.0, 0.0, 0.4, 1});
  CHECK(f.dtheta_dt == doctest::Approx(0.4 / (std::sin(1.0) * std::sin(1.0))));
  CHECK(f.dr_dt > 0.0);
}

TEST_CASE("geodesics close after 2 pi") {
  for (const ZollProfile& p : profiles()) {
    for (double c : {0.5, -0.3, 0.05, 0.9}) {
      const GeodesicState s{std::asin(std::abs(c)) + 0.25, 1.0, c, -1};
      const GeodesicTrace tr = integrate_geodesic(p, s, 2.0 * kPi, 1e-10, 1024);
      const GeodesicSample& e = tr.samples.back();
      CHECK(e.t == doctest::Approx(2.0 * kPi));
      CHECK(std::abs(e.r - s.r) < 1e-8);
      CHECK(std::abs(std::remainder(e.theta - s.theta, 2 * kPi)) < 1e-8);
      CHECK(e.sign == s.sign);
      CHECK(clairaut_residual(tr) < 1e-3);
    }
  }
}

TEST_CASE("trace agrees with the quadrature time and longitude along the angle chart") {
  const ZollProfile p = ZollProfile::example1(0.45);
  const double c = 0.4;
  const GeodesicState s{std::asin(c), 0.0, c, 1};
  const GeodesicTrace tr = integrate_geodesic(p, s, 2.0 * kPi, 1e-11, 64);
  for (std::size_t k = 1; k + 1 < tr.samples.size(); k += 5) {
    const GeodesicSample& x = tr.samples[k];
    const double u = angle_coordinate({x.r, x.theta, c, x.sign});
    CHECK(std::abs(geodesic_time(p, c, u) - x.t) < 1e-8);
    CHECK(std::abs(std::remainder(geodesic_longitude_advance(p, c, u) - x.theta, 2 * kPi)) < 1e-8);
  }
}

TEST_CASE("round sphere: cos r = cos r_c cos t from the turning point") {
  const double c = 0.6;
  const GeodesicTrace tr = integrate_geodesic(ZollProfile(), {std::asin(c), 0.0, c, 1}, 2.0 * kPi, 1e-11, 64);
  for (const GeodesicSample& x : tr.samples) CHECK(std::abs(std::cos(x.r) - 0.8 * std::cos(x.t)) < 1e-9);
}

TEST_CASE("meridians and equators") {
  const GeodesicTrace m = integrate_geodesic(ZollProfile(), {0.0, 0.3, 0.0, 1}, 2.0 * kPi, 1e-11, 64);
  for (const GeodesicSample& x : m.samples) {
    if (x.t > 2 * kPi - 1e-9) break;
    const double expected = x.t <= kPi ? x.t : 2 * kPi - x.t;
    CHECK(std::abs(x.r - expected) < 1e-8);
    const double theta = x.t < kPi - 1e-9 ? 0.3 : (x.t > kPi + 1e-9 ? 0.3 + kPi : x.theta);
    CHECK(x.theta == doctest::Approx(theta));
  }
  const GeodesicTrace e = integrate_geodesic(ZollProfile::example2(), {kPi / 2, 0.0, 1.0, 1}, 3.0, 1e-10, 64);
  for (const GeodesicSample& x : e.samples) CHECK(x.theta == doctest::Approx(x.t));
}

TEST_CASE("integrator argument checks") {
  const ZollProfile p;
  CHECK_THROWS_AS(integrate_geodesic(p, {1.0, 0.0, 0.2, 1}, 1.0, 1e-15), DomainError);
  CHECK_THROWS_AS(integrate_geodesic(p, {1.0, 0.0, 0.2, 1}, -1.0), DomainError);
  CHECK_THROWS_AS(integrate_geodesic(p, {1.0, 0.0, 0.2, 1}, 1.0, 1e-10, 4), DomainError);
  CHECK_THROWS_AS(closure_integrals(p, 1.0), DomainError);
}
