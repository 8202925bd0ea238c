#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zollfins/errors.hpp"
#include "zollfins/parallel.hpp"
#include "zollfins/polyroots.hpp"
#include "zollfins/quadrature.hpp"

using namespace zollfins;

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {64, 128, 17}) {
    const GaussRule& g = gauss_legendre(n);
    double sum = 0.0;
    for (double w : g.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    // exact for x^(2n-1) and below: int_{-1}^1 x^(2m) = 2/(2m+1)
    const int m = n - 1;
    double moment = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) moment += g.weights[i] * std::pow(g.nodes[i], 2 * m);
    CHECK(moment == doctest::Approx(2.0 / (2 * m + 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value ==
        doctest::Approx(2.0).epsilon(1e-15));
  // endpoint-peaked integrand: int_0^1 1/(x^2 + a^2) = atan(1/a)/a
  const double a = 1e-4;
  const auto r = integrate([a](double x) { return 1.0 / (x * x + a * a); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::atan(1.0 / a) / a).epsilon(1e-13));
  CHECK(r.panels > 1);
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
  QuadratureOptions shallow;
  shallow.max_depth = 1;
  CHECK_THROWS_AS(integrate([](double x) { return std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0, shallow),
                  QuadratureError);
}

TEST_CASE("companion-matrix roots") {
  // (x - 1)(x - 2)(x + 3) = x^3 - 7x + 6
  const std::vector<double> p = {6.0, -7.0, 0.0, 1.0};
  const auto pos = positive_real_roots(p);
  REQUIRE(pos.size() == 2);
  CHECK(pos[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(pos[1] == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(polynomial_roots(std::vector<double>{6.0, -7.0, 0.0, 1.0, 0.0, 0.0}).size() == 3);
  // x^2 + 1 has no real roots
  CHECK(positive_real_roots(std::vector<double>{1.0, 0.0, 1.0}).empty());
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                    if (i == 7) throw DomainError("boom");
                  }),
                  DomainError);
  CHECK(worker_count() >= 1);
}
