#include "zollfins/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>
#include <fmt/format.h>

#include "zollfins/errors.hpp"
#include "zollfins/jacobi.hpp"
#include "zollfins/parallel.hpp"

namespace zollfins {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_two_pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

void check_chart(double R) {
  if (!(std::abs(R) < 0.5 * kPi) || !(std::cos(R) > 1e-9)) {
    throw DomainError(fmt::format("R = {} outside the chart |R| < pi/2", R));
  }
}

void check_branch(int branch) {
  if (branch != 1 && branch != -1) throw DomainError("branch must be +1 or -1");
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

long long alt(int m) { return m % 2 == 0 ? 1 : -1; }

double horner_even(const std::vector<double>& coeffs, double v) {
  const double v2 = v * v;
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * v2 + *it;
  return acc;
}

}  // namespace

ImplicitStructure::ImplicitStructure(const ZollProfile& profile) {
  const int n = static_cast<int>(profile.size());
  const int rows = n + 1;
  p.assign(rows, std::vector<Rational>(n, Rational(0)));
  qq.assign(rows, std::vector<Rational>(n, Rational(0)));
  // P = sum_k a_k L^{2k} (1 + 2k v^2)(1 - v^2)^k
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j <= k + 1 && j < rows; ++j) {
      p[j][k] = Rational(alt(j) * binom(k, j) + 2LL * k * alt(j - 1) * binom(k, j - 1));
    }
  }
  // L^2 v^4 Q = sum_k 2(k+1)(2k+3) a_{k+1} L^{2k+2} sum_rho (-1)^rho C(k, rho) v^{2 rho + 4} / (2 rho + 3)
  for (int k = 0; k + 1 < n; ++k) {
    const long long factor = 2LL * (k + 1) * (2 * k + 3);
    for (int rho = 0; rho <= k; ++rho) {
      qq[rho + 2][k + 1] += Rational(factor * alt(rho) * binom(k, rho), 2 * rho + 3);
    }
  }
  s = p;
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k < n; ++k) s[j][k] += qq[j][k];
  }
  const auto a = profile.odd_coeffs();
  for (int j = 0; j < rows; ++j) {
    for (int k = 0; k < n; ++k) {
      if (s[j][k].numerator() != 0 && a[k] != 0.0) s_degree = std::max(s_degree, 2 * j);
    }
  }
}

double ImplicitPolynomial::eval_p(double v1) const { return horner_even(p, v1); }
double ImplicitPolynomial::eval_q(double v1) const { return horner_even(q, v1); }
double ImplicitPolynomial::eval_s(double v1) const { return horner_even(s, v1); }

double ImplicitPolynomial::eval_ds(double v1) const {
  const double v2 = v1 * v1;
  double acc = 0.0;
  for (std::size_t j = s.size(); j-- > 1;) acc = acc * v2 + 2.0 * static_cast<double>(j) * s[j];
  return acc * v1;
}

double ImplicitPolynomial::v2_closed(double r, double v1) const {
  return -std::cos(r) / (lambda * lambda) - eval_s(v1);
}

std::vector<double> ImplicitPolynomial::f_equation(double v1, double v2) const {
  const int m = f_degree / 2;
  std::vector<double> out(f_degree + 1, 0.0);
  const double lam2 = lambda * lambda;
  out[2 * m] += 1.0 / lam2;
  out[2 * m - 2] -= v1 * v1 / lam2;
  // A(F) = v2 F^{m-1} + sum_j s_j v1^{2j} F^{m - 2j}
  std::vector<double> a(m + 1, 0.0);
  a[m - 1] += v2;
  double vp = 1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const int power = m - 2 * static_cast<int>(j);
    if (power >= 0) a[power] += s[j] * vp;
    vp *= v1 * v1;
  }
  for (int i = 0; i <= m; ++i) {
    for (int k = 0; k <= m; ++k) out[i + k] -= a[i] * a[k];
  }
  return out;
}

std::string ImplicitPolynomial::describe(const ImplicitStructure& exact) const {
  std::string out = fmt::format("(1 - v1^2)/cos^2 R = (v2 + S(v1))^2 at R = {:.17g}\n", R);
  for (std::size_t j = 0; j < exact.s.size(); ++j) {
    std::string terms;
    for (std::size_t k = 0; k < exact.s[j].size(); ++k) {
      const Rational& q = exact.s[j][k];
      if (q.numerator() == 0) continue;
      terms += fmt::format(" {}{}/{} a{} cos^{}R", q.numerator() < 0 ? "-" : "+", std::abs(q.numerator()),
                           q.denominator(), 2 * k + 1, 2 * k);
    }
    if (terms.empty()) continue;
    out += fmt::format("  v1^{}:{} = {:.17g}\n", 2 * j, terms, j < s.size() ? s[j] : 0.0);
  }
  out += fmt::format("  F-equation degree {}\n", f_degree);
  return out;
}

ImplicitPolynomial implicit_polynomial(const ImplicitStructure& exact, const ZollProfile& profile, double R) {
  check_chart(R);
  ImplicitPolynomial out;
  out.R = R;
  out.lambda = std::cos(R);
  const double lam2 = out.lambda * out.lambda;
  const auto a = profile.odd_coeffs();
  const std::size_t n = a.size();
  const std::size_t rows = exact.s.size();
  out.p.assign(rows, 0.0);
  out.s.assign(rows, 0.0);
  for (std::size_t j = 0; j < rows; ++j) {
    double lam_pow = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      out.p[j] += boost::rational_cast<double>(exact.p[j][k]) * a[k] * lam_pow;
      out.s[j] += boost::rational_cast<double>(exact.s[j][k]) * a[k] * lam_pow;
      lam_pow *= lam2;
    }
  }
  // Q itself: sum_k b_k L^{2k} sum_rho (-1)^rho C(k, rho) v^{2 rho} / (2 rho + 3)
  const std::vector<double> b = profile.second_derivative_coeffs();
  out.q.assign(b.size(), 0.0);
  double lam_pow = 1.0;
  for (std::size_t k = 0; k < b.size(); ++k) {
    for (std::size_t rho = 0; rho <= k; ++rho) {
      out.q[rho] += b[k] * lam_pow * static_cast<double>(alt(static_cast<int>(rho)) *
                                                         binom(static_cast<int>(k), static_cast<int>(rho))) /
                    (2.0 * rho + 3.0);
    }
    lam_pow *= lam2;
  }
  out.s_degree = exact.s_degree;
  out.s.resize(out.s_degree / 2 + 1);
  out.f_degree = 2 * std::max(1, out.s_degree);
  return out;
}

ImplicitPolynomial implicit_polynomial(const ZollProfile& profile, double R) {
  return implicit_polynomial(ImplicitStructure(profile), profile, R);
}

double implicit_residual(const ZollProfile& profile, double R, double v1, double v2) {
  const ImplicitPolynomial poly = implicit_polynomial(profile, R);
  if (std::abs(v1 * poly.lambda) > 1.0 + 1e-12) {
    throw DomainError(fmt::format("|v1 cos R| = {} exceeds 1", std::abs(v1 * poly.lambda)));
  }
  const double lhs = (1.0 - v1 * v1) / (poly.lambda * poly.lambda);
  const double inner = v2 + poly.eval_s(v1);
  return lhs - inner * inner;
}

IndicatrixChart::IndicatrixChart(const ImplicitStructure& exact, const ZollProfile& profile, double R)
    : poly_(implicit_polynomial(exact, profile, R)) {}

IndicatrixChart::IndicatrixChart(const ZollProfile& profile, double R)
    : poly_(implicit_polynomial(profile, R)) {}

std::array<double, 2> IndicatrixChart::point(double u) const {
  const double su = std::sin(u);
  return {su, -std::cos(u) / poly_.lambda - poly_.eval_s(su)};
}

std::array<double, 2> IndicatrixChart::tangent(double u) const {
  const double su = std::sin(u);
  const double cu = std::cos(u);
  return {cu, su / poly_.lambda - poly_.eval_ds(su) * cu};
}

double IndicatrixChart::angle_of(double r, int branch) const {
  check_branch(branch);
  const double u0 = std::acos(std::clamp(std::cos(r) / poly_.lambda, -1.0, 1.0));
  return branch > 0 ? u0 : wrap_two_pi(kTwoPi - u0);
}

ModuliPoint coords_of_geodesic(const ZollProfile& profile, const GeodesicState& state) {
  validate_state(state);
  const double c = state.c;
  if (!(std::abs(c) < 1.0)) throw DomainError("equators (|c| = 1) lie outside the chart |R| < pi/2");
  const double u = angle_coordinate(state);
  if (c == 0.0) {
    // Longitude when leaving the north pole: one pole crossing per half period.
    const double theta0 = state.theta - kPi * std::floor(u / kPi);
    return {0.0, wrap_two_pi(theta0 - 0.5 * kPi)};
  }
  const double theta_turn = state.theta - geodesic_longitude_advance(profile, c, u);
  const double r_c = turning_latitude(c);
  if (c > 0.0) return {r_c, wrap_two_pi(theta_turn)};
  return {-r_c, wrap_two_pi(theta_turn + kPi)};
}

IndicatrixSample indicatrix_regularized(const ZollProfile& profile, double R, double r, int branch, double Theta,
                                        JIntegral method) {
  check_chart(R);
  check_branch(branch);
  const BandIntegrals band(profile, std::sin(R));
  const double lam = std::cos(R);
  const double lam2 = lam * lam;
  const double root = band.root_s(r);
  const double x = std::cos(r);
  const double j = method == JIntegral::kQuadrature ? band.second_derivative_integral(r)
                                                    : band.second_derivative_integral_closed(r);
  const double v2 = -(1.0 + profile.h_unchecked(x)) * x / lam2 - root * root / lam2 * profile.dh_unchecked(x) -
                    root / lam2 * j;
  return {R, Theta, branch, r, branch * root / lam, v2};
}

IndicatrixSample indicatrix_parametric(const ZollProfile& profile, double R, double r, int branch, double Theta) {
  check_chart(R);
  check_branch(branch);
  if (std::abs(r - 0.5 * kPi) < kRegularizedBand) return indicatrix_regularized(profile, R, r, branch, Theta);
  const BandIntegrals band(profile, std::sin(R));
  const double lam = std::cos(R);
  const double root = band.root_s(r);
  const double x = std::cos(r);
  const double v2 = -(1.0 + profile.h_unchecked(x)) / x + root * band.curvature_integral(r);
  return {R, Theta, branch, r, branch * root / lam, v2};
}

IndicatrixCurve indicatrix_curve(const ZollProfile& profile, double R, int samples_per_branch, double Theta) {
  check_chart(R);
  if (samples_per_branch < 8) throw DomainError("need at least 8 samples per branch");
  const int m = samples_per_branch;
  const double lam = std::cos(R);
  IndicatrixCurve curve;
  curve.R = R;
  curve.Theta = Theta;
  curve.samples.resize(2 * (m + 1));
  parallel_for(curve.samples.size(), [&](std::size_t idx) {
    const int i = static_cast<int>(idx);
    const int branch = i <= m ? 1 : -1;
    const double u = branch > 0 ? kPi * i / m : kPi + kPi * (i - m - 1) / m;
    const double r = std::acos(std::clamp(lam * std::cos(u), -1.0, 1.0));
    curve.samples[idx] = indicatrix_parametric(profile, R, r, branch, Theta);
  });

  auto gap = [](const IndicatrixSample& a, const IndicatrixSample& b) {
    return std::hypot(a.v1 - b.v1, a.v2 - b.v2);
  };
  curve.closure_gap = std::max(gap(curve.samples[m], curve.samples[m + 1]),
                               gap(curve.samples[2 * m + 1], curve.samples[0]));

  // Distinct vertices in counterclockwise order.
  std::vector<std::array<double, 2>> poly;
  poly.reserve(2 * m);
  for (int i = 0; i <= m; ++i) poly.push_back({curve.samples[i].v1, curve.samples[i].v2});
  for (int i = m + 2; i <= 2 * m; ++i) poly.push_back({curve.samples[i].v1, curve.samples[i].v2});

  const std::size_t n = poly.size();
  double turning = 0.0;
  curve.star_shaped = true;
  curve.convex = true;
  std::size_t first_bad = n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % n];
    const auto& d = poly[(i + 2) % n];
    double dphi = std::atan2(b[1], b[0]) - std::atan2(a[1], a[0]);
    if (dphi > kPi) dphi -= kTwoPi;
    if (dphi < -kPi) dphi += kTwoPi;
    turning += dphi;
    if (!(dphi > 0.0)) curve.star_shaped = false;
    const double cross = (b[0] - a[0]) * (d[1] - b[1]) - (b[1] - a[1]) * (d[0] - b[0]);
    if (!(cross > 0.0)) {
      curve.convex = false;
      if (first_bad == n) first_bad = (i + 1) % n;
    }
  }
  curve.winding = static_cast<int>(std::lround(turning / kTwoPi));
  if (curve.winding != 1 || !curve.star_shaped) {
    curve.violation = fmt::format("indicatrix at R = {:.17g} is not a simple curve around the origin (winding {})",
                                  R, curve.winding);
  } else if (!curve.convex) {
    const std::size_t k = first_bad <= static_cast<std::size_t>(m) ? first_bad : first_bad + 1;
    const auto& s = curve.samples[k];
    curve.violation = fmt::format("indicatrix at R = {:.17g} is not convex near r = {:.17g} (branch {:+d})", R,
                                  s.r, s.branch);
  }
  return curve;
}

void require_convex(const IndicatrixCurve& curve) {
  if (!curve.violation.empty()) throw ConvexityError(curve.violation);
}

CurvaturePair indicatrix_curvature(const ZollProfile& profile, double R, double r, int branch) {
  check_chart(R);
  check_branch(branch);
  const BandIntegrals band(profile, std::sin(R));
  const double lam = std::cos(R);
  const double lam2 = lam * lam;
  const double root = band.root_s(r);
  const double s = root * root;
  if (s < 1e-12) throw DomainError("indicatrix curvature is undefined at the turning points");
  const double x = std::cos(r);
  const double sr = std::sin(r);
  const double one_h = 1.0 + profile.h_unchecked(x);
  const double dh = profile.dh_unchecked(x);
  const double g = one_h - x * dh;
  const double j = band.second_derivative_integral(r);
  const double b = branch;

  const double v1 = b * root / lam;
  const double d1 = b * sr * x / (lam * root);
  const double dd1 = b * (std::cos(2.0 * r) * s - sr * sr * x * x) / (lam * s * root);
  const double v2 = -one_h * x / lam2 - s / lam2 * dh - root / lam2 * j;
  const double w = g - x * j / root;
  const double d2 = sr * w / lam2;
  const double dd2 = x * w / lam2 + sr * sr * j / (s * root);

  CurvaturePair out;
  out.from_curve = (dd1 * d2 - dd2 * d1) / (d1 * v2 - d2 * v1);
  out.from_metric = one_h * one_h * sr * sr / s * gauss_curvature(profile, r);
  return out;
}

}  // namespace zollfins
