#include "zollfins/finsler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "zollfins/polyroots.hpp"

namespace zollfins {
namespace {

namespace odeint = boost::numeric::odeint;
using State4 = std::array<double, 4>;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kChartLimit = 0.5 * kPi - 1e-6;
// Difference steps of the geodesic spray: in R, and relative to |v|.
constexpr double kSprayStepR = 1e-5;
constexpr double kSprayStepV = 1e-5;

void check_chart_point(double R) {
  if (!(std::abs(R) < kChartLimit)) throw DomainError(fmt::format("R = {} outside |R| < pi/2 - 1e-6", R));
}

double cross_at(const IndicatrixChart& chart, double u, const Vec2& v) {
  const auto p = chart.point(u);
  return p[0] * v[1] - p[1] * v[0];
}

// m = (1/2) grad F^2 = F grad F.
Vec2 momentum(const FinslerMetric& metric, const IndicatrixChart& chart, const Vec2& v) {
  const NormValue n = metric.norm(chart, v);
  return {n.F * n.grad[0], n.F * n.grad[1]};
}

}  // namespace

FinslerMetric::FinslerMetric(ZollProfile profile) : profile_(std::move(profile)), exact_(profile_) {}

NormValue FinslerMetric::norm(const IndicatrixChart& chart, Vec2 v) const {
  check_chart_point(chart.R());
  if (!std::isfinite(v[0]) || !std::isfinite(v[1])) throw DomainError("non-finite tangent vector");
  if (v[0] == 0.0 && v[1] == 0.0) throw DomainError("F needs v != 0");

  double u = 0.0;
  if (v[0] == 0.0) {
    u = v[1] < 0.0 ? 0.0 : kPi;
  } else {
    // Branch +1 covers v1 > 0 (u in [0, pi]), branch -1 covers v1 < 0.
    double lo = v[0] > 0.0 ? 0.0 : kPi;
    double hi = lo + kPi;
    const double f_lo = cross_at(chart, lo, v);
    const double f_hi = cross_at(chart, hi, v);
    // rays along the v2 axis put a root on the bracket end; allow rounding there
    const double slack = 1e-13 * std::hypot(v[0], v[1]) * (std::abs(chart.point(lo)[1]) + 1.0);
    if (!(f_lo > -slack && f_hi < slack)) {
      throw ConvexityError(fmt::format("ray through ({}, {}) does not cross the indicatrix at R = {}", v[0],
                                       v[1], chart.R()));
    }
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (cross_at(chart, mid, v) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    u = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      const auto t = chart.tangent(u);
      const double slope = t[0] * v[1] - t[1] * v[0];
      if (slope == 0.0) break;
      const double next = u - cross_at(chart, u, v) / slope;
      if (!(next >= lo - 1e-12 && next <= hi + 1e-12)) break;
      u = next;
    }
  }
  const auto p = chart.point(u);
  const auto t = chart.tangent(u);
  NormValue out;
  out.u = u;
  out.F = (v[0] * p[0] + v[1] * p[1]) / (p[0] * p[0] + p[1] * p[1]);
  const Vec2 normal{t[1], -t[0]};
  const double np = normal[0] * p[0] + normal[1] * p[1];
  out.grad = {normal[0] / np, normal[1] / np};
  return out;
}

std::vector<double> FinslerMetric::polynomial_candidates(double R, Vec2 v) const {
  const IndicatrixChart c = chart(R);
  const std::vector<double> coeffs = c.implicit().f_equation(v[0], v[1]);
  return positive_real_roots(coeffs);
}

FinslerEval finsler_F(const ZollProfile& profile, double R, double Theta, Vec2 v) {
  const FinslerMetric metric(profile);
  FinslerEval out;
  out.R = R;
  out.Theta = Theta;
  out.v1 = v[0];
  out.v2 = v[1];
  out.F = metric.F(R, v);
  return out;
}

FinslerEval fundamental_tensor(const FinslerMetric& metric, double R, double Theta, Vec2 v, double step) {
  if (!(step >= 1e-8 && step <= 1e-2)) throw DomainError(fmt::format("Hessian step {} outside [1e-8, 1e-2]", step));
  const double scale = std::hypot(v[0], v[1]);
  if (!(scale > 0.0)) throw DomainError("fundamental tensor needs v != 0");
  const IndicatrixChart chart = metric.chart(R);
  const double s = step * scale;

  // column j of the Hessian from central differences of m = (1/2) grad F^2
  auto column = [&](int j, double h) {
    Vec2 plus = v;
    Vec2 minus = v;
    plus[j] += h;
    minus[j] -= h;
    const Vec2 mp = momentum(metric, chart, plus);
    const Vec2 mm = momentum(metric, chart, minus);
    return Vec2{(mp[0] - mm[0]) / (2.0 * h), (mp[1] - mm[1]) / (2.0 * h)};
  };
  auto richardson = [&](int j) {
    const Vec2 fine = column(j, s);
    const Vec2 coarse = column(j, 2.0 * s);
    return Vec2{(4.0 * fine[0] - coarse[0]) / 3.0, (4.0 * fine[1] - coarse[1]) / 3.0};
  };
  const Vec2 c0 = richardson(0);
  const Vec2 c1 = richardson(1);

  FinslerEval out;
  out.R = R;
  out.Theta = Theta;
  out.v1 = v[0];
  out.v2 = v[1];
  out.F = metric.norm(chart, v).F;
  out.g11 = c0[0];
  out.g22 = c1[1];
  out.g12 = 0.5 * (c0[1] + c1[0]);
  return out;
}

FinslerEval fundamental_tensor(const ZollProfile& profile, double R, double Theta, Vec2 v, double step) {
  return fundamental_tensor(FinslerMetric(profile), R, Theta, v, step);
}

InvariantPair invariants_IJ(const ZollProfile& profile, double r, double phi) {
  const double sr = std::sin(r);
  if (!(sr > 1e-9)) throw DomainError(fmt::format("invariants undefined at the pole (r = {})", r));
  const double x = std::cos(r);
  const double g = profile.curvature_at_x(x);
  if (!(g > 0.0)) throw DomainError(fmt::format("invariants need G > 0, G({}) = {}", r, g));
  const double one_h = 1.0 + profile.h_unchecked(x);
  const double dg_dr = -sr * profile.curvature_slope_at_x(x);
  // n^r = -c / (sin r (1 + h)), gamma'^r = eps sqrt(1 - c^2/sin^2 r) / (1 + h)
  const double n_r = -std::sin(phi) / one_h;
  const double gamma_r = std::cos(phi) / one_h;
  InvariantPair out;
  out.G_theta1 = dg_dr * n_r;
  out.G_theta2 = dg_dr * gamma_r;
  const double g32 = g * std::sqrt(g);
  out.I = 0.5 * out.G_theta2 / g32;
  out.J = -0.5 * out.G_theta1 / g32;
  return out;
}

double invariant_flow_check(const ZollProfile& profile, double r, double phi, double dphi, int sigma) {
  if (sigma != 1 && sigma != -1) throw DomainError("sigma must be +1 or -1");
  if (!(dphi != 0.0)) throw DomainError("dphi must be nonzero");
  const InvariantPair a = invariants_IJ(profile, r, phi);
  const InvariantPair b = invariants_IJ(profile, r, phi + dphi);
  return std::abs((b.I - a.I) / dphi - sigma * a.J) + std::abs((b.J - a.J) / dphi + sigma * a.I);
}

int calibrate_fiber_rotation(const ZollProfile& profile, double r, double phi, double dphi) {
  return invariant_flow_check(profile, r, phi, dphi, 1) <= invariant_flow_check(profile, r, phi, dphi, -1) ? 1
                                                                                                         : -1;
}

Vec2 unit_direction(const FinslerMetric& metric, double R, double phi) {
  const Vec2 d{std::cos(phi), std::sin(phi)};
  const double f = metric.F(R, d);
  return {d[0] / f, d[1] / f};
}

double chart_distance(ModuliPoint a, ModuliPoint b) {
  double dt = std::fmod(a.Theta - b.Theta, kTwoPi);
  if (dt > kPi) dt -= kTwoPi;
  if (dt < -kPi) dt += kTwoPi;
  return std::hypot(a.R - b.R, dt);
}

FinslerTrace finsler_geodesic(const FinslerMetric& metric, ModuliPoint start, Vec2 v0, double t_end, double tol,
                              int samples_per_period) {
  if (!(tol >= 1e-12 && tol <= 1e-2)) throw DomainError(fmt::format("tolerance {} outside [1e-12, 1e-2]", tol));
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
  if (samples_per_period < 16) throw DomainError("need at least 16 samples per period");
  const double limit = 0.5 * kPi - kChartMargin;
  if (!(std::abs(start.R) < limit)) throw DomainError(fmt::format("start R = {} outside the chart", start.R));

  // Euler-Lagrange for L = F^2/2: d/dt m(R, v) = (1/2) dF^2/dR e_R, so
  // g vdot = (1/2) dF^2/dR e_R - (dm/dR) v_R.
  struct OutsideChart {
    double R;
  };
  auto rhs = [&](const State4& y, State4& dy, double) {
    const double R = y[0];
    // trial stages of a long step can overshoot the chart before the step is checked
    if (!(std::abs(R) + kSprayStepR < kChartLimit)) throw OutsideChart{R};
    const Vec2 v{y[2], y[3]};
    const double sv = kSprayStepV * std::hypot(v[0], v[1]);
    const IndicatrixChart here = metric.chart(R);
    const IndicatrixChart up = metric.chart(R + kSprayStepR);
    const IndicatrixChart down = metric.chart(R - kSprayStepR);

    const NormValue nu = metric.norm(up, v);
    const NormValue nd = metric.norm(down, v);
    const double dF2_dR = (nu.F * nu.F - nd.F * nd.F) / (2.0 * kSprayStepR);
    const Vec2 dm_dR{(nu.F * nu.grad[0] - nd.F * nd.grad[0]) / (2.0 * kSprayStepR),
                     (nu.F * nu.grad[1] - nd.F * nd.grad[1]) / (2.0 * kSprayStepR)};
    double g[2][2];
    for (int j = 0; j < 2; ++j) {
      Vec2 plus = v;
      Vec2 minus = v;
      plus[j] += sv;
      minus[j] -= sv;
      const Vec2 mp = momentum(metric, here, plus);
      const Vec2 mm = momentum(metric, here, minus);
      g[0][j] = (mp[0] - mm[0]) / (2.0 * sv);
      g[1][j] = (mp[1] - mm[1]) / (2.0 * sv);
    }
    const double g12 = 0.5 * (g[0][1] + g[1][0]);
    const double det = g[0][0] * g[1][1] - g12 * g12;
    if (!(det > 0.0)) throw ConvexityError(fmt::format("fundamental tensor not positive definite at R = {}", R));
    const double b0 = 0.5 * dF2_dR - dm_dR[0] * v[0];
    const double b1 = -dm_dR[1] * v[0];
    dy[0] = v[0];
    dy[1] = v[1];
    dy[2] = (g[1][1] * b0 - g12 * b1) / det;
    dy[3] = (g[0][0] * b1 - g12 * b0) / det;
  };

  FinslerTrace trace;
  const int n_samples = std::max(2, static_cast<int>(std::ceil(samples_per_period * t_end / kTwoPi)));
  trace.samples.reserve(n_samples + 1);
  const double f0 = metric.F(start.R, v0);
  auto emit = [&](double t, const State4& s) {
    const double f = metric.F(s[0], {s[2], s[3]});
    trace.max_f_drift = std::max(trace.max_f_drift, std::abs(f - f0));
    trace.samples.push_back({t, s[0], s[1], s[2], s[3], f});
  };

  auto stepper = odeint::make_dense_output(tol, tol, 0.1, odeint::runge_kutta_dopri5<State4>());
  State4 y{start.R, start.Theta, v0[0], v0[1]};
  stepper.initialize(y, 0.0, 1e-2);
  int next = 0;
  State4 out{};
  try {
    while (next <= n_samples) {
      const double ts = next == n_samples ? t_end : t_end * next / n_samples;
      if (ts <= stepper.current_time()) {
        if (trace.steps == 0) {
          out = y;  // no interpolant before the first step
        } else {
          stepper.calc_state(ts, out);
        }
        emit(ts, out);
        ++next;
        continue;
      }
      stepper.do_step(rhs);
      ++trace.steps;
      const double R = stepper.current_state()[0];
      if (!(std::abs(R) < limit)) {
        throw FinslerChartExit(fmt::format("Finsler geodesic left the chart at t = {} (R = {})",
                                           stepper.current_time(), R),
                               trace);
      }
    }
  } catch (const OutsideChart& e) {
    throw FinslerChartExit(fmt::format("Finsler geodesic left the chart after t = {} (stage at R = {})",
                                       stepper.current_time(), e.R),
                           trace);
  } catch (const odeint::step_adjustment_error& e) {
    throw IntegrationError(fmt::format("step controller failed: {}", e.what()));
  }
  return trace;
}

}  // namespace zollfins
