#include "zollfins/geodesics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>

#include "zollfins/errors.hpp"
#include "zollfins/quadrature.hpp"

namespace zollfins {
namespace {

namespace odeint = boost::numeric::odeint;
using State2 = std::array<double, 2>;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Hysteresis band on q = sqrt(1 - c^2 / sin^2 r) for the chart switch.
constexpr double kEnterAngleChart = 0.3;
constexpr double kLeaveAngleChart = 0.5;
constexpr double kMaxStep = 0.05;
constexpr long kMaxSteps = 50'000'000;

enum class Chart { kLatitude, kAngle };

double wrap_two_pi(double u) {
  double w = std::fmod(u, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

double sqrt_factor(double c, double sin_r) {
  const double ratio = c / sin_r;
  return std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
}

}  // namespace

double turning_latitude(double c) {
  if (!(std::abs(c) <= 1.0)) throw DomainError(fmt::format("Clairaut constant {} outside [-1, 1]", c));
  return std::asin(std::abs(c));
}

void validate_state(const GeodesicState& s) {
  if (!(s.r >= 0.0 && s.r <= kPi)) throw DomainError(fmt::format("latitude {} outside [0, pi]", s.r));
  if (!(std::abs(s.c) <= 1.0)) throw DomainError(fmt::format("Clairaut constant {} outside [-1, 1]", s.c));
  if (std::abs(s.c) > std::sin(s.r) + 1e-12) {
    throw DomainError(fmt::format("|c| = {} exceeds sin r = {}: latitude not reachable", std::abs(s.c),
                                  std::sin(s.r)));
  }
  if (s.sign != 1 && s.sign != -1) throw DomainError("geodesic sign must be +1 or -1");
}

double radial_momentum(const ZollProfile& profile, const GeodesicState& s) {
  validate_state(s);
  const double sin_r = std::sin(s.r);
  const double q = s.c == 0.0 ? 1.0 : sqrt_factor(s.c, sin_r);
  return s.sign * (1.0 + profile.h(std::cos(s.r))) * q;
}

double unit_energy_residual(const ZollProfile& profile, const GeodesicState& s) {
  const double xi1 = radial_momentum(profile, s);
  const double one_h = 1.0 + profile.h(std::cos(s.r));
  const double sin_r = std::sin(s.r);
  const double tangential = s.c == 0.0 ? 0.0 : (s.c / sin_r) * (s.c / sin_r);
  return std::abs(xi1 * xi1 / (one_h * one_h) + tangential - 1.0);
}

FlowRate flow_rhs(const ZollProfile& profile, const GeodesicState& s) {
  validate_state(s);
  const double sin_r = std::sin(s.r);
  if (sin_r < 1e-9) throw DomainError(fmt::format("r = {} within 1e-9 of a pole", s.r));
  const double one_h = 1.0 + profile.h_unchecked(std::cos(s.r));
  return {s.sign * sqrt_factor(s.c, sin_r) / one_h, s.c / (sin_r * sin_r)};
}

double angle_coordinate(const GeodesicState& s) {
  const double lambda = std::sqrt(std::max(0.0, 1.0 - s.c * s.c));
  if (lambda == 0.0) return s.sign > 0 ? 0.5 * kPi : 1.5 * kPi;
  const double u0 = std::acos(std::clamp(std::cos(s.r) / lambda, -1.0, 1.0));
  return s.sign > 0 ? u0 : wrap_two_pi(kTwoPi - u0);
}

GeodesicTrace integrate_geodesic(const ZollProfile& profile, const GeodesicState& initial,
                                 double t_end, double tol, int samples_per_period) {
  validate_state(initial);
  if (!(tol >= 1e-12 && tol <= 1e-4)) throw DomainError(fmt::format("tolerance {} outside [1e-12, 1e-4]", tol));
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
  if (samples_per_period < 16) throw DomainError("need at least 16 samples per period");

  const double c = initial.c;
  const int n_samples = std::max(2, static_cast<int>(std::ceil(samples_per_period * t_end / kTwoPi)));
  auto sample_time = [&](int k) { return k == n_samples ? t_end : t_end * k / n_samples; };

  GeodesicTrace trace;
  trace.c = c;
  trace.samples.reserve(n_samples + 1);

  // Equators: explicit closed form.
  if (std::abs(c) == 1.0) {
    for (int k = 0; k <= n_samples; ++k) {
      const double t = sample_time(k);
      trace.samples.push_back({t, 0.5 * kPi, initial.theta + c * t, initial.sign});
    }
    return trace;
  }

  const double lambda = std::sqrt(1.0 - c * c);
  const bool meridian = c == 0.0;

  int sign = initial.sign;
  // Latitude chart: y = (r, theta). Angle chart: y = (u, theta).
  auto latitude_rhs = [&](const State2& y, State2& dy, double) {
    const double sin_r = std::sin(y[0]);
    const double one_h = 1.0 + profile.h_unchecked(std::clamp(std::cos(y[0]), -1.0, 1.0));
    dy[0] = sign * sqrt_factor(c, sin_r) / one_h;
    dy[1] = c / (sin_r * sin_r);
  };
  auto angle_rhs = [&](const State2& y, State2& dy, double) {
    const double cu = std::cos(y[0]);
    const double su = std::sin(y[0]);
    dy[0] = 1.0 / (1.0 + profile.h_unchecked(lambda * cu));
    dy[1] = meridian ? 0.0 : c / (c * c + lambda * lambda * su * su);
  };

  Chart chart = Chart::kAngle;
  State2 y{};
  double u_origin = 0.0;  // angle of the start, for pole bookkeeping on meridians
  if (meridian || sqrt_factor(c, std::sin(initial.r)) < kLeaveAngleChart) {
    y = {angle_coordinate(initial), initial.theta};
    u_origin = y[0];
  } else {
    chart = Chart::kLatitude;
    y = {initial.r, initial.theta};
  }

  // Converts a chart state to a reported sample.
  auto to_sample = [&](double t, const State2& s) {
    if (chart == Chart::kLatitude) {
      const double r = std::clamp(s[0], 0.0, kPi);
      return GeodesicSample{t, r, s[1], sign};
    }
    const double w = wrap_two_pi(s[0]);
    double theta = s[1];
    if (meridian) theta += kPi * (std::floor(s[0] / kPi) - std::floor(u_origin / kPi));
    return GeodesicSample{t, std::acos(std::clamp(lambda * std::cos(s[0]), -1.0, 1.0)), theta,
                          w < kPi ? 1 : -1};
  };

  auto make_stepper = [&] {
    return odeint::make_dense_output(tol, tol, kMaxStep, odeint::runge_kutta_dopri5<State2>());
  };
  auto stepper = make_stepper();
  double t = 0.0;
  double dt = std::min(kMaxStep, 1e-3);
  stepper.initialize(y, t, dt);

  int next = 0;
  try {
    while (next <= n_samples) {
      if (++trace.steps > kMaxSteps) throw IntegrationError("geodesic integration exceeded the step budget");
      std::pair<double, double> span;
      if (chart == Chart::kLatitude) {
        span = stepper.do_step(latitude_rhs);
      } else {
        span = stepper.do_step(angle_rhs);
      }
      while (next <= n_samples && sample_time(next) <= span.second) {
        State2 ys{};
        stepper.calc_state(sample_time(next), ys);
        trace.samples.push_back(to_sample(sample_time(next), ys));
        ++next;
      }
      // Chart switch at step boundaries.
      const State2 cur = stepper.current_state();
      t = stepper.current_time();
      dt = stepper.current_time_step();
      if (meridian) continue;
      if (chart == Chart::kLatitude) {
        if (sqrt_factor(c, std::sin(cur[0])) < kEnterAngleChart) {
          GeodesicState here{std::clamp(cur[0], 0.0, kPi), cur[1], c, sign};
          chart = Chart::kAngle;
          stepper = make_stepper();
          stepper.initialize(State2{angle_coordinate(here), cur[1]}, t, dt);
          ++trace.chart_switches;
        }
      } else {
        const double su = std::sin(cur[0]);
        const double q = lambda * std::abs(su) / std::sqrt(c * c + lambda * lambda * su * su);
        if (q > kLeaveAngleChart) {
          sign = wrap_two_pi(cur[0]) < kPi ? 1 : -1;
          chart = Chart::kLatitude;
          stepper = make_stepper();
          stepper.initialize(State2{std::acos(std::clamp(lambda * std::cos(cur[0]), -1.0, 1.0)), cur[1]}, t,
                             dt);
          ++trace.chart_switches;
        }
      }
    }
  } catch (const odeint::step_adjustment_error& e) {
    throw IntegrationError(fmt::format("step controller failed at t = {}: {}", t, e.what()));
  }
  return trace;
}

double clairaut_residual(const GeodesicTrace& trace) {
  // dtheta/dt from central differences of the sampled longitude.
  double worst = 0.0;
  const auto& s = trace.samples;
  if (trace.c == 0.0) return 0.0;  // meridians: theta jumps at the poles
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double sin_r = std::sin(s[k].r);
    const double dt = s[k + 1].t - s[k - 1].t;
    if (!(dt > 0.0)) continue;
    const double dtheta = (s[k + 1].theta - s[k - 1].theta) / dt;
    worst = std::max(worst, std::abs(dtheta * sin_r * sin_r - trace.c));
  }
  return worst;
}

double geodesic_time(const ZollProfile& profile, double c, double u) {
  if (!(std::abs(c) < 1.0)) throw DomainError("geodesic_time needs |c| < 1");
  const double lambda = std::sqrt(1.0 - c * c);
  auto f = [&](double w) { return 1.0 + profile.h_unchecked(lambda * std::cos(w)); };
  return integrate(f, 0.0, u).value;
}

namespace {

// With tan w = tan u / |c|, |c| du / (c^2 + cos^2 r_c sin^2 u) = dw, so the
// longitude advance becomes int (1 + h(cos r)) dw with a bounded integrand.
double advance_integrand(const ZollProfile& profile, double c, double lambda, double w) {
  const double cw = std::cos(w);
  const double sw = std::sin(w);
  const double x = lambda * cw / std::sqrt(cw * cw + c * c * sw * sw);
  return 1.0 + profile.h_unchecked(x);
}

}  // namespace

double geodesic_longitude_advance(const ZollProfile& profile, double c, double u) {
  if (!(std::abs(c) < 1.0) || c == 0.0) throw DomainError("longitude advance needs 0 < |c| < 1");
  if (!(u >= 0.0) || !std::isfinite(u)) throw DomainError("angle must be finite and nonnegative");
  const double lambda = std::sqrt(1.0 - c * c);
  auto f = [&](double w) { return advance_integrand(profile, c, lambda, w); };
  const double turns = std::floor(u / kTwoPi);
  const double rest = u - turns * kTwoPi;
  double w_end = std::atan2(std::sin(rest), std::abs(c) * std::cos(rest));
  if (w_end < 0.0) w_end += kTwoPi;
  double total = 0.0;
  if (turns > 0.0) total += turns * integrate(f, 0.0, kTwoPi).value;
  total += integrate(f, 0.0, w_end).value;
  return c > 0.0 ? total : -total;
}

ClosureIntegrals closure_integrals(const ZollProfile& profile, double c) {
  if (!(std::abs(c) < 1.0)) throw DomainError(fmt::format("closure integrals need |c| < 1, got {}", c));
  const double lambda = std::sqrt(1.0 - c * c);
  auto period_integrand = [&](double u) { return 1.0 + profile.h_unchecked(lambda * std::cos(u)); };
  auto advance = [&](double w) { return advance_integrand(profile, c, lambda, w); };
  const auto period = integrate(period_integrand, 0.0, kPi);
  ClosureIntegrals out{period.value, kPi, period.error};
  if (c != 0.0) {
    // The transition of x(w) sharpens near w = pi/2 as c -> 0; split there.
    const auto left = integrate(advance, 0.0, 0.5 * kPi);
    const auto right = integrate(advance, 0.5 * kPi, kPi);
    out.advance = left.value + right.value;
    out.error += left.error + right.error;
  }
  return out;
}

}  // namespace zollfins
