#include "zollfins/jacobi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/binomial.hpp>
#include <fmt/format.h>

#include "zollfins/errors.hpp"
#include "zollfins/quadrature.hpp"

namespace zollfins {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kBandSlack = 1e-12;

}  // namespace

BandIntegrals::BandIntegrals(const ZollProfile& profile, double c) : profile_(&profile), c_(c) {
  if (!(std::abs(c) < 1.0)) throw DomainError(fmt::format("band integrals need |c| < 1, got {}", c));
  lambda_ = std::sqrt((1.0 - c) * (1.0 + c));
  r_c_ = std::asin(std::abs(c));
}

double BandIntegrals::angle_of(double r) const {
  if (!(r >= r_c_ - kBandSlack && r <= kPi - r_c_ + kBandSlack)) {
    throw DomainError(fmt::format("r = {} outside the band [{}, {}]", r, r_c_, kPi - r_c_));
  }
  // Snap rounding-level offsets onto the turning points; sqrt(S) would amplify them.
  constexpr double kSnap = 1e-14;
  if (std::abs(r - r_c_) <= kSnap) return 0.0;
  if (std::abs(r - (kPi - r_c_)) <= kSnap) return kPi;
  return std::acos(std::clamp(std::cos(r) / lambda_, -1.0, 1.0));
}

double BandIntegrals::root_s(double r) const { return lambda_ * std::sin(angle_of(r)); }

double BandIntegrals::curvature_integral(double r) const {
  const double u = angle_of(r);
  const double lam2 = lambda_ * lambda_;
  const ZollProfile& p = *profile_;
  auto integrand = [&](double w) {
    const double x = lambda_ * std::cos(w);
    return (1.0 + p.h_unchecked(x) - x * p.dh_unchecked(x)) / (lam2 * std::cos(w) * std::cos(w));
  };
  if (u == 0.5 * kPi) throw DomainError("curvature integral diverges at r = pi/2");
  if (u < 0.5 * kPi) return integrate(integrand, 0.0, u).value;
  return -integrate(integrand, u, kPi).value;
}

double BandIntegrals::second_derivative_integral(double r) const {
  const double u = angle_of(r);
  const ZollProfile& p = *profile_;
  auto integrand = [&](double w) {
    const double sw = std::sin(w);
    return sw * sw * p.d2h_unchecked(lambda_ * std::cos(w));
  };
  return lambda_ * lambda_ * integrate(integrand, 0.0, u).value;
}

double BandIntegrals::second_derivative_integral_closed(double r) const {
  // int_x^L sqrt(L^2 - y^2) y^{2k+1} dy
  //   = (L^2 - x^2)^{3/2} L^{2k} sum_rho (-1)^rho C(k, rho) / (2 rho + 3) ((L^2 - x^2) / L^2)^rho
  const double u = angle_of(r);
  const double lam2 = lambda_ * lambda_;
  const double ratio = std::sin(u) * std::sin(u);  // (L^2 - x^2) / L^2
  const double base = lam2 * ratio;                  // L^2 - x^2
  const std::vector<double> b = profile_->second_derivative_coeffs();
  double total = 0.0;
  double lam_pow = 1.0;  // L^{2k}
  for (std::size_t k = 0; k < b.size(); ++k) {
    double inner = 0.0;
    double ratio_pow = 1.0;
    for (std::size_t rho = 0; rho <= k; ++rho) {
      const double sgn = rho % 2 == 0 ? 1.0 : -1.0;
      inner += sgn * boost::math::binomial_coefficient<double>(static_cast<unsigned>(k),
                                                               static_cast<unsigned>(rho)) /
               (2.0 * rho + 3.0) * ratio_pow;
      ratio_pow *= ratio;
    }
    total += b[k] * lam_pow * inner;
    lam_pow *= lam2;
  }
  return base * std::sqrt(base) * total;
}

JacobiValue jacobi_y(const ZollProfile& profile, double c, double r, int sign) {
  if (sign != 1 && sign != -1) throw DomainError("branch sign must be +1 or -1");
  const BandIntegrals band(profile, c);
  const double x = std::cos(r);
  return {sign * band.root_s(r), x / (1.0 + profile.h_unchecked(x))};
}

JacobiPair jacobi_pair(const ZollProfile& profile, double c, double r, int sign, JacobiRoute route) {
  if (sign != 1 && sign != -1) throw DomainError("branch sign must be +1 or -1");
  const BandIntegrals band(profile, c);
  const double lam = band.lambda();
  const double lam2 = lam * lam;
  const double x = std::cos(r);
  const double one_h = 1.0 + profile.h_unchecked(x);
  const double c1 = (1.0 + profile.h_unchecked(lam)) / lam;
  const double root = band.root_s(r);

  JacobiPair out;
  out.y1 = c1 * sign * root;
  out.dy1 = c1 * x / one_h;
  if (route == JacobiRoute::kAuto) {
    route = std::abs(r - 0.5 * kPi) < kRegularizedBand ? JacobiRoute::kRegularized : JacobiRoute::kDirect;
  }
  if (route == JacobiRoute::kDirect) {
    if (std::abs(x) < 1e-15) throw DomainError("direct Jacobi route is singular at r = pi/2");
    const double integral = band.curvature_integral(r);  // c1^2 * int_0^t G / y1'^2 ds on the + branch
    out.y2 = 1.0 / out.dy1 - root * integral / c1;
    out.dy2 = -sign * out.dy1 * integral / (c1 * c1);
  } else {
    const double j = band.second_derivative_integral(r);
    const double dh = profile.dh_unchecked(x);
    const double s = root * root;
    const double v2 = -one_h * x / lam2 - s / lam2 * dh - root / lam2 * j;
    out.y2 = -v2 / c1;
    const double g = one_h - x * dh;
    out.dy2 = -sign * (root * g - x * j) / (lam2 * c1 * one_h);
  }
  return out;
}

double jacobi_ode_check(const ZollProfile& profile, double c, std::span<const double> r_grid, double step) {
  if (!(step > 0.0)) throw DomainError("difference step must be positive");
  const BandIntegrals band(profile, c);
  const double lo = band.turning_latitude();
  const double hi = kPi - lo;
  double worst = 0.0;
  for (double r : r_grid) {
    if (!(r - 2.0 * step > lo && r + 2.0 * step < hi)) {
      throw DomainError(fmt::format("grid point {} too close to the band edge", r));
    }
    // dr/dt = q / (1 + h) on the + branch, and its r-derivative
    const double sr = std::sin(r);
    const double x = std::cos(r);
    const double one_h = 1.0 + profile.h_unchecked(x);
    const double q = std::sqrt(std::max(0.0, 1.0 - (c / sr) * (c / sr)));
    const double dq = c * c * x / (sr * sr * sr * q);
    const double rho = q / one_h;
    const double drho = (dq * one_h + q * sr * profile.dh_unchecked(x)) / (one_h * one_h);
    const double curvature = gauss_curvature(profile, r);

    // One route for the whole stencil.
    const JacobiRoute route = std::abs(r - 0.5 * kPi) < kRegularizedBand + 2.0 * step ? JacobiRoute::kRegularized
                                                                                       : JacobiRoute::kDirect;
    std::array<JacobiPair, 5> at;
    for (int k = -2; k <= 2; ++k) at[k + 2] = jacobi_pair(profile, c, r + k * step, 1, route);
    auto residual = [&](auto field) {
      const double ym2 = field(at[0]), ym = field(at[1]), y0 = field(at[2]), yp = field(at[3]),
                   yp2 = field(at[4]);
      // Richardson-extrapolated central differences, O(step^4)
      const double d1 = (4.0 * (yp - ym) / (2.0 * step) - (yp2 - ym2) / (4.0 * step)) / 3.0;
      const double d2 = (4.0 * (yp - 2.0 * y0 + ym) / (step * step) - (yp2 - 2.0 * y0 + ym2) / (4.0 * step * step)) /
                        3.0;
      const double ytt = (d2 * rho + d1 * drho) * rho;
      return std::abs(ytt + curvature * y0);
    };
    worst = std::max({worst, residual([](const JacobiPair& p) { return p.y1; }),
                      residual([](const JacobiPair& p) { return p.y2; })});
  }
  return worst;
}

}  // namespace zollfins
