#pragma once

#include <span>

#include "zollfins/profile.hpp"

namespace zollfins {

/// Quadrature kernels along the band r in [r_c, pi - r_c] of the geodesics
/// with Clairaut constant c. All integrals are evaluated in the angle u with
/// cos r = cos r_c cos u, which turns sin s ds / sqrt(sin^2 s - c^2) into du
/// and removes the square-root singularity at the turning points.
class BandIntegrals {
 public:
  BandIntegrals(const ZollProfile& profile, double c);

  [[nodiscard]] double c() const { return c_; }
  [[nodiscard]] double lambda() const { return lambda_; }  ///< cos r_c
  [[nodiscard]] double turning_latitude() const { return r_c_; }

  /// u in [0, pi] for r in the band; throws DomainError outside.
  [[nodiscard]] double angle_of(double r) const;
  /// sqrt(sin^2 r - c^2) = cos r_c sin u.
  [[nodiscard]] double root_s(double r) const;

  /// int_{r_c}^r sin s [1 + h - cos s h'](cos s) / (cos^2 s sqrt(sin^2 s - c^2)) ds.
  /// Diverges at r = pi/2; for r > pi/2 it is taken from the far turning point,
  /// -int_r^{pi - r_c}, which is the same function continued through pi/2.
  [[nodiscard]] double curvature_integral(double r) const;

  /// int_{r_c}^r sin s sqrt(sin^2 s - c^2) h''(cos s) ds by quadrature.
  [[nodiscard]] double second_derivative_integral(double r) const;
  /// The same integral in closed form for polynomial h.
  [[nodiscard]] double second_derivative_integral_closed(double r) const;

 private:
  const ZollProfile* profile_;
  double c_;
  double lambda_;
  double r_c_;
};

/// Normal Jacobi field y = sign sqrt(sin^2 r - c^2) and its t-derivative.
struct JacobiValue {
  double y = 0.0;
  double dy = 0.0;  ///< cos r / (1 + h(cos r))
};

/// The normalized pair: y1(0) = 0, y1'(0) = 1, y2(0) = 1, y2'(0) = 0 at the
/// turning point r = r_c. Primes are d/dt.
struct JacobiPair {
  double y1 = 0.0;
  double dy1 = 0.0;
  double y2 = 0.0;
  double dy2 = 0.0;

  [[nodiscard]] double wronskian() const { return y1 * dy2 - y2 * dy1; }
};

enum class JacobiRoute {
  kAuto,         ///< direct form, regularized within kRegularizedBand of pi/2
  kDirect,       ///< y2 = 1/y1' - y1 int G/y1'^2
  kRegularized,  ///< y2 from the h'' integral, smooth through pi/2
};

/// Half-width around r = pi/2 where kAuto uses the regularized route.
inline constexpr double kRegularizedBand = 1e-3;

JacobiValue jacobi_y(const ZollProfile& profile, double c, double r, int sign);

JacobiPair jacobi_pair(const ZollProfile& profile, double c, double r, int sign,
                       JacobiRoute route = JacobiRoute::kAuto);

/// max |y'' + G y| over the grid for y1 and y2, with y'' from
/// Richardson-extrapolated central differences in r (stencil +-2 step) and
/// the chain rule through dr/dt. Test oracle.
double jacobi_ode_check(const ZollProfile& profile, double c, std::span<const double> r_grid,
                        double step = 1e-3);

}  // namespace zollfins
