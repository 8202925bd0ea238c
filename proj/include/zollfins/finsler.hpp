#pragma once

#include <array>
#include <vector>

#include "zollfins/errors.hpp"
#include "zollfins/moduli.hpp"
#include "zollfins/profile.hpp"

namespace zollfins {

using Vec2 = std::array<double, 2>;

struct FinslerEval {
  double R = 0.0;
  double Theta = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double F = 0.0;
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;

  [[nodiscard]] double det() const { return g11 * g22 - g12 * g12; }
  [[nodiscard]] bool positive_definite() const { return g11 > 0.0 && det() > 0.0; }
};

/// F with its v-gradient and the indicatrix angle hit by the ray through v.
struct NormValue {
  double F = 0.0;
  Vec2 grad{};
  double u = 0.0;
};

/// The Finsler function of a profile. Holds the exact implicit-equation
/// structure so repeated evaluations only redo the cos R dependent part.
class FinslerMetric {
 public:
  explicit FinslerMetric(ZollProfile profile);

  [[nodiscard]] const ZollProfile& profile() const { return profile_; }
  [[nodiscard]] const ImplicitStructure& structure() const { return exact_; }
  [[nodiscard]] IndicatrixChart chart(double R) const { return {exact_, profile_, R}; }

  /// F(R; v): the t > 0 with v / t on the indicatrix, by bisection and Newton
  /// on the ray. Gradient from the indicatrix normal, grad = n / <n, v/F>.
  [[nodiscard]] NormValue norm(const IndicatrixChart& chart, Vec2 v) const;
  [[nodiscard]] NormValue norm(double R, Vec2 v) const { return norm(chart(R), v); }
  [[nodiscard]] double F(double R, Vec2 v) const { return norm(R, v).F; }

  /// Positive real roots of the polynomial F-equation. Oracle only: the
  /// squared equation has spurious roots.
  [[nodiscard]] std::vector<double> polynomial_candidates(double R, Vec2 v) const;

 private:
  ZollProfile profile_;
  ImplicitStructure exact_;
};

/// F only.
FinslerEval finsler_F(const ZollProfile& profile, double R, double Theta, Vec2 v);

/// g_ij = (1/2) d^2 F^2 / dv_i dv_j by central differences of the analytic
/// gradient of F^2 at step * |v|, Richardson-extrapolated against 2 * step.
FinslerEval fundamental_tensor(const ZollProfile& profile, double R, double Theta, Vec2 v, double step = 1e-5);
FinslerEval fundamental_tensor(const FinslerMetric& metric, double R, double Theta, Vec2 v, double step = 1e-5);

struct InvariantPair {
  double I = 0.0;
  double J = 0.0;
  double G_theta1 = 0.0;  ///< dG(n)
  double G_theta2 = 0.0;  ///< dG(gamma')
};

/// Invariants at the unit vector of the Zoll surface at latitude r making
/// angle phi with d/dr, measured toward d/dtheta: c = sin r sin phi.
InvariantPair invariants_IJ(const ZollProfile& profile, double r, double phi);

/// Orientation of the fiber rotation relative to the flow relation
/// dI/dphi = sigma J, dJ/dphi = -sigma I. Fixed by calibrate_fiber_rotation.
inline constexpr int kFiberRotationSign = -1;

/// |dI/dphi - sigma J| + |dJ/dphi + sigma I| with forward differences.
double invariant_flow_check(const ZollProfile& profile, double r, double phi, double dphi,
                            int sigma = kFiberRotationSign);

/// The sigma in {+1, -1} with the smaller flow residual.
int calibrate_fiber_rotation(const ZollProfile& profile, double r, double phi, double dphi);

struct FinslerSample {
  double t = 0.0;
  double R = 0.0;
  double Theta = 0.0;
  double vR = 0.0;
  double vTheta = 0.0;
  double F = 0.0;
};

struct FinslerTrace {
  std::vector<FinslerSample> samples;
  long steps = 0;
  double max_f_drift = 0.0;  ///< max |F - F(0)| over samples
};

/// A Finsler geodesic reached |R| = pi/2 - kChartMargin, or a step would
/// have carried it off the chart. Carries the trace up to that point.
class FinslerChartExit : public ChartExitError {
 public:
  FinslerChartExit(const std::string& what, FinslerTrace partial)
      : ChartExitError(what), trace(std::move(partial)) {}
  FinslerTrace trace;
};

inline constexpr double kChartMargin = 1e-3;

/// Geodesic of F from (R0, Theta0) with initial velocity v0, by the
/// Euler-Lagrange equations of F^2/2 with R-derivatives from central
/// differences. Sampled at `samples_per_period` points per 2 pi.
FinslerTrace finsler_geodesic(const FinslerMetric& metric, ModuliPoint start, Vec2 v0, double t_end,
                              double tol = 1e-9, int samples_per_period = 256);

/// Unit vector at (R, Theta) pointing at angle phi in the (v1, v2) plane.
Vec2 unit_direction(const FinslerMetric& metric, double R, double phi);

/// Distance between chart points with Theta compared mod 2 pi.
double chart_distance(ModuliPoint a, ModuliPoint b);

}  // namespace zollfins
