#pragma once

#include <array>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "zollfins/geodesics.hpp"
#include "zollfins/profile.hpp"

namespace zollfins {

using Rational = boost::rational<long long>;

/// Point of the space of oriented geodesics, chart |R| < pi/2.
struct ModuliPoint {
  double R = 0.0;
  double Theta = 0.0;
};

/// (R, Theta) of the geodesic through a state: R = +-r_c by the sign of the
/// Clairaut constant, Theta the longitude at the turning point (+ pi for
/// c < 0); meridians get R = 0 and Theta = theta(departure from the north
/// pole) - pi/2. Theta is reduced to [0, 2 pi).
ModuliPoint coords_of_geodesic(const ZollProfile& profile, const GeodesicState& state);

struct IndicatrixSample {
  double R = 0.0;
  double Theta = 0.0;
  int branch = 1;
  double r = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

enum class JIntegral { kQuadrature, kClosedForm };

/// v1 = branch sqrt(sin^2 r - c^2)/cos R, v2 = -(1 + h)/cos r + sqrt(sin^2 r - c^2) I(r)
/// with I the curvature integral along the band. Within kRegularizedBand of
/// pi/2 this dispatches to indicatrix_regularized.
IndicatrixSample indicatrix_parametric(const ZollProfile& profile, double R, double r, int branch,
                                       double Theta = 0.0);

/// v2 = -(1 + h) cos r / cos^2 R - S h' / cos^2 R - sqrt(S) J(r) / cos^2 R,
/// S = sin^2 r - c^2, J the h'' integral. Smooth through r = pi/2.
IndicatrixSample indicatrix_regularized(const ZollProfile& profile, double R, double r, int branch,
                                        double Theta = 0.0, JIntegral method = JIntegral::kQuadrature);

/// R-independent part of the implicit equation: coefficients of
/// S(v1) = P(v1) + cos^2 R v1^4 Q(v1) as sum_j v1^{2j} sum_k q_jk a_{2k+1} cos^{2k} R.
struct ImplicitStructure {
  /// p[j][k], qq[j][k]: the P and cos^2 R v1^4 Q parts; s = p + qq.
  std::vector<std::vector<Rational>> p;
  std::vector<std::vector<Rational>> qq;
  std::vector<std::vector<Rational>> s;
  int s_degree = 0;  ///< degree of S in v1 for the given a_k (even)

  explicit ImplicitStructure(const ZollProfile& profile);
};

/// Implicit equation at fixed R:
///   (1 - v1^2) / cos^2 R = (v2 + S(v1))^2,  S = P + cos^2 R v1^4 Q.
struct ImplicitPolynomial {
  double R = 0.0;
  double lambda = 1.0;          ///< cos R
  std::vector<double> p;        ///< P coefficients of v1^{2j}
  std::vector<double> q;        ///< Q coefficients of v1^{2j}
  std::vector<double> s;        ///< S coefficients of v1^{2j}
  int s_degree = 0;             ///< exact degree of S in v1
  int f_degree = 2;             ///< exact degree of the F-equation

  [[nodiscard]] double eval_p(double v1) const;
  [[nodiscard]] double eval_q(double v1) const;
  [[nodiscard]] double eval_s(double v1) const;
  /// dS/dv1.
  [[nodiscard]] double eval_ds(double v1) const;
  /// Closed form v2 = -cos r / cos^2 R - S(v1) on the curve.
  [[nodiscard]] double v2_closed(double r, double v1) const;
  /// Ascending coefficients in F of the equation whose positive root is
  /// F(v): v / F lies on the squared implicit curve.
  [[nodiscard]] std::vector<double> f_equation(double v1, double v2) const;
  /// Human-readable form with exact structural constants.
  [[nodiscard]] std::string describe(const ImplicitStructure& exact) const;
};

ImplicitPolynomial implicit_polynomial(const ZollProfile& profile, double R);
ImplicitPolynomial implicit_polynomial(const ImplicitStructure& exact, const ZollProfile& profile, double R);

/// (1 - v1^2)/cos^2 R - (v2 + S(v1))^2. Requires |v1 cos R| <= 1.
double implicit_residual(const ZollProfile& profile, double R, double v1, double v2);

/// The indicatrix over one chart point in the angle u, cos r = cos R cos u:
/// v1 = sin u, v2 = -cos u / cos R - S(sin u). u in [0, pi] is branch +1.
class IndicatrixChart {
 public:
  IndicatrixChart(const ImplicitStructure& exact, const ZollProfile& profile, double R);
  IndicatrixChart(const ZollProfile& profile, double R);

  [[nodiscard]] double R() const { return poly_.R; }
  [[nodiscard]] double lambda() const { return poly_.lambda; }
  [[nodiscard]] const ImplicitPolynomial& implicit() const { return poly_; }

  [[nodiscard]] std::array<double, 2> point(double u) const;
  [[nodiscard]] std::array<double, 2> tangent(double u) const;
  /// Angle u for (r, branch).
  [[nodiscard]] double angle_of(double r, int branch) const;

 private:
  ImplicitPolynomial poly_;
};

struct IndicatrixCurve {
  double R = 0.0;
  double Theta = 0.0;
  /// Branch +1 from r_c to pi - r_c, then branch -1 back; the two glue
  /// points appear on both branches.
  std::vector<IndicatrixSample> samples;
  double closure_gap = 0.0;  ///< max mismatch at the two glue points
  int winding = 0;           ///< winding number about the origin
  bool star_shaped = false;  ///< polar angle strictly increasing
  bool convex = false;       ///< all turns counterclockwise
  std::string violation;     ///< empty when simple, convex and winding 1
};

/// Closed counterclockwise polyline with `samples_per_branch` + 1 points per
/// branch, uniform in the angle u. Samples are evaluated in parallel.
IndicatrixCurve indicatrix_curve(const ZollProfile& profile, double R, int samples_per_branch,
                                 double Theta = 0.0);

/// Throws ConvexityError with curve.violation if set.
void require_convex(const IndicatrixCurve& curve);

struct CurvaturePair {
  double from_curve = 0.0;   ///< planar curvature of the parametric curve
  double from_metric = 0.0;  ///< (dt/dr)^2 G(r)
};

/// Both sides of k(r) = (dt/dr)^2 G(r); the left from analytic r-derivatives
/// of the regularized parametrization. Turning points are excluded.
CurvaturePair indicatrix_curvature(const ZollProfile& profile, double R, double r, int branch);

}  // namespace zollfins
