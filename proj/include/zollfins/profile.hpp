#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zollfins {

/// Odd polynomial profile h(x) = sum_k a_{2k+1} x^{2k+1} of a Zoll surface of
/// revolution g = (1 + h(cos r))^2 dr^2 + sin^2 r dtheta^2.
///
/// Construction validates the Zoll conditions: h(1) = 0 (coefficients sum to
/// zero within 1e-12) and |h| < 1 on [-1, 1]. The object is immutable.
class ZollProfile {
 public:
  static constexpr double kEndpointTolerance = 1e-12;
  static constexpr double kDomainSlack = 1e-12;

  /// The round sphere, h = 0.
  ZollProfile() = default;
  explicit ZollProfile(std::vector<double> odd_coeffs);

  /// Parses the comma-separated literal `a1,a3,a5,...`; empty or "0" is h = 0.
  static ZollProfile parse(std::string_view literal);

  /// h(x) = eps * x * (1 - x^2).
  static ZollProfile example1(double eps);
  /// h(x) = x * (1 - x^2)^2.
  static ZollProfile example2();

  [[nodiscard]] std::span<const double> odd_coeffs() const { return coeffs_; }
  /// Number of stored odd coefficients (n + 1 for degree 2n + 1).
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] bool is_round() const;
  /// Coefficients of h'' as odd polynomial: b_{2k+1} = 2(k+1)(2k+3) a_{2k+3}.
  [[nodiscard]] std::vector<double> second_derivative_coeffs() const;

  [[nodiscard]] double h(double x) const;
  /// (h'(x), h''(x)).
  [[nodiscard]] std::pair<double, double> derivs(double x) const;

  // Unchecked evaluators used on hot paths where |x| <= 1 holds by
  // construction.
  [[nodiscard]] double h_unchecked(double x) const;
  [[nodiscard]] double dh_unchecked(double x) const;
  [[nodiscard]] double d2h_unchecked(double x) const;

  /// Gauss curvature as a function of x = cos r.
  [[nodiscard]] double curvature_at_x(double x) const;
  /// dG/dx.
  [[nodiscard]] double curvature_slope_at_x(double x) const;

  /// Literal form accepted by parse(), 17 significant digits.
  [[nodiscard]] std::string literal() const;

 private:
  std::vector<double> coeffs_;
};

struct SurfacePoint {
  double r = 0.0;
  double theta = 0.0;
};

struct MetricCoeffs {
  double g_rr = 0.0;
  double g_thth = 0.0;
};

struct CurvatureWitness {
  bool positive = true;
  double x = 0.0;  ///< location of the minimum of G over [-1, 1]
  double g = 0.0;  ///< G(x)
};

struct CriticalPoint {
  double x = 0.0;
  double g = 0.0;
};

double eval_h(const ZollProfile& profile, double x);
std::pair<double, double> eval_h_derivs(const ZollProfile& profile, double x);

/// G(r) = [1 + h(cos r) - cos r h'(cos r)] / [1 + h(cos r)]^3.
double gauss_curvature(const ZollProfile& profile, double r);

/// Interior critical points of G on (-1, 1) in increasing x.
std::vector<CriticalPoint> curvature_critical_points(const ZollProfile& profile);

/// Minimum of G over [-1, 1] located by a 10^4-point scan refined by
/// bisection on dG/dx; `positive` iff that minimum is > 0.
CurvatureWitness check_positive_curvature(const ZollProfile& profile);

/// Metric coefficients at latitude r; throws DomainError at the poles.
MetricCoeffs metric_coeffs(const ZollProfile& profile, double r);

/// Curvature of the warped metric from central differences of the metric
/// coefficients. Independent check of gauss_curvature.
double curvature_fd_check(const ZollProfile& profile, double r, double step);

}  // namespace zollfins
