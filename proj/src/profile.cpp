#include "zollfins/profile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "zollfins/errors.hpp"

namespace zollfins {
namespace {

constexpr int kScanPoints = 10000;
constexpr int kBisectionSteps = 80;

// Root of f on [a, b] given f(a), f(b) of opposite sign.
template <class F>
double bisect(F&& f, double a, double b, double fa) {
  for (int i = 0; i < kBisectionSteps && b - a > 0.0; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

template <class F>
std::vector<double> sign_change_roots(F&& f) {
  std::vector<double> roots;
  double x0 = -1.0;
  double f0 = f(x0);
  for (int i = 1; i <= kScanPoints; ++i) {
    const double x1 = -1.0 + 2.0 * i / kScanPoints;
    const double f1 = f(x1);
    if (f0 == 0.0 && i > 1) {
      roots.push_back(x0);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      roots.push_back(bisect(f, x0, x1, f0));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

void check_domain(double x) {
  if (!(std::abs(x) <= 1.0 + ZollProfile::kDomainSlack)) {
    throw DomainError(fmt::format("profile argument {} outside [-1, 1]", x));
  }
}

}  // namespace

ZollProfile::ZollProfile(std::vector<double> odd_coeffs) : coeffs_(std::move(odd_coeffs)) {
  double sum = 0.0;
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw ProfileError("profile coefficient is not finite");
    sum += a;
  }
  if (std::abs(sum) > kEndpointTolerance) {
    throw ProfileError(fmt::format("h(1) = {:.3g}: odd coefficients must sum to zero", sum));
  }
  // |h| < 1: dense scan plus the interior extrema of h.
  double worst = 0.0;
  for (int i = 0; i <= kScanPoints; ++i) {
    worst = std::max(worst, std::abs(h_unchecked(-1.0 + 2.0 * i / kScanPoints)));
  }
  for (double x : sign_change_roots([this](double t) { return dh_unchecked(t); })) {
    worst = std::max(worst, std::abs(h_unchecked(x)));
  }
  if (!(worst < 1.0)) {
    throw ProfileError(fmt::format("max |h| = {:.6g} on [-1, 1]; the metric needs |h| < 1", worst));
  }
}

ZollProfile ZollProfile::parse(std::string_view literal) {
  std::vector<double> coeffs;
  std::size_t pos = 0;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  if (trim(literal).empty()) return ZollProfile{};
  while (pos <= literal.size()) {
    const std::size_t comma = std::min(literal.find(',', pos), literal.size());
    std::string_view token = trim(literal.substr(pos, comma - pos));
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || end != token.data() + token.size()) {
      throw ProfileError(fmt::format("cannot parse profile coefficient '{}'", token));
    }
    coeffs.push_back(value);
    pos = comma + 1;
  }
  return ZollProfile(std::move(coeffs));
}

ZollProfile ZollProfile::example1(double eps) { return ZollProfile({eps, -eps}); }

ZollProfile ZollProfile::example2() { return ZollProfile({1.0, -2.0, 1.0}); }

bool ZollProfile::is_round() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double a) { return a == 0.0; });
}

std::vector<double> ZollProfile::second_derivative_coeffs() const {
  std::vector<double> b;
  for (std::size_t k = 0; k + 1 < coeffs_.size(); ++k) {
    b.push_back(2.0 * static_cast<double>(k + 1) * static_cast<double>(2 * k + 3) * coeffs_[k + 1]);
  }
  return b;
}

double ZollProfile::h_unchecked(double x) const {
  const double x2 = x * x;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x2 + *it;
  return x * acc;
}

double ZollProfile::dh_unchecked(double x) const {
  const double x2 = x * x;
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    acc = acc * x2 + static_cast<double>(2 * k + 1) * coeffs_[k];
  }
  return acc;
}

double ZollProfile::d2h_unchecked(double x) const {
  const double x2 = x * x;
  double acc = 0.0;
  for (std::size_t k = coeffs_.size(); k-- > 1;) {
    acc = acc * x2 + static_cast<double>(2 * k) * static_cast<double>(2 * k + 1) * coeffs_[k];
  }
  return x * acc;
}

double ZollProfile::h(double x) const {
  check_domain(x);
  return h_unchecked(x);
}

std::pair<double, double> ZollProfile::derivs(double x) const {
  check_domain(x);
  return {dh_unchecked(x), d2h_unchecked(x)};
}

double ZollProfile::curvature_at_x(double x) const {
  const double one_h = 1.0 + h_unchecked(x);
  return (one_h - x * dh_unchecked(x)) / (one_h * one_h * one_h);
}

double ZollProfile::curvature_slope_at_x(double x) const {
  // G = g / (1+h)^3 with g = 1 + h - x h', g' = -x h''.
  const double one_h = 1.0 + h_unchecked(x);
  const double dh = dh_unchecked(x);
  const double g = one_h - x * dh;
  const double one_h3 = one_h * one_h * one_h;
  return -x * d2h_unchecked(x) / one_h3 - 3.0 * g * dh / (one_h3 * one_h);
}

std::string ZollProfile::literal() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ',';
    out += fmt::format("{:.17g}", coeffs_[i]);
  }
  return out;
}

double eval_h(const ZollProfile& profile, double x) { return profile.h(x); }

std::pair<double, double> eval_h_derivs(const ZollProfile& profile, double x) {
  return profile.derivs(x);
}

double gauss_curvature(const ZollProfile& profile, double r) {
  if (!(r >= 0.0 && r <= std::numbers::pi)) {
    throw DomainError(fmt::format("latitude r = {} outside [0, pi]", r));
  }
  return profile.curvature_at_x(std::cos(r));
}

std::vector<CriticalPoint> curvature_critical_points(const ZollProfile& profile) {
  std::vector<CriticalPoint> out;
  for (double x : sign_change_roots([&](double t) { return profile.curvature_slope_at_x(t); })) {
    if (std::abs(x) < 1.0) out.push_back({x, profile.curvature_at_x(x)});
  }
  return out;
}

CurvatureWitness check_positive_curvature(const ZollProfile& profile) {
  CurvatureWitness best{true, -1.0, profile.curvature_at_x(-1.0)};
  auto consider = [&](double x) {
    const double g = profile.curvature_at_x(x);
    if (g < best.g) best = {true, x, g};
  };
  consider(1.0);
  for (int i = 0; i <= kScanPoints; ++i) consider(-1.0 + 2.0 * i / kScanPoints);
  for (const auto& cp : curvature_critical_points(profile)) consider(cp.x);
  best.positive = best.g > 0.0;
  return best;
}

MetricCoeffs metric_coeffs(const ZollProfile& profile, double r) {
  const double s = std::sin(r);
  if (!(r > 0.0 && r < std::numbers::pi) || s < 1e-12) {
    throw DomainError(fmt::format("metric degenerates at r = {} (pole)", r));
  }
  const double one_h = 1.0 + profile.h(std::cos(r));
  return {one_h * one_h, s * s};
}

double curvature_fd_check(const ZollProfile& profile, double r, double step) {
  if (!(step >= 1e-7 && step <= 1e-2)) {
    throw DomainError(fmt::format("finite-difference step {} outside [1e-7, 1e-2]", step));
  }
  if (!(r > 2.0 * step && r < std::numbers::pi - 2.0 * step)) {
    throw DomainError(fmt::format("r = {} too close to a pole for step {}", r, step));
  }
  auto root_gtt = [&](double t) { return std::sqrt(metric_coeffs(profile, t).g_thth); };
  auto root_grr = [&](double t) { return std::sqrt(metric_coeffs(profile, t).g_rr); };
  // f = (d sqrt(g_thth)/dr) / sqrt(g_rr)
  auto f = [&](double t) {
    return (root_gtt(t + step) - root_gtt(t - step)) / (2.0 * step) / root_grr(t);
  };
  const double df = (f(r + step) - f(r - step)) / (2.0 * step);
  return -df / (root_grr(r) * root_gtt(r));
}

}  // namespace zollfins
