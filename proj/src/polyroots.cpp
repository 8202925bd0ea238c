#include "zollfins/polyroots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "zollfins/errors.hpp"

namespace zollfins {

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == 0.0) --n;
  if (n == 0) throw DomainError("zero polynomial has no isolated roots");
  const int degree = static_cast<int>(n) - 1;
  if (degree == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  const double lead = coeffs[n - 1];
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -coeffs[i] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> roots(solver.eigenvalues().begin(), solver.eigenvalues().end());
  return roots;
}

std::vector<double> positive_real_roots(std::span<const double> coeffs, double imag_tol) {
  std::vector<double> out;
  for (const auto& z : polynomial_roots(coeffs)) {
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z)) && z.real() > 0.0) {
      // Newton polish on the real axis.
      double x = z.real();
      for (int iter = 0; iter < 3; ++iter) {
        double p = 0.0;
        double dp = 0.0;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
          dp = dp * x + p;
          p = p * x + coeffs[i];
        }
        if (dp == 0.0) break;
        const double step = p / dp;
        if (!(std::abs(step) < 1e-6 * std::abs(x))) break;
        x -= step;
      }
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace zollfins
