#pragma once

#include <complex>
#include <span>
#include <vector>

namespace zollfins {

/// All complex roots of sum_i coeffs[i] x^i, via eigenvalues of the companion
/// matrix. Trailing (highest-order) zero coefficients are dropped.
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs_ascending);

/// Real roots (|Im| <= imag_tol * max(1, |root|)) that are strictly positive, ascending.
std::vector<double> positive_real_roots(std::span<const double> coeffs_ascending,
                                        double imag_tol = 1e-7);

}  // namespace zollfins
