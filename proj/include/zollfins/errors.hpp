#pragma once

#include <stdexcept>
#include <string>

namespace zollfins {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Profile coefficients violate the Zoll conditions.
class ProfileError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature could not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ODE step controller failure.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Finsler geodesic left the (R, Theta) chart.
class ChartExitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The indicatrix failed to be a simple convex curve around the origin.
class ConvexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zollfins
