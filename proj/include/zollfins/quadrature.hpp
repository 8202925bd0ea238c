#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "zollfins/errors.hpp"

namespace zollfins {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of the given order, computed once by Newton iteration on P_n and
/// cached. Thread-safe.
const GaussRule& gauss_legendre(int order);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  ///< |Q128 - Q64| summed over accepted panels
  int panels = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-14;
  int max_depth = 40;
};

struct RuleSum {
  double value = 0.0;
  double magnitude = 0.0;  ///< same rule applied to |f|
};

template <class F>
RuleSum apply_rule(const GaussRule& rule, F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  RuleSum sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double term = rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum.value += term;
    sum.magnitude += std::abs(term);
  }
  sum.value *= half;
  sum.magnitude *= std::abs(half);
  return sum;
}

namespace detail {

template <class F>
void adaptive_panel(F& f, double a, double b, double tol, const QuadratureOptions& opt, int depth,
                    QuadratureResult& acc) {
  const double q64 = apply_rule(gauss_legendre(64), f, a, b).value;
  const RuleSum fine = apply_rule(gauss_legendre(128), f, a, b);
  const double q128 = fine.value;
  if (!std::isfinite(q128)) throw QuadratureError("non-finite integrand");
  const double err = std::abs(q128 - q64);
  // Rounding floor: cancellation inside the panel limits what the rules can agree on.
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * fine.magnitude;
  if (err <= std::max({tol, opt.rel_tol * std::abs(q128), floor})) {
    acc.value += q128;
    acc.error += err;
    ++acc.panels;
    return;
  }
  if (depth >= opt.max_depth) {
    throw QuadratureError("Gauss-Legendre 64/128 panels failed to agree at maximum depth");
  }
  const double m = 0.5 * (a + b);
  adaptive_panel(f, a, m, 0.5 * tol, opt, depth + 1, acc);
  adaptive_panel(f, m, b, 0.5 * tol, opt, depth + 1, acc);
}

}  // namespace detail

/// Adaptive Gauss-Legendre: each panel is accepted when the order-64 and
/// order-128 rules agree, otherwise it is bisected.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  QuadratureResult acc;
  if (a == b) return acc;
  detail::adaptive_panel(f, a, b, opt.abs_tol, opt, 0, acc);
  return acc;
}

}  // namespace zollfins
