#pragma once

// One-dimensional quadrature rules for complex-valued integrands.

#include <complex>
#include <functional>

namespace ipd {

using ComplexIntegrand = std::function<std::complex<double>(double)>;

struct RuleResult {
  std::complex<double> value;
  double abs_error = 0;
  /// Integral of |f| over the interval.
  double resabs = 0;
};

/// 15-point Kronrod rule with the embedded 7-point Gauss rule and the
/// QUADPACK error heuristic.
RuleResult gauss_kronrod15(const ComplexIntegrand& f, double a, double b);

struct AdaptiveOptions {
  double abs_tol = 0;
  double rel_tol = 1e-13;
  int max_intervals = 2000;
};

/// Globally adaptive bisection driven by the largest local error.
RuleResult adaptive_gauss_kronrod(const ComplexIntegrand& f, double a, double b, const AdaptiveOptions& opts = {});

/// Double-exponential rule on [a, b]; tolerates integrable endpoint singularities.
RuleResult tanh_sinh(const ComplexIntegrand& f, double a, double b, double rel_tol = 1e-13, int max_levels = 12);

/// Integral over [a, infinity) through the substitution t = a + s / (1 - s).
RuleResult integrate_semi_infinite(const ComplexIntegrand& f, double a, const AdaptiveOptions& opts = {});

}  // namespace ipd
