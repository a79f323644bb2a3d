#pragma once

// Independent reference values for the verification suites.

#include <complex>

namespace ipd::oracle {

/// Lanczos approximation (g = 7, 9 terms) with reflection for Re s < 1/2.
/// DomainError within 1e-12 of a nonpositive integer.
std::complex<double> gamma(std::complex<double> s);

/// Power series of J_n; integer n, |z| <= 20.
std::complex<double> bessel_j(int n, std::complex<double> z);
/// d/dz J_n(z) = (J_{n-1} - J_{n+1}) / 2.
std::complex<double> bessel_j_derivative(int n, std::complex<double> z);

/// Taylor series for |x| < 2.5, continued fraction for erfc beyond.
double erf(double x);

}  // namespace ipd::oracle
