#include "ipd/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ipd/error.hpp"

namespace ipd::oracle {

namespace {

constexpr double kPi = 3.141592653589793238462643383280;
constexpr double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

}  // namespace

std::complex<double> gamma(std::complex<double> s) {
  if (s.real() <= 0.5 && std::abs(s.imag()) < 1e-12) {
    const double r = std::round(s.real());
    if (std::abs(s.real() - r) < 1e-12) throw Error(ErrorCode::DomainError, "gamma pole at a nonpositive integer");
  }
  if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw Error(ErrorCode::DomainError, "gamma of non-finite value");
  if (s.real() < 0.5) return kPi / (std::sin(kPi * s) * gamma(1.0 - s));
  s -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (s + static_cast<double>(i));
  const std::complex<double> t = s + 7.5;
  return std::sqrt(2 * kPi) * std::pow(t, s + 0.5) * std::exp(-t) * x;
}

namespace {

std::complex<double> bessel_series(int n, std::complex<double> z) {
  const std::complex<double> half = 0.5 * z;
  const std::complex<double> q = -half * half;
  std::complex<double> term = 1;
  for (int i = 1; i <= n; ++i) term *= half / static_cast<double>(i);
  std::complex<double> sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    const std::complex<double> next = sum + term;
    if (next == sum) break;
    sum = next;
  }
  return sum;
}

// Miller: downward recurrence from far above max(n, |z|), normalized by
// J0 + 2 sum J_2k = 1, or by J0 + 2 sum (-1)^k J_2k = cos z off the real axis.
std::complex<double> bessel_miller(int n, std::complex<double> z) {
  const double big = std::max<double>(n, std::abs(z));
  int top = static_cast<int>(big + 30 + std::sqrt(60 * big));
  top += top % 2;
  const bool use_cos = std::abs(z.imag()) > 1;
  std::complex<double> above = 0, cur = 1e-300, wanted = 0, norm = 0;
  for (int k = top; k >= 0; --k) {
    if (k == n) wanted = cur;
    if (k % 2 == 0) {
      const double weight = k == 0 ? 1.0 : 2.0;
      norm += (use_cos && (k / 2) % 2 == 1 ? -weight : weight) * cur;
    }
    if (k == 0) break;
    const std::complex<double> below = 2.0 * static_cast<double>(k) / z * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > 1e250) {
      above *= 1e-250;
      cur *= 1e-250;
      wanted *= 1e-250;
      norm *= 1e-250;
    }
  }
  return wanted * (use_cos ? std::cos(z) : 1.0) / norm;
}

}  // namespace

std::complex<double> bessel_j(int n, std::complex<double> z) {
  if (std::abs(z) > 20) throw Error(ErrorCode::DomainError, "bessel_j limited to |z| <= 20");
  if (n < 0) return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, z);
  return std::abs(z) <= 8 ? bessel_series(n, z) : bessel_miller(n, z);
}

std::complex<double> bessel_j_derivative(int n, std::complex<double> z) {
  return 0.5 * (bessel_j(n - 1, z) - bessel_j(n + 1, z));
}

double erf(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::DomainError, "erf of NaN");
  if (std::isinf(x)) return x > 0 ? 1.0 : -1.0;
  const double ax = std::abs(x);
  const double sign = x < 0 ? -1.0 : 1.0;
  if (ax < 2.5) {
    // 2/sqrt(pi) sum (-1)^k x^{2k+1} / (k! (2k+1))
    double term = ax;
    double sum = ax;
    const double x2 = ax * ax;
    for (int k = 1; k < 200; ++k) {
      term *= -x2 / k;
      const double next = sum + term / (2 * k + 1);
      if (next == sum) break;
      sum = next;
    }
    return sign * 2.0 / std::sqrt(kPi) * sum;
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz
  constexpr double tiny = 1e-300;
  double f = ax;
  double c = ax;
  double d = 0;
  for (int k = 1; k < 500; ++k) {
    const double a = 0.5 * k;
    d = ax + a * d;
    if (d == 0) d = tiny;
    c = ax + a / c;
    if (c == 0) c = tiny;
    d = 1 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1) < std::numeric_limits<double>::epsilon()) break;
  }
  const double erfc = std::exp(-ax * ax) / (std::sqrt(kPi) * f);
  return sign * (1.0 - erfc);
}

}  // namespace ipd::oracle
