#include "ipd/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace ipd {

namespace {

// Abscissae and weights of the 15-point Kronrod rule, descending abscissae;
// wg are the weights of the embedded 7-point Gauss rule.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

struct Interval {
  double a, b;
  RuleResult r;
  bool operator<(const Interval& o) const { return r.abs_error < o.r.abs_error; }
};

}  // namespace

RuleResult gauss_kronrod15(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::complex<double> fv1[7], fv2[7];
  const std::complex<double> fc = f(center);
  std::complex<double> resg = fc * wg[3];
  std::complex<double> resk = fc * wgk[7];
  double resabs = std::abs(fc) * wgk[7];
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * xgk[jtw];
    fv1[jtw] = f(center - dx);
    fv2[jtw] = f(center + dx);
    const std::complex<double> sum = fv1[jtw] + fv2[jtw];
    resg += wg[j] * sum;
    resk += wgk[jtw] * sum;
    resabs += wgk[jtw] * (std::abs(fv1[jtw]) + std::abs(fv2[jtw]));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * xgk[jtwm1];
    fv1[jtwm1] = f(center - dx);
    fv2[jtwm1] = f(center + dx);
    resk += wgk[jtwm1] * (fv1[jtwm1] + fv2[jtwm1]);
    resabs += wgk[jtwm1] * (std::abs(fv1[jtwm1]) + std::abs(fv2[jtwm1]));
  }
  const std::complex<double> reskh = resk * 0.5;
  double resasc = wgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  RuleResult out;
  out.value = resk * half;
  resabs *= abs_half;
  resasc *= abs_half;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200 * err / resasc, 1.5));
  if (resabs > kUflow / (50 * kEps)) err = std::max(kEps * 50 * resabs, err);
  out.abs_error = err;
  out.resabs = resabs;
  return out;
}

RuleResult adaptive_gauss_kronrod(const ComplexIntegrand& f, double a, double b, const AdaptiveOptions& opts) {
  std::priority_queue<Interval> heap;
  heap.push({a, b, gauss_kronrod15(f, a, b)});
  double err = heap.top().r.abs_error;
  double resabs = heap.top().r.resabs;
  int count = 1;
  while (count < opts.max_intervals && err > std::max(opts.abs_tol, opts.rel_tol * resabs)) {
    Interval worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid == worst.a || mid == worst.b) {
      heap.push(worst);
      break;
    }
    Interval left{worst.a, mid, gauss_kronrod15(f, worst.a, mid)};
    Interval right{mid, worst.b, gauss_kronrod15(f, mid, worst.b)};
    err += left.r.abs_error + right.r.abs_error - worst.r.abs_error;
    resabs += left.r.resabs + right.r.resabs - worst.r.resabs;
    heap.push(left);
    heap.push(right);
    ++count;
  }
  std::vector<Interval> parts;
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
  RuleResult out;
  for (const auto& p : parts) {
    out.value += p.r.value;
    out.abs_error += p.r.abs_error;
    out.resabs += p.r.resabs;
  }
  return out;
}

RuleResult tanh_sinh(const ComplexIntegrand& f, double a, double b, double rel_tol, int max_levels) {
  const double half = 0.5 * (b - a);
  constexpr double kHalfPi = 1.5707963267948966192313216916398;
  auto node = [&](double t, double& abs_sum, std::complex<double>& sum) {
    const double u = kHalfPi * std::sinh(t);
    const double ch = std::cosh(u);
    const double w = kHalfPi * std::cosh(t) / (ch * ch);
    const double gap = 2.0 / (1.0 + std::exp(2.0 * std::abs(u)));
    if (w < 1e-300 || gap * std::abs(half) == 0) return false;
    const double x = t >= 0 ? b - half * gap : a + half * gap;
    const std::complex<double> fx = f(x);
    if (!std::isfinite(std::abs(fx))) return false;
    sum += w * fx;
    abs_sum += w * std::abs(fx);
    return true;
  };
  // Adds the nodes k h, k = first, first + step, ... on both sides of zero.
  auto partial = [&](double h, int first, int step, double& abs_sum) {
    std::complex<double> sum = 0;
    if (first == 0) node(0.0, abs_sum, sum);
    for (int sign : {1, -1}) {
      for (int k = first == 0 ? step : first; k < 100000; k += step) {
        if (!node(sign * k * h, abs_sum, sum)) break;
      }
    }
    return sum;
  };

  double h = 1.0;
  double abs_sum = 0;
  std::complex<double> sum = partial(h, 0, 1, abs_sum);
  std::complex<double> estimate = sum * h * half;
  RuleResult out{estimate, std::numeric_limits<double>::infinity(), abs_sum * h * std::abs(half)};
  for (int level = 1; level <= max_levels; ++level) {
    h *= 0.5;
    double more_abs = 0;
    sum += partial(h, 1, 2, more_abs);
    abs_sum += more_abs;
    const std::complex<double> next = sum * h * half;
    out.abs_error = std::abs(next - estimate);
    out.value = next;
    out.resabs = abs_sum * h * std::abs(half);
    estimate = next;
    if (level >= 3 && out.abs_error <= rel_tol * out.resabs) break;
  }
  return out;
}

RuleResult integrate_semi_infinite(const ComplexIntegrand& f, double a, const AdaptiveOptions& opts) {
  const ComplexIntegrand g = [&](double s) -> std::complex<double> {
    const double one_minus = 1.0 - s;
    if (one_minus <= 0) return 0.0;
    const std::complex<double> v = f(a + s / one_minus);
    const double jac = 1.0 / (one_minus * one_minus);
    if (v == std::complex<double>(0.0)) return 0.0;
    return v * jac;
  };
  return adaptive_gauss_kronrod(g, 0.0, 1.0, opts);
}

}  // namespace ipd
