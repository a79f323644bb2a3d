#pragma once

// Flat sections with tracked branches and period integrals over cycles.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ipd/homology.hpp"
#include "ipd/stokes.hpp"

namespace ipd {

/// Position plus a continuously tracked arg(z - a_j) per finite singular point.
struct BranchState {
  cplx z;
  std::vector<double> args;
};

BranchState principal_branch(const Connection& c, cplx z);
/// Continues the state along the straight segment to `to`.
BranchState continue_along_line(const Connection& c, const BranchState& from, cplx to);
/// Continues along the arc of the given center from the current position by `sweep` radians.
BranchState continue_along_arc(const Connection& c, const BranchState& from, cplx center, double sweep);

/// exp(f_global + sum s_j (log|z - a_j| + i arg_j)) on the dual side, its reciprocal on the self side.
cplx flat_section_eval(const Connection& c, const BranchState& bs, Side side = Side::Dual);

struct PeriodOptions {
  double tol = 1e-10;           // requested accuracy relative to the scale
  double quad_rel = 1e-13;      // adaptive refinement target
  double truncation = 1e-16;    // ray tails are cut below this fraction of the running scale
  int max_panels = 8000;
  double delta = kDefaultDelta;
};

struct PeriodValue {
  cplx value;
  double abs_error = 0;
  double tail_bound = 0;
  /// Integral of |integrand| along the cycle.
  double scale = 0;
  int segments_used = 0;
  bool converged = false;
};

/// Extra factor multiplying the integrand, evaluated at z.
using Weight = std::function<cplx(cplx)>;

PeriodValue integrate_cycle(const Connection& c, const Cycle& cy, const RationalFunction& form,
                            const PeriodOptions& opts = {}, const Weight& weight = {});

struct PeriodMatrix {
  /// rows = cycles, columns = forms
  std::vector<std::vector<PeriodValue>> entries;
  int rank = 0;
  /// Rank after scaling rows, then columns, to unit largest entry.
  int equilibrated_rank = 0;
  std::optional<cplx> determinant;
  /// Largest entry magnitude.
  double scale = 0;
  bool converged = true;
};

PeriodMatrix period_matrix(const Connection& c, const std::vector<Cycle>& cycles,
                           const std::vector<RationalFunction>& forms, const PeriodOptions& opts = {});

/// Numerical rank with threshold rel_threshold * max |entry| (column-pivoted QR).
int numerical_rank(const std::vector<std::vector<cplx>>& m, double rel_threshold = 1e-6);
std::vector<std::vector<cplx>> equilibrate(std::vector<std::vector<cplx>> m);

/// (u - 1/u)/2: derivative of z(u - 1/u)/2 with respect to z.
cplx bessel_parameter_derivative(cplx u);

/// k-th derivative in the parameter of the period, by quadrature of the
/// integrand times parameter_derivative(u)^k.
PeriodValue parametric_derivative_period(const Connection& c, const Cycle& cy, const RationalFunction& form, int order,
                                         const std::function<cplx(cplx)>& parameter_derivative,
                                         const PeriodOptions& opts = {});

}  // namespace ipd
