#include "ipd/periods.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>

#include <Eigen/Dense>

#include "ipd/error.hpp"
#include "ipd/quadrature.hpp"

namespace ipd {

namespace {

constexpr double kMaxSubtended = kPi / 4;

class SectionModel {
 public:
  explicit SectionModel(const Connection& c) {
    for (const auto& a : c.finite_points()) pts_.push_back(a.to_complex());
    s_.assign(pts_.size(), 0.0);
    const auto anti = global_antiderivative(c);
    const auto pf = partial_fractions(anti.f_global);
    for (const auto& x : pf.polynomial_part.coeffs()) poly_.push_back(x.to_complex());
    for (const auto& t : pf.poles) poles_.push_back({index(t.location.to_complex()), t.order, t.coeff.to_complex()});
    for (const auto& l : anti.log_terms) s_[index(l.location.to_complex())] = l.residue.to_complex();
  }

  const std::vector<cplx>& points() const { return pts_; }

  cplx exponent(cplx z, const std::vector<double>& args) const {
    cplx acc = 0;
    for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * z + *it;
    for (const auto& p : poles_) {
      const cplx inv = 1.0 / (z - pts_[p.point]);
      cplx term = p.coeff;
      for (int j = 0; j < p.order; ++j) term *= inv;
      acc += term;
    }
    for (std::size_t j = 0; j < pts_.size(); ++j) {
      if (s_[j] == cplx(0)) continue;
      acc += s_[j] * cplx(std::log(std::abs(z - pts_[j])), args[j]);
    }
    return acc;
  }

 private:
  std::size_t index(cplx x) const {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (pts_[i] == x) return i;
    }
    throw Error(ErrorCode::InvalidInput, "antiderivative term outside the singular set");
  }

  struct Pole {
    std::size_t point;
    int order;
    cplx coeff;
  };
  std::vector<cplx> poly_;
  std::vector<Pole> poles_;
  std::vector<cplx> pts_;
  std::vector<cplx> s_;
};

class FormModel {
 public:
  explicit FormModel(const RationalFunction& r) {
    for (const auto& x : r.numerator().coeffs()) num_.push_back(x.to_complex());
    for (const auto& x : r.denominator().coeffs()) den_.push_back(x.to_complex());
  }
  cplx operator()(cplx z) const { return horner(num_, z) / horner(den_, z); }

 private:
  static cplx horner(const std::vector<cplx>& c, cplx z) {
    cplx acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
    return acc;
  }
  std::vector<cplx> num_, den_;
};

enum class Param { Line, Arc, FiniteRay, InfiniteRay };

struct PieceParam {
  Param kind;
  cplx origin;     // from / center / ray point / junction
  cplx direction;  // to - from / unused / e^{i theta}
  double radius = 0;

  cplx z(double t) const {
    switch (kind) {
      case Param::Line: return origin + t * direction;
      case Param::Arc: return origin + std::polar(radius, t);
      default: return origin + t * direction;
    }
  }
  cplx dz(double t) const {
    if (kind == Param::Arc) return cplx(0, 1) * std::polar(radius, t);
    return direction;
  }
};

PieceParam param_of(const Piece& piece) {
  if (const auto* l = std::get_if<LinePiece>(&piece)) return {Param::Line, l->from, l->to - l->from};
  if (const auto* a = std::get_if<ArcPiece>(&piece)) return {Param::Arc, a->center, 0, a->radius};
  const auto& r = std::get<RayPiece>(piece);
  if (r.point.at_infinity) return {Param::InfiniteRay, r.junction, std::polar(1.0, r.direction)};
  return {Param::FiniteRay, r.point.to_complex(), std::polar(1.0, r.direction)};
}

double subtended(cplx a, cplx b, cplx p) { return std::abs(std::arg((b - p) / (a - p))); }

void advance(std::vector<double>& args, const std::vector<cplx>& pts, cplx from, cplx to) {
  for (std::size_t j = 0; j < pts.size(); ++j) args[j] += std::arg((to - pts[j]) / (from - pts[j]));
}

struct Panel {
  std::size_t piece;
  double a, b;  // a < b
  double sign;
  std::size_t ref;  // index into the reference-state store
  RuleResult r;
};

struct RefState {
  cplx z;
  std::vector<double> args;
};

class CycleIntegrator {
 public:
  CycleIntegrator(const Connection& c, const Cycle& cy, const RationalFunction& form, const PeriodOptions& opts,
                  const Weight& weight)
      : c_(c), cy_(cy), section_(c), form_(form), opts_(opts), weight_(weight) {}

  PeriodValue run() {
    check_clearance();
    BranchState state{cy_.base, cy_.base_args};
    if (state.args.size() != section_.points().size()) state.args = principal_args(c_, cy_.base);
    for (std::size_t i = 0; i < cy_.pieces.size(); ++i) state = integrate_piece(i, state);
    refine();
    return collect();
  }

 private:
  void check_clearance() const {
    for (std::size_t i = 0; i < cy_.pieces.size(); ++i) {
      for (std::size_t j = 0; j < section_.points().size(); ++j) {
        if (piece_distance(cy_.pieces[i], section_.points()[j]) < opts_.delta) {
          throw Error(ErrorCode::SingularApproach, "piece " + std::to_string(i) + " of " + cy_.name +
                                                       " passes within delta of " + c_.finite_points()[j].to_string());
        }
      }
    }
  }

  cplx integrand(const Panel& p, double t) const {
    const PieceParam& pp = params_[p.piece];
    const RefState& ref = refs_[p.ref];
    const cplx z = pp.z(t);
    std::vector<double> args = ref.args;
    advance(args, section_.points(), ref.z, z);
    const cplx e = section_.exponent(z, args);
    cplx v = std::exp(e) * form_(z) * pp.dz(t) * p.sign;
    if (weight_) v *= weight_(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      if (e.real() < -700) return 0.0;
    }
    return v;
  }

  double magnitude_at(const PieceParam& pp, double t, const RefState& ref) const {
    const cplx z = pp.z(t);
    std::vector<double> args = ref.args;
    advance(args, section_.points(), ref.z, z);
    const cplx e = section_.exponent(z, args);
    if (e.real() < -745) return 0.0;
    double m = std::exp(e.real()) * std::abs(form_(z)) * std::abs(pp.dz(t));
    if (weight_) m *= std::abs(weight_(z));
    return m;
  }

  RuleResult rule(const Panel& p) const {
    return gauss_kronrod15([&](double t) { return integrand(p, t); }, p.a, p.b);
  }

  /// Splits [u, v] (walking order) into chunks subtending less than pi/4 at every
  /// finite singular point, emits panels and returns the state at v.
  RefState walk(std::size_t piece, double u, double v, RefState state, double sign, int depth = 0) {
    const PieceParam& pp = params_[piece];
    const cplx zu = pp.z(u);
    const cplx zv = pp.z(v);
    const cplx zm = pp.z(0.5 * (u + v));
    bool split = false;
    for (const auto& p : section_.points()) {
      double ang = pp.kind == Param::Arc ? subtended(zu, zm, p) + subtended(zm, zv, p) : subtended(zu, zv, p);
      if (ang >= kMaxSubtended) split = true;
    }
    if (pp.kind == Param::Arc && std::abs(v - u) > kMaxSubtended) split = true;
    if (split && depth < 60) {
      const double m = 0.5 * (u + v);
      RefState mid = walk(piece, u, m, std::move(state), sign, depth + 1);
      return walk(piece, m, v, std::move(mid), sign, depth + 1);
    }
    refs_.push_back({zu, state.args});
    Panel panel{piece, std::min(u, v), std::max(u, v), u <= v ? sign : -sign, refs_.size() - 1, {}};
    panel.r = rule(panel);
    running_scale_ += panel.r.resabs;
    panels_.push_back(panel);
    if (pp.kind == Param::Arc) {
      advance(state.args, section_.points(), zu, zm);
      advance(state.args, section_.points(), zm, zv);
    } else {
      advance(state.args, section_.points(), zu, zv);
    }
    state.z = zv;
    return state;
  }

  BranchState integrate_piece(std::size_t i, const BranchState& in) {
    const Piece& piece = cy_.pieces[i];
    params_.push_back(param_of(piece));
    const PieceParam& pp = params_.back();
    RefState state{in.z, in.args};

    if (const auto* l = std::get_if<LinePiece>(&piece)) {
      (void)l;
      RefState out = walk(i, 0.0, 1.0, state, 1.0);
      return {out.z, out.args};
    }
    if (const auto* a = std::get_if<ArcPiece>(&piece)) {
      RefState out = walk(i, a->theta_from, a->theta_to, state, 1.0);
      return {out.z, out.args};
    }

    const auto& r = std::get<RayPiece>(piece);
    const auto g = stokes_geometry(local_data(c_, r.point));
    const double kappa = -leading_decay_rate(g, r.direction);
    const int k = g.k;
    // The known state sits at the junction in both orientations.
    if (pp.kind == Param::FiniteRay) {
      const double rho0 = std::abs(r.junction - r.point.to_complex());
      // walking from rho0 towards 0 integrates in the ToPoint direction
      const double sign = r.orientation == RayOrientation::ToPoint ? 1.0 : -1.0;
      double hi = rho0;
      double prev_mag = std::numeric_limits<double>::infinity();
      for (int n = 0; n < 400; ++n) {
        const double lo = 0.5 * hi;
        state = walk(i, hi, lo, state, sign);
        const double mag = magnitude_at(pp, lo, state);
        const double tail = kappa > 0 ? 2 * mag * std::pow(lo, k + 1) / (kappa * k) : mag * lo;
        if (mag == 0 || (n >= 1 && mag <= prev_mag && tail <= opts_.truncation * running_scale_)) {
          tail_ += tail;
          break;
        }
        prev_mag = mag;
        hi = lo;
        if (n == 399) tail_ += tail;
      }
    } else {
      const double sign = r.orientation == RayOrientation::ToPoint ? 1.0 : -1.0;
      double h = 0.5;
      const double d = section_.points().empty() ? 0.5 : [&] {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : section_.points()) best = std::min(best, std::abs(r.junction - p));
        return best;
      }();
      h = std::min(h, d);
      double lo = 0;
      double hi = h;
      double prev_mag = std::numeric_limits<double>::infinity();
      for (int n = 0; n < 200; ++n) {
        state = walk(i, lo, hi, state, sign);
        const double mag = magnitude_at(pp, hi, state);
        const double zabs = std::abs(pp.z(hi));
        const double tail = kappa > 0 ? 2 * mag / (kappa * k * std::pow(zabs, k - 1)) : mag * hi;
        if (mag == 0 || (n >= 1 && mag <= prev_mag && tail <= opts_.truncation * running_scale_)) {
          tail_ += tail;
          break;
        }
        prev_mag = mag;
        lo = hi;
        hi = lo == 0 ? h : 2 * lo;
        if (n == 199) tail_ += tail;
      }
    }
    return {r.junction, in.args};
  }

  void refine() {
    auto cmp = [this](std::size_t x, std::size_t y) { return panels_[x].r.abs_error < panels_[y].r.abs_error; };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> heap(cmp);
    double err = 0;
    double resabs = 0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
      heap.push(i);
      err += panels_[i].r.abs_error;
      resabs += panels_[i].r.resabs;
    }
    while (!heap.empty() && static_cast<int>(panels_.size()) < opts_.max_panels && err > opts_.quad_rel * resabs) {
      const std::size_t w = heap.top();
      heap.pop();
      const Panel worst = panels_[w];
      const double mid = 0.5 * (worst.a + worst.b);
      if (mid <= worst.a || mid >= worst.b) continue;
      Panel left = worst;
      Panel right = worst;
      left.b = mid;
      right.a = mid;
      left.r = rule(left);
      right.r = rule(right);
      err += left.r.abs_error + right.r.abs_error - worst.r.abs_error;
      resabs += left.r.resabs + right.r.resabs - worst.r.resabs;
      panels_[w] = left;
      panels_.push_back(right);
      heap.push(w);
      heap.push(panels_.size() - 1);
    }
  }

  PeriodValue collect() {
    std::sort(panels_.begin(), panels_.end(), [](const Panel& x, const Panel& y) {
      if (x.piece != y.piece) return x.piece < y.piece;
      return x.a < y.a;
    });
    PeriodValue out;
    for (const auto& p : panels_) {
      out.value += p.r.value;
      out.abs_error += p.r.abs_error;
      out.scale += p.r.resabs;
    }
    out.value *= static_cast<double>(cy_.orientation);
    out.tail_bound = tail_;
    out.segments_used = static_cast<int>(panels_.size());
    const bool finite = std::isfinite(out.value.real()) && std::isfinite(out.value.imag()) && std::isfinite(out.scale);
    out.converged = finite && (out.scale == 0 || out.abs_error + out.tail_bound < opts_.tol * out.scale);
    return out;
  }

  const Connection& c_;
  const Cycle& cy_;
  SectionModel section_;
  FormModel form_;
  PeriodOptions opts_;
  const Weight& weight_;
  std::vector<PieceParam> params_;
  std::vector<RefState> refs_;
  std::vector<Panel> panels_;
  double running_scale_ = 0;
  double tail_ = 0;
};

}  // namespace

BranchState principal_branch(const Connection& c, cplx z) { return {z, principal_args(c, z)}; }

BranchState continue_along_line(const Connection& c, const BranchState& from, cplx to) {
  std::vector<cplx> pts;
  for (const auto& a : c.finite_points()) pts.push_back(a.to_complex());
  BranchState out = from;
  const int steps = 64;
  for (int s = 1; s <= steps; ++s) {
    const cplx next = from.z + (to - from.z) * (static_cast<double>(s) / steps);
    advance(out.args, pts, out.z, next);
    out.z = next;
  }
  return out;
}

BranchState continue_along_arc(const Connection& c, const BranchState& from, cplx center, double sweep) {
  std::vector<cplx> pts;
  for (const auto& a : c.finite_points()) pts.push_back(a.to_complex());
  BranchState out = from;
  const double radius = std::abs(from.z - center);
  const double theta0 = std::arg(from.z - center);
  const int steps = std::max(64, static_cast<int>(std::ceil(std::abs(sweep) / 0.05)));
  for (int s = 1; s <= steps; ++s) {
    const cplx next = center + std::polar(radius, theta0 + sweep * s / steps);
    advance(out.args, pts, out.z, next);
    out.z = next;
  }
  return out;
}

cplx flat_section_eval(const Connection& c, const BranchState& bs, Side side) {
  const SectionModel model(c);
  const cplx e = model.exponent(bs.z, bs.args);
  return side == Side::Dual ? std::exp(e) : std::exp(-e);
}

PeriodValue integrate_cycle(const Connection& c, const Cycle& cy, const RationalFunction& form,
                            const PeriodOptions& opts, const Weight& weight) {
  if (form.is_zero()) {
    PeriodValue zero;
    zero.converged = true;
    return zero;
  }
  CycleIntegrator integrator(c, cy, form, opts, weight);
  return integrator.run();
}

int numerical_rank(const std::vector<std::vector<cplx>>& m, double rel_threshold) {
  if (m.empty() || m.front().empty()) return 0;
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = static_cast<Eigen::Index>(m.front().size());
  Eigen::MatrixXcd a(rows, cols);
  double largest = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      a(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      largest = std::max(largest, std::abs(a(i, j)));
    }
  }
  if (largest == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  const auto diag = qr.matrixQR().diagonal();
  int rank = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (std::abs(diag(i)) > rel_threshold * largest) ++rank;
  }
  return rank;
}

std::vector<std::vector<cplx>> equilibrate(std::vector<std::vector<cplx>> m) {
  for (auto& row : m) {
    double big = 0;
    for (const auto& x : row) big = std::max(big, std::abs(x));
    if (big > 0) {
      for (auto& x : row) x /= big;
    }
  }
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t j = 0; j < cols; ++j) {
    double big = 0;
    for (const auto& row : m) big = std::max(big, std::abs(row[j]));
    if (big > 0) {
      for (auto& row : m) row[j] /= big;
    }
  }
  return m;
}

PeriodMatrix period_matrix(const Connection& c, const std::vector<Cycle>& cycles,
                           const std::vector<RationalFunction>& forms, const PeriodOptions& opts) {
  PeriodMatrix out;
  std::vector<std::vector<std::future<PeriodValue>>> jobs(cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = 0; j < forms.size(); ++j) {
      jobs[i].push_back(std::async(std::launch::async, [&, i, j] { return integrate_cycle(c, cycles[i], forms[j], opts); }));
    }
  }
  std::vector<std::vector<cplx>> values(cycles.size());
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    std::vector<PeriodValue> row;
    for (auto& f : jobs[i]) {
      row.push_back(f.get());
      out.converged = out.converged && row.back().converged;
      out.scale = std::max(out.scale, std::abs(row.back().value));
      values[i].push_back(row.back().value);
    }
    out.entries.push_back(std::move(row));
  }
  out.rank = numerical_rank(values);
  out.equilibrated_rank = numerical_rank(equilibrate(values));
  if (!cycles.empty() && cycles.size() == forms.size()) {
    const auto n = static_cast<Eigen::Index>(cycles.size());
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) a(i, j) = values[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    out.determinant = a.determinant();
  }
  return out;
}

cplx bessel_parameter_derivative(cplx u) { return 0.5 * (u - 1.0 / u); }

PeriodValue parametric_derivative_period(const Connection& c, const Cycle& cy, const RationalFunction& form, int order,
                                         const std::function<cplx(cplx)>& parameter_derivative,
                                         const PeriodOptions& opts) {
  if (order < 0 || order > 2) throw Error(ErrorCode::InvalidInput, "parameter derivative order must be 0, 1 or 2");
  if (order == 0) return integrate_cycle(c, cy, form, opts);
  const Weight w = [&](cplx z) {
    const cplx d = parameter_derivative(z);
    return order == 1 ? d : d * d;
  };
  return integrate_cycle(c, cy, form, opts, w);
}

}  // namespace ipd
