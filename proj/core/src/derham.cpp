#include "ipd/derham.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "ipd/error.hpp"

namespace ipd {

namespace {

using SparseVec = std::vector<std::pair<int, ExactScalar>>;

/// Element of the partial-fraction algebra: sum poly[k] z^k + sum poles[(p, j)] (z - a_p)^{-j}.
struct PFElem {
  std::map<int, ExactScalar> poly;
  std::map<std::pair<int, int>, ExactScalar> poles;
};

class PointTable {
 public:
  explicit PointTable(std::vector<ExactScalar> pts) : pts_(std::move(pts)) {}

  int index_of(const ExactScalar& x) const {
    for (std::size_t i = 0; i < pts_.size(); ++i) {
      if (pts_[i] == x) return static_cast<int>(i);
    }
    return -1;
  }
  const ExactScalar& at(int i) const { return pts_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(pts_.size()); }

 private:
  std::vector<ExactScalar> pts_;
};

void add_to(std::map<int, ExactScalar>& m, int k, const ExactScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = m.try_emplace(k, c);
  if (!inserted) it->second += c;
}

void add_pole(PFElem& e, int p, int j, const ExactScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = e.poles.try_emplace({p, j}, c);
  if (!inserted) it->second += c;
}

/// e += coeff * (z - a_p)^n for any integer n.
void add_shifted_power(PFElem& e, const PointTable& pts, int p, int n, const ExactScalar& coeff) {
  if (coeff.is_zero()) return;
  if (n < 0) {
    add_pole(e, p, -n, coeff);
    return;
  }
  const ExactScalar minus_a = -pts.at(p);
  for (int l = 0; l <= n; ++l) {
    add_to(e.poly, l, coeff * ExactScalar(mpq_class(binomial(n, l))) * pow(minus_a, n - l));
  }
}

struct AlphaPole {
  int point;
  int order;
  ExactScalar coeff;
};

class ConnectionAlgebra {
 public:
  explicit ConnectionAlgebra(const Connection& c) : pts_(c.finite_points()) {
    const auto& pf = c.alpha_partial_fractions();
    poly_ = pf.polynomial_part;
    for (const auto& t : pf.poles) alpha_poles_.push_back({pts_.index_of(t.location), t.order, t.coeff});
  }

  const PointTable& points() const { return pts_; }

  /// nabla(z^k)
  PFElem nabla_monomial(int k) const {
    PFElem e;
    if (k > 0) add_to(e.poly, k - 1, ExactScalar(k));
    for (int i = 0; i <= poly_.degree(); ++i) add_to(e.poly, i + k, poly_.coeff(i));
    for (const auto& ap : alpha_poles_) {
      const ExactScalar& b = pts_.at(ap.point);
      for (int i = 0; i <= k; ++i) {
        add_shifted_power(e, pts_, ap.point, i - ap.order, ap.coeff * ExactScalar(mpq_class(binomial(k, i))) * pow(b, k - i));
      }
    }
    return e;
  }

  /// nabla((z - a_p)^{-j})
  PFElem nabla_pole(int p, int j) const {
    PFElem e;
    add_pole(e, p, j + 1, ExactScalar(-j));
    const Polynomial shifted = poly_.taylor_shift(pts_.at(p));
    for (int i = 0; i <= shifted.degree(); ++i) add_shifted_power(e, pts_, p, i - j, shifted.coeff(i));
    for (const auto& ap : alpha_poles_) {
      if (ap.point == p) {
        add_pole(e, p, j + ap.order, ap.coeff);
        continue;
      }
      add_pole_product(e, p, j, ap.point, ap.order, ap.coeff);
    }
    return e;
  }

 private:
  /// e += c (z-a)^{-j} (z-b)^{-k}, a != b, split into principal parts at a and b.
  void add_pole_product(PFElem& e, int pa, int j, int pb, int k, const ExactScalar& c) const {
    const ExactScalar ab = pts_.at(pa) - pts_.at(pb);
    const ExactScalar ba = -ab;
    for (int n = 0; n < j; ++n) {
      add_pole(e, pa, j - n, c * ExactScalar(mpq_class(binomial(-k, n))) * pow(ab, -k - n));
    }
    for (int n = 0; n < k; ++n) {
      add_pole(e, pb, k - n, c * ExactScalar(mpq_class(binomial(-j, n))) * pow(ba, -j - n));
    }
  }

  PointTable pts_;
  Polynomial poly_;
  std::vector<AlphaPole> alpha_poles_;
};

PFElem to_pf_elem(const RationalFunction& r, const PointTable& pts) {
  PFElem e;
  const PartialFractionForm pf = partial_fractions(r);
  for (int k = 0; k <= pf.polynomial_part.degree(); ++k) add_to(e.poly, k, pf.polynomial_part.coeff(k));
  for (const auto& t : pf.poles) {
    const int p = pts.index_of(t.location);
    if (p < 0) throw Error(ErrorCode::InvalidForm, "form has a pole at " + t.location.to_string() + " outside D");
    add_pole(e, p, t.order, t.coeff);
  }
  return e;
}

/// Coordinates of the form lattice: finite points first, pole orders ascending, then z^k dz.
class Ambient {
 public:
  Ambient(std::vector<int> finite_orders, int poly_max) : orders_(std::move(finite_orders)), poly_max_(poly_max) {
    int offset = 0;
    for (int m : orders_) {
      offsets_.push_back(offset);
      offset += m;
    }
    poly_offset_ = offset;
    size_ = offset + poly_max_ + 1;
  }

  int size() const { return size_; }

  std::optional<SparseVec> encode(const PFElem& e) const {
    SparseVec v;
    for (const auto& [key, c] : e.poles) {
      if (c.is_zero()) continue;
      const auto [p, j] = key;
      if (j > orders_[static_cast<std::size_t>(p)]) return std::nullopt;
      v.emplace_back(offsets_[static_cast<std::size_t>(p)] + j - 1, c);
    }
    for (const auto& [k, c] : e.poly) {
      if (c.is_zero()) continue;
      if (k > poly_max_) return std::nullopt;
      v.emplace_back(poly_offset_ + k, c);
    }
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return v;
  }

 private:
  std::vector<int> orders_;
  std::vector<int> offsets_;
  int poly_max_;
  int poly_offset_ = 0;
  int size_ = 0;
};

/// a += s * b on sorted sparse vectors.
void axpy(SparseVec& a, const ExactScalar& s, const SparseVec& b) {
  SparseVec out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(std::move(a[i++]));
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, s * b[j].second);
      ++j;
    } else {
      ExactScalar v = a[i].second + s * b[j].second;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  a = std::move(out);
}

/// Row echelon form keyed by the largest index of each row.
class Echelon {
 public:
  explicit Echelon(int n) : rows_(static_cast<std::size_t>(n)) {}

  /// Eliminates leading entries while a matching row exists; tag += sign * lambda * row.tag.
  void reduce(SparseVec& v, SparseVec& tag, int sign) const {
    while (!v.empty()) {
      const auto& row = rows_[static_cast<std::size_t>(v.back().first)];
      if (!row) return;
      const ExactScalar lambda = v.back().second;
      axpy(v, -lambda, row->v);
      if (!row->tag.empty()) axpy(tag, sign > 0 ? lambda : -lambda, row->tag);
    }
  }

  bool insert(SparseVec v, SparseVec tag) {
    reduce(v, tag, -1);
    if (v.empty()) return false;
    const ExactScalar inv = ExactScalar(1) / v.back().second;
    for (auto& x : v) x.second *= inv;
    for (auto& x : tag) x.second *= inv;
    const int pivot = v.back().first;
    rows_[static_cast<std::size_t>(pivot)] = Row{std::move(v), std::move(tag)};
    return true;
  }

 private:
  struct Row {
    SparseVec v;
    SparseVec tag;
  };
  std::vector<std::optional<Row>> rows_;
};

struct Candidate {
  int order;
  int point_rank;
  int sub;
  RationalFunction form;
  PFElem elem;
};

int max_orders_local(const SingularPointData& d) { return std::max(d.pole_order, 1); }

}  // namespace

class LatticeReducer {
 public:
  LatticeReducer(const Connection& c, const LatticeBounds& bounds)
      : algebra_(c), has_infinity_(c.infinity_singular()), ambient_(finite_orders(c, bounds), poly_max(c, bounds)),
        echelon_(ambient_.size()) {}

  /// Inserts the image of nabla on the section lattice; returns the kernel dimension.
  int insert_image(const LatticeBounds& bounds) {
    int sections = 0;
    int rank = 0;
    auto push = [&](const PFElem& e) {
      ++sections;
      auto v = ambient_.encode(e);
      if (!v) throw Error(ErrorCode::LatticeTooSmall, "image of nabla leaves the form lattice");
      if (echelon_.insert(std::move(*v), {})) ++rank;
    };
    const auto& pts = algebra_.points();
    for (const auto& b : bounds.points) {
      if (b.point.at_infinity) continue;
      const int p = pts.index_of(b.point.location);
      for (int j = 1; j <= b.section_order; ++j) push(algebra_.nabla_pole(p, j));
    }
    const int top = has_infinity_ ? infinity_bound(bounds).section_order : 0;
    for (int k = 0; k <= top; ++k) push(algebra_.nabla_monomial(k));
    return sections - rank;
  }

  bool insert_candidate(const RationalFunction& form) {
    auto v = ambient_.encode(to_pf_elem(form, algebra_.points()));
    if (!v) throw Error(ErrorCode::LatticeTooSmall, "basis form outside the form lattice");
    SparseVec tag{{basis_count_, ExactScalar(1)}};
    if (!echelon_.insert(std::move(*v), std::move(tag))) return false;
    ++basis_count_;
    return true;
  }

  bool insert_candidate(const PFElem& elem) {
    auto v = ambient_.encode(elem);
    if (!v) throw Error(ErrorCode::LatticeTooSmall, "candidate outside the form lattice");
    SparseVec tag{{basis_count_, ExactScalar(1)}};
    if (!echelon_.insert(std::move(*v), std::move(tag))) return false;
    ++basis_count_;
    return true;
  }

  int basis_count() const { return basis_count_; }

  /// nullopt when the form does not fit this lattice.
  std::optional<std::vector<ExactScalar>> coordinates(const RationalFunction& form) const {
    auto v = ambient_.encode(to_pf_elem(form, algebra_.points()));
    if (!v) return std::nullopt;
    SparseVec acc;
    echelon_.reduce(*v, acc, +1);
    if (!v->empty()) throw Error(ErrorCode::InvalidForm, "form is not in the span of the lattice");
    std::vector<ExactScalar> out(static_cast<std::size_t>(basis_count_));
    for (auto& [i, x] : acc) out[static_cast<std::size_t>(i)] = x;
    return out;
  }

  static const PointBound& infinity_bound(const LatticeBounds& bounds) {
    return bounds.points.back();
  }

 private:
  static std::vector<int> finite_orders(const Connection& c, const LatticeBounds& bounds) {
    std::vector<int> out;
    for (const auto& x : c.finite_points()) {
      auto it = std::find_if(bounds.points.begin(), bounds.points.end(),
                             [&](const PointBound& b) { return b.point == Point::finite(x); });
      out.push_back(it->form_order);
    }
    return out;
  }

  static int poly_max(const Connection& c, const LatticeBounds& bounds) {
    if (!c.infinity_singular()) return -1;
    return infinity_bound(bounds).form_order - 2;
  }

  ConnectionAlgebra algebra_;
  bool has_infinity_;
  Ambient ambient_;
  Echelon echelon_;
  int basis_count_ = 0;
};

namespace {

std::vector<Candidate> form_candidates(const Connection& c, const LatticeBounds& bounds) {
  std::vector<Candidate> out;
  const auto finite = c.finite_points();
  const PointTable pts(finite);
  auto pole_elem = [](int p, int j, const ExactScalar& coeff) {
    PFElem e;
    add_pole(e, p, j, coeff);
    return e;
  };
  for (const auto& b : bounds.points) {
    if (b.point.at_infinity) {
      for (int k = 0; k + 2 <= b.form_order; ++k) {
        PFElem e;
        add_to(e.poly, k, ExactScalar(1));
        out.push_back({k + 2, static_cast<int>(finite.size()), k, RationalFunction::monomial(ExactScalar(1), k), e});
      }
      continue;
    }
    const int p = pts.index_of(b.point.location);
    for (int j = 1; j <= b.form_order; ++j) {
      if (j == 1 && !c.infinity_singular()) {
        if (p == 0) continue;
        PFElem e = pole_elem(p, 1, ExactScalar(1));
        add_pole(e, 0, 1, ExactScalar(-1));
        RationalFunction form = RationalFunction::pole(finite[static_cast<std::size_t>(p)], 1, ExactScalar(1)) -
                                RationalFunction::pole(finite[0], 1, ExactScalar(1));
        out.push_back({1, p, j, form, e});
        continue;
      }
      out.push_back({j, p, j, RationalFunction::pole(finite[static_cast<std::size_t>(p)], j, ExactScalar(1)),
                     pole_elem(p, j, ExactScalar(1))});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.point_rank != b.point_rank) return a.point_rank < b.point_rank;
    return a.sub < b.sub;
  });
  return out;
}

int pole_order_at(const RationalFunction& r, const Point& x) {
  if (x.at_infinity) {
    const RationalFunction beta = change_chart_infinity(r);
    return static_cast<int>(laurent_principal_part(beta, ExactScalar(0)).size());
  }
  return static_cast<int>(laurent_principal_part(r, x.location).size());
}

}  // namespace

LatticeBounds LatticeBounds::doubled(const Connection& c) const {
  LatticeBounds out = *this;
  for (auto& b : out.points) {
    const int m = local_data(c, b.point).pole_order;
    b.section_order *= 2;
    b.form_order = b.section_order + std::max(m, 1);
  }
  return out;
}

bool operator==(const LatticeBounds& a, const LatticeBounds& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    if (a.points[i].point != b.points[i].point || a.points[i].section_order != b.points[i].section_order ||
        a.points[i].form_order != b.points[i].form_order) {
      return false;
    }
  }
  return true;
}

LatticeBounds default_lattice_bounds(const Connection& c) {
  LatticeBounds out;
  for (const auto& d : singular_profile(c)) {
    PointBound b;
    b.point = d.point;
    b.section_order = d.pole_order + 2;
    if (d.pole_order <= 1 && d.residue.is_integer() && sgn(d.residue.re()) > 0) {
      b.section_order = std::max(b.section_order, static_cast<int>(d.residue.re().get_num().get_si()));
    }
    b.form_order = b.section_order + max_orders_local(d);
    out.points.push_back(b);
  }
  return out;
}

int h0_dimension(const Connection& c) {
  for (const auto& d : singular_profile(c)) {
    if (d.pole_order >= 2 || !d.residue.is_integer()) return 0;
  }
  return 1;
}

CohomologyBasis h1_basis_at(const Connection& c, const LatticeBounds& bounds) {
  auto reducer = std::make_shared<LatticeReducer>(c, bounds);
  CohomologyBasis out;
  out.bounds = bounds;
  out.h0_dim = reducer->insert_image(bounds);
  for (const auto& cand : form_candidates(c, bounds)) {
    if (reducer->insert_candidate(cand.elem)) out.basis_forms.push_back(cand.form);
  }
  out.h1_dim = static_cast<int>(out.basis_forms.size());
  out.reducer = std::move(reducer);
  return out;
}

CohomologyBasis h1_basis(const Connection& c) {
  const LatticeBounds b1 = default_lattice_bounds(c);
  CohomologyBasis first = h1_basis_at(c, b1);
  const LatticeBounds b2 = b1.doubled(c);
  CohomologyBasis second = h1_basis_at(c, b2);
  if (first.h0_dim == second.h0_dim && first.h1_dim == second.h1_dim) return first;
  CohomologyBasis third = h1_basis_at(c, b2.doubled(c));
  if (third.h0_dim == second.h0_dim && third.h1_dim == second.h1_dim) return second;
  throw Error(ErrorCode::LatticeTooSmall, "cohomology dimension not stable under lattice enlargement for " + c.label());
}

std::vector<ExactScalar> reduce_form(const Connection& c, const CohomologyBasis& basis, const RationalFunction& form) {
  if (basis.reducer) {
    if (auto coords = basis.reducer->coordinates(form)) return *coords;
  }
  LatticeBounds bounds = basis.bounds;
  for (auto& b : bounds.points) {
    const int m = std::max(local_data(c, b.point).pole_order, 1);
    const int need = pole_order_at(form, b.point);
    if (need > b.form_order) {
      b.section_order = std::max(b.section_order, need - m);
      b.form_order = b.section_order + m;
    }
  }
  // Poles outside D are rejected by the encoder below.
  LatticeReducer big(c, bounds);
  big.insert_image(bounds);
  for (const auto& f : basis.basis_forms) {
    if (!big.insert_candidate(f)) {
      throw Error(ErrorCode::LatticeTooSmall, "basis forms became dependent in an enlarged lattice");
    }
  }
  auto coords = big.coordinates(form);
  if (!coords) throw Error(ErrorCode::InvalidForm, "form " + form.to_string() + " does not fit the lattice");
  return *coords;
}

std::vector<ExactScalar> reduce_form(const Connection& c, const RationalFunction& form) {
  return reduce_form(c, h1_basis(c), form);
}

RationalFunction apply_connection(const Connection& c, const RationalFunction& g) {
  return differentiate(g) + c.alpha() * g;
}

std::vector<RationalFunction> lattice_section_basis(const Connection& c, const LatticeBounds& bounds) {
  std::vector<RationalFunction> out;
  for (const auto& b : bounds.points) {
    if (b.point.at_infinity) continue;
    for (int j = 1; j <= b.section_order; ++j) out.push_back(RationalFunction::pole(b.point.location, j, ExactScalar(1)));
  }
  const int top = c.infinity_singular() ? bounds.points.back().section_order : 0;
  for (int k = 0; k <= top; ++k) out.push_back(RationalFunction::monomial(ExactScalar(1), k));
  return out;
}

EulerCharacteristics euler_characteristics(int rank, int genus, const std::vector<std::vector<PoleBlock>>& blocks) {
  if (rank < 1) throw Error(ErrorCode::InvalidInput, "rank must be positive");
  if (blocks.empty()) throw Error(ErrorCode::InvalidInput, "D must be nonempty");
  EulerCharacteristics out;
  long weighted = 0;
  for (const auto& point : blocks) {
    long dims = 0;
    for (const auto& b : point) {
      if (b.pole_order < 0 || b.dim < 1) throw Error(ErrorCode::InvalidInput, "invalid pole block");
      if (b.pole_order == 0) out.non_reduced_divisor = true;
      dims += b.dim;
      weighted += static_cast<long>(b.pole_order) * b.dim;
    }
    if (dims != rank) {
      throw Error(ErrorCode::InconsistentRank,
                  "block dimensions sum to " + std::to_string(dims) + " instead of rank " + std::to_string(rank));
    }
  }
  const long n = static_cast<long>(blocks.size());
  out.chi_dr = -static_cast<long>(rank) * (2L * genus - 2) - weighted;
  out.chi_top = -static_cast<long>(rank) * (2L * genus - 2 + n);
  return out;
}

EulerCharacteristics euler_characteristics(const Connection& c) {
  std::vector<std::vector<PoleBlock>> blocks;
  for (const auto& d : singular_profile(c)) blocks.push_back({PoleBlock{d.pole_order, 1}});
  return euler_characteristics(1, 0, blocks);
}

}  // namespace ipd
