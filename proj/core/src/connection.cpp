#include "ipd/connection.hpp"

#include <algorithm>

#include "ipd/error.hpp"

namespace ipd {

std::string Point::to_string() const { return at_infinity ? "inf" : location.to_string(); }

Point Point::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  return finite(ExactScalar::parse(text));
}

bool point_less(const Point& a, const Point& b) {
  if (a.at_infinity != b.at_infinity) return b.at_infinity;
  if (a.at_infinity) return false;
  return canonical_less(a.location, b.location);
}

std::vector<ExactScalar> Connection::finite_points() const {
  std::vector<ExactScalar> out;
  for (const auto& p : singular_set_) {
    if (!p.at_infinity) out.push_back(p.location);
  }
  return out;
}

Connection canonicalize(const RationalFunction& raw_alpha, std::string label) {
  Connection c;
  c.alpha_ = raw_alpha;
  c.label_ = std::move(label);
  c.pf_ = partial_fractions(raw_alpha);
  for (const auto& x : c.pf_.locations()) c.singular_set_.push_back(Point::finite(x));
  const RationalFunction beta = change_chart_infinity(raw_alpha);
  if (!laurent_principal_part(beta, ExactScalar(0)).empty() || c.singular_set_.empty()) {
    c.singular_set_.push_back(Point::infinity());
  }
  return c;
}

SingularPointData local_data(const Connection& c, const Point& x) {
  SingularPointData d;
  d.point = x;
  if (x.at_infinity) {
    d.principal_part = laurent_principal_part(change_chart_infinity(c.alpha()), ExactScalar(0));
  } else {
    d.principal_part = laurent_principal_part(c.alpha(), x.location);
  }
  d.pole_order = static_cast<int>(d.principal_part.size());
  if (d.pole_order >= 1) d.residue = d.principal_part[0];
  for (int j = d.pole_order; j >= 2; --j) {
    const ExactScalar& cj = d.principal_part[static_cast<std::size_t>(j - 1)];
    if (cj.is_zero()) continue;
    d.exponential_part.push_back({1 - j, cj / ExactScalar(1 - j)});
  }
  return d;
}

std::vector<SingularPointData> singular_profile(const Connection& c) {
  std::vector<SingularPointData> out;
  for (const auto& x : c.singular_set()) out.push_back(local_data(c, x));
  return out;
}

Connection dualize(const Connection& c) {
  static const std::string suffix = "^dual";
  std::string label = c.label();
  if (label.size() >= suffix.size() && label.compare(label.size() - suffix.size(), suffix.size(), suffix) == 0) {
    label.resize(label.size() - suffix.size());
  } else {
    label += suffix;
  }
  return canonicalize(-c.alpha(), label);
}

GlobalAntiderivative global_antiderivative(const Connection& c) {
  const auto& pf = c.alpha_partial_fractions();
  GlobalAntiderivative g;
  std::vector<ExactScalar> integral(static_cast<std::size_t>(pf.polynomial_part.degree() + 2));
  for (int k = 0; k <= pf.polynomial_part.degree(); ++k) {
    integral[static_cast<std::size_t>(k + 1)] = pf.polynomial_part.coeff(k) / ExactScalar(k + 1);
  }
  RationalFunction f{Polynomial(std::move(integral))};
  for (const auto& t : pf.poles) {
    if (t.order == 1) {
      g.log_terms.push_back({t.location, t.coeff});
    } else {
      f = f + RationalFunction::pole(t.location, t.order - 1, t.coeff / ExactScalar(1 - t.order));
    }
  }
  g.f_global = f;
  return g;
}

Connection trivial_connection() { return canonicalize(RationalFunction(), "trivial"); }

Connection gamma_connection(const ExactScalar& s) {
  return canonicalize(RationalFunction(-1) + RationalFunction::monomial(s, -1), "gamma(s=" + s.to_string() + ")");
}

Connection gaussian_connection() {
  return canonicalize(RationalFunction::monomial(ExactScalar(-2), 1), "gaussian");
}

Connection bessel_connection(const ExactScalar& z) {
  const ExactScalar half = z / ExactScalar(2);
  return canonicalize(RationalFunction(half) + RationalFunction::monomial(half, -2), "bessel(z=" + z.to_string() + ")");
}

}  // namespace ipd
