#include "ipd/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "ipd/error.hpp"
#include "ipd/homology.hpp"

namespace ipd {

namespace {

double wrap_2pi(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

double principal(double x) { return std::remainder(x, kTwoPi); }

double arg_change(cplx from, cplx to, cplx z0) { return std::arg((to - z0) / (from - z0)); }

double distance_to_segment(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0) return std::abs(p - a);
  const double t = std::clamp(std::real((p - a) * std::conj(d)) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double distance_to_halfline(cplx p, cplx a, cplx dir) {
  const double t = std::max(0.0, std::real((p - a) * std::conj(dir)));
  return std::abs(p - (a + t * dir));
}

double distance_to_arc(cplx p, const ArcPiece& arc) {
  const double sweep = arc.theta_to - arc.theta_from;
  if (std::abs(sweep) >= kTwoPi - 1e-12) return std::abs(std::abs(p - arc.center) - arc.radius);
  const cplx rel = p - arc.center;
  if (std::abs(rel) > 0) {
    const double lo = std::min(arc.theta_from, arc.theta_to);
    const double off = wrap_2pi(std::arg(rel) - lo);
    if (off <= std::abs(sweep)) return std::abs(std::abs(rel) - arc.radius);
  }
  return std::min(std::abs(p - piece_start(Piece{arc})), std::abs(p - piece_end(Piece{arc})));
}

cplx polar(double r, double theta) { return std::polar(r, theta); }

bool near(cplx a, cplx b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

}  // namespace

// ------------------------------------------------------------------ sectors

bool DecaySector::contains(double theta, double margin) const {
  const double d = wrap_2pi(theta - start);
  return d > margin && d < (end - start) - margin;
}

int StokesGeometry::sector_of(double theta, double margin) const {
  for (std::size_t i = 0; i < decay_sectors.size(); ++i) {
    if (decay_sectors[i].contains(theta, margin)) return static_cast<int>(i);
  }
  return -1;
}

StokesGeometry stokes_geometry(const Point& point, const ExactScalar& leading, int k) {
  if (k < 1 || leading.is_zero()) throw Error(ErrorCode::NotIrregular, "no exponential part at " + point.to_string());
  StokesGeometry g;
  g.point = point;
  g.leading = leading;
  g.k = k;
  const double arg_a = std::arg(leading.to_complex());
  const double sigma = point.at_infinity ? -1.0 : 1.0;
  for (int n = 0; n < 2 * k; ++n) {
    g.stokes_rays.push_back(wrap_2pi(sigma * (arg_a - kPi / 2 - n * kPi) / k));
  }
  std::sort(g.stokes_rays.begin(), g.stokes_rays.end());
  for (std::size_t i = 0; i < g.stokes_rays.size(); ++i) {
    const double lo = g.stokes_rays[i];
    const double hi = i + 1 < g.stokes_rays.size() ? g.stokes_rays[i + 1] : g.stokes_rays[0] + kTwoPi;
    if (std::cos(arg_a - sigma * k * 0.5 * (lo + hi)) < 0) g.decay_sectors.push_back({lo, lo + kPi / k});
  }
  std::sort(g.decay_sectors.begin(), g.decay_sectors.end(),
            [](const DecaySector& a, const DecaySector& b) { return a.start < b.start; });
  return g;
}

StokesGeometry stokes_geometry(const SingularPointData& sp) {
  if (sp.pole_order <= 1) {
    throw Error(ErrorCode::NotIrregular, "pole order " + std::to_string(sp.pole_order) + " at " + sp.point.to_string());
  }
  return stokes_geometry(sp.point, sp.exponential_part.front().coeff, sp.pole_order - 1);
}

double leading_decay_rate(const StokesGeometry& g, double theta) {
  const cplx a = g.leading.to_complex();
  const double sigma = g.point.at_infinity ? -1.0 : 1.0;
  return std::abs(a) * std::cos(std::arg(a) - sigma * g.k * theta);
}

// ------------------------------------------------------------------- pieces

cplx piece_start(const Piece& p) {
  return std::visit(
      [](const auto& x) -> cplx {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LinePiece>) {
          return x.from;
        } else if constexpr (std::is_same_v<T, ArcPiece>) {
          return x.center + polar(x.radius, x.theta_from);
        } else {
          if (x.orientation == RayOrientation::ToPoint) return x.junction;
          if (x.point.at_infinity) return {std::numeric_limits<double>::infinity(), 0};
          return x.point.to_complex();
        }
      },
      p);
}

cplx piece_end(const Piece& p) {
  return std::visit(
      [](const auto& x) -> cplx {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LinePiece>) {
          return x.to;
        } else if constexpr (std::is_same_v<T, ArcPiece>) {
          return x.center + polar(x.radius, x.theta_to);
        } else {
          if (x.orientation == RayOrientation::FromPoint) return x.junction;
          if (x.point.at_infinity) return {std::numeric_limits<double>::infinity(), 0};
          return x.point.to_complex();
        }
      },
      p);
}

Piece reversed(const Piece& p) {
  return std::visit(
      [](const auto& x) -> Piece {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, LinePiece>) {
          return LinePiece{x.to, x.from};
        } else if constexpr (std::is_same_v<T, ArcPiece>) {
          return ArcPiece{x.center, x.radius, x.theta_to, x.theta_from};
        } else {
          RayPiece r = x;
          r.orientation = x.orientation == RayOrientation::FromPoint ? RayOrientation::ToPoint : RayOrientation::FromPoint;
          return r;
        }
      },
      p);
}

std::string to_string(CycleKind kind) {
  switch (kind) {
    case CycleKind::RayPair: return "ray_pair";
    case CycleKind::Circle: return "circle";
    case CycleKind::Hankel: return "hankel";
    case CycleKind::Pochhammer: return "pochhammer";
    case CycleKind::Custom: return "custom";
  }
  return "custom";
}

CycleKind cycle_kind_from_string(std::string_view text) {
  if (text == "ray_pair") return CycleKind::RayPair;
  if (text == "circle") return CycleKind::Circle;
  if (text == "hankel") return CycleKind::Hankel;
  if (text == "pochhammer") return CycleKind::Pochhammer;
  if (text == "custom") return CycleKind::Custom;
  throw Error(ErrorCode::Parse, "unknown cycle kind '" + std::string(text) + "'");
}

bool Cycle::closed() const {
  if (pieces.empty()) return false;
  for (const auto& p : pieces) {
    if (std::holds_alternative<RayPiece>(p)) return false;
  }
  return near(piece_start(pieces.front()), piece_end(pieces.back()));
}

cplx cycle_base(const std::vector<Piece>& pieces) {
  if (pieces.empty()) return {};
  if (const auto* r = std::get_if<RayPiece>(&pieces.front()); r && r->orientation == RayOrientation::FromPoint) {
    return r->junction;
  }
  return piece_start(pieces.front());
}

std::vector<double> principal_args(const Connection& c, cplx z) {
  std::vector<double> out;
  for (const auto& a : c.finite_points()) out.push_back(std::arg(z - a.to_complex()));
  return out;
}

double piece_distance(const Piece& piece, cplx z) {
  if (const auto* l = std::get_if<LinePiece>(&piece)) return distance_to_segment(z, l->from, l->to);
  if (const auto* a = std::get_if<ArcPiece>(&piece)) return distance_to_arc(z, *a);
  const auto& r = std::get<RayPiece>(piece);
  if (r.point.at_infinity) return distance_to_halfline(z, r.junction, polar(1.0, r.direction));
  if (near(r.point.to_complex(), z)) return std::numeric_limits<double>::infinity();
  return distance_to_segment(z, r.point.to_complex(), r.junction);
}

double winding_number(const std::vector<Piece>& pieces, cplx z0) {
  double total = 0;
  for (const auto& p : pieces) {
    if (const auto* l = std::get_if<LinePiece>(&p)) {
      total += arg_change(l->from, l->to, z0);
    } else if (const auto* a = std::get_if<ArcPiece>(&p)) {
      if (near(a->center, z0)) {
        total += a->theta_to - a->theta_from;
        continue;
      }
      const double sweep = a->theta_to - a->theta_from;
      const double gap = std::max(std::abs(std::abs(z0 - a->center) - a->radius), 1e-12);
      const int steps = std::clamp(static_cast<int>(std::ceil(std::abs(sweep) * a->radius / gap * 4)), 16, 200000);
      cplx prev = a->center + polar(a->radius, a->theta_from);
      for (int s = 1; s <= steps; ++s) {
        const cplx cur = a->center + polar(a->radius, a->theta_from + sweep * s / steps);
        total += arg_change(prev, cur, z0);
        prev = cur;
      }
    } else {
      const auto& r = std::get<RayPiece>(p);
      double delta = 0;
      if (r.point.at_infinity) {
        delta = principal(std::arg(r.junction - z0) - r.direction);  // from infinity to the junction
      } else if (!near(r.point.to_complex(), z0)) {
        delta = arg_change(r.point.to_complex(), r.junction, z0);
      }
      total += r.orientation == RayOrientation::FromPoint ? delta : -delta;
    }
  }
  return total / kTwoPi;
}

// ----------------------------------------------------------------- geometry

CycleGeometry::CycleGeometry(const Connection& c) {
  for (const auto& a : c.finite_points()) finite_.push_back(a.to_complex());
  double max_abs = 0;
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < finite_.size(); ++j) {
      if (i != j) dmin = std::min(dmin, std::abs(finite_[i] - finite_[j]));
    }
    clearance_.push_back(std::min(0.5, 0.4 * dmin));
    max_abs = std::max(max_abs, std::abs(finite_[i]));
  }
  infinity_radius_ = 2 * max_abs + 2;
}

std::optional<std::size_t> CycleGeometry::index_of(cplx x) const {
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    if (near(finite_[i], x)) return i;
  }
  return std::nullopt;
}

double CycleGeometry::clearance_of(cplx x) const {
  auto i = index_of(x);
  if (!i) throw Error(ErrorCode::InvalidAnchor, "not a finite singular point");
  return clearance_[*i];
}

double CycleGeometry::distance_to_points(cplx z, std::optional<std::size_t> skip) const {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < finite_.size(); ++i) {
    if (skip && *skip == i) continue;
    d = std::min(d, std::abs(z - finite_[i]));
  }
  return d;
}

std::vector<Piece> CycleGeometry::route(cplx a, cplx b, const std::vector<std::size_t>& ignore) const {
  struct Detour {
    double t1, t2;
    std::size_t disk;
  };
  const cplx d = b - a;
  const double dd = std::norm(d);
  std::vector<Detour> detours;
  if (dd > 0) {
    for (std::size_t i = 0; i < finite_.size(); ++i) {
      if (std::find(ignore.begin(), ignore.end(), i) != ignore.end()) continue;
      const double c = clearance_[i];
      if (std::abs(a - finite_[i]) < c * (1 - 1e-9) || std::abs(b - finite_[i]) < c * (1 - 1e-9)) continue;
      const cplx f = a - finite_[i];
      const double bq = 2 * std::real(std::conj(f) * d);
      const double cq = std::norm(f) - c * c;
      const double disc = bq * bq - 4 * dd * cq;
      if (disc <= 0) continue;
      const double t1 = std::max(0.0, (-bq - std::sqrt(disc)) / (2 * dd));
      const double t2 = std::min(1.0, (-bq + std::sqrt(disc)) / (2 * dd));
      if (t2 - t1 < 1e-12) continue;
      detours.push_back({t1, t2, i});
    }
  }
  std::sort(detours.begin(), detours.end(), [](const Detour& x, const Detour& y) { return x.t1 < y.t1; });
  std::vector<Piece> out;
  cplx cur = a;
  for (const auto& det : detours) {
    const cplx x = finite_[det.disk];
    const double c = clearance_[det.disk];
    const cplx p1 = a + det.t1 * d;
    const cplx p2 = a + det.t2 * d;
    if (std::abs(p1 - cur) > 1e-14) out.push_back(LinePiece{cur, p1});
    const double phi1 = std::arg(p1 - x);
    double sweep = principal(std::arg(p2 - x) - phi1);
    const double cross = std::imag(std::conj(d) * (x - a));
    if (std::abs(cross) <= 1e-12 * std::sqrt(dd) * std::abs(x - a)) sweep = kPi;
    out.push_back(ArcPiece{x, c, phi1, phi1 + sweep});
    cur = x + polar(c, phi1 + sweep);
  }
  if (std::abs(b - cur) > 1e-14) out.push_back(LinePiece{cur, b});
  return out;
}

// ----------------------------------------------------------------- builders

namespace {

SingularPointData require_irregular_anchor(const Connection& c, const Anchor& anchor) {
  const auto& set = c.singular_set();
  if (std::find(set.begin(), set.end(), anchor.point) == set.end()) {
    throw Error(ErrorCode::InvalidAnchor, anchor.point.to_string() + " is not a singular point");
  }
  auto sp = local_data(c, anchor.point);
  if (!sp.irregular()) {
    throw Error(ErrorCode::InvalidAnchor, "no rapid decay at " + anchor.point.to_string() + " (pole order " +
                                              std::to_string(sp.pole_order) + ")");
  }
  if (stokes_geometry(sp).sector_of(anchor.direction) < 0) {
    throw Error(ErrorCode::InvalidAnchor,
                "direction " + std::to_string(anchor.direction) + " is not inside a decay sector at " + anchor.point.to_string());
  }
  return sp;
}

cplx anchor_junction(const CycleGeometry& geo, const Anchor& anchor) {
  if (anchor.point.at_infinity) return polar(geo.infinity_radius(), anchor.direction);
  const cplx x = anchor.point.to_complex();
  return x + polar(geo.clearance_of(x), anchor.direction);
}

Cycle finish(const Connection& c, std::string name, CycleKind kind, std::vector<Piece> pieces) {
  Cycle cy;
  cy.name = std::move(name);
  cy.kind = kind;
  cy.pieces = std::move(pieces);
  cy.base = cycle_base(cy.pieces);
  cy.base_args = principal_args(c, cy.base);
  return cy;
}

void append(std::vector<Piece>& out, const std::vector<Piece>& more) { out.insert(out.end(), more.begin(), more.end()); }

std::vector<Piece> reversed_path(const std::vector<Piece>& path) {
  std::vector<Piece> out;
  for (auto it = path.rbegin(); it != path.rend(); ++it) out.push_back(reversed(*it));
  return out;
}

/// Path from `start` to the point at distance r from x, followed by a full
/// counterclockwise loop and the way back.
std::vector<Piece> lasso(const CycleGeometry& geo, cplx start, cplx x, double r) {
  const double psi = std::arg(start - x);
  const auto path = geo.route(start, x + polar(r, psi));
  std::vector<Piece> out = path;
  out.push_back(ArcPiece{x, r, psi, psi + kTwoPi});
  append(out, reversed_path(path));
  return out;
}

}  // namespace

Cycle build_ray_pair(const Connection& c, const Anchor& from, const Anchor& to) {
  require_irregular_anchor(c, from);
  require_irregular_anchor(c, to);
  const CycleGeometry geo(c);
  const cplx j1 = anchor_junction(geo, from);
  const cplx j2 = anchor_junction(geo, to);
  std::vector<Piece> pieces{RayPiece{from.point, from.direction, j1, RayOrientation::FromPoint}};
  if (from.point == to.point && !from.point.at_infinity) {
    const double sweep = wrap_2pi(to.direction - from.direction);
    pieces.push_back(ArcPiece{from.point.to_complex(), geo.clearance_of(from.point.to_complex()), from.direction,
                              from.direction + sweep});
  } else {
    append(pieces, geo.route(j1, j2));
  }
  pieces.push_back(RayPiece{to.point, to.direction, j2, RayOrientation::ToPoint});
  return finish(c, "ray_pair(" + from.point.to_string() + "->" + to.point.to_string() + ")", CycleKind::RayPair,
                std::move(pieces));
}

Cycle build_circle(const Connection& c, const ExactScalar& center, std::optional<double> radius) {
  const CycleGeometry geo(c);
  const cplx x = center.to_complex();
  const auto idx = geo.index_of(x);
  const double dmin = geo.distance_to_points(x, idx);
  const double r = radius.value_or(std::min(1.0, 0.4 * dmin));
  if (!(r > 0)) throw Error(ErrorCode::InvalidAnchor, "circle radius must be positive");
  return finish(c, "circle(" + center.to_string() + ")", CycleKind::Circle, {ArcPiece{x, r, 0.0, kTwoPi}});
}

Cycle build_hankel(const Connection& c, const ExactScalar& around, const Anchor& anchor, double radius) {
  require_irregular_anchor(c, anchor);
  const CycleGeometry geo(c);
  const cplx x = around.to_complex();
  const auto idx = geo.index_of(x);
  if (!idx) throw Error(ErrorCode::InvalidAnchor, around.to_string() + " is not a finite singular point");
  if (!(radius > 0)) throw Error(ErrorCode::InvalidAnchor, "hankel radius must be positive");
  const std::string name = "hankel(" + around.to_string() + "@" + anchor.point.to_string() + ")";
  std::vector<Piece> pieces;

  if (!anchor.point.at_infinity && anchor.point.location == around) {
    const cplx j = x + polar(radius, anchor.direction);
    pieces = {RayPiece{anchor.point, anchor.direction, j, RayOrientation::FromPoint},
              ArcPiece{x, radius, anchor.direction, anchor.direction + kTwoPi},
              RayPiece{anchor.point, anchor.direction, j, RayOrientation::ToPoint}};
    return finish(c, name, CycleKind::Hankel, std::move(pieces));
  }

  if (anchor.point.at_infinity) {
    const cplx dir = polar(1.0, anchor.direction);
    const cplx j = x + radius * dir;
    bool clear = true;
    for (std::size_t i = 0; i < geo.finite_points().size(); ++i) {
      if (i == *idx) continue;
      if (distance_to_halfline(geo.finite_points()[i], j, dir) < geo.clearance(i)) clear = false;
    }
    if (clear) {
      pieces = {RayPiece{anchor.point, anchor.direction, j, RayOrientation::FromPoint},
                ArcPiece{x, radius, anchor.direction, anchor.direction + kTwoPi},
                RayPiece{anchor.point, anchor.direction, j, RayOrientation::ToPoint}};
      return finish(c, name, CycleKind::Hankel, std::move(pieces));
    }
  }

  const cplx j = anchor_junction(geo, anchor);
  pieces.push_back(RayPiece{anchor.point, anchor.direction, j, RayOrientation::FromPoint});
  append(pieces, lasso(geo, j, x, radius));
  pieces.push_back(RayPiece{anchor.point, anchor.direction, j, RayOrientation::ToPoint});
  return finish(c, name, CycleKind::Hankel, std::move(pieces));
}

Cycle build_pochhammer(const Connection& c, const ExactScalar& first, const ExactScalar& second) {
  const CycleGeometry geo(c);
  const cplx x0 = first.to_complex();
  const cplx x1 = second.to_complex();
  if (!geo.index_of(x0) || !geo.index_of(x1) || first == second) {
    throw Error(ErrorCode::InvalidAnchor, "pochhammer loop needs two distinct finite singular points");
  }
  const double c0 = geo.clearance_of(x0);
  const double c1 = geo.clearance_of(x1);
  const double psi = std::arg(x1 - x0);
  const cplx base = x0 + polar(c0, psi);
  const auto path = geo.route(base, x1 + polar(c1, psi + kPi));
  const auto back = reversed_path(path);
  const Piece loop0 = ArcPiece{x0, c0, psi, psi + kTwoPi};
  const Piece loop1 = ArcPiece{x1, c1, psi + kPi, psi + kPi + kTwoPi};
  std::vector<Piece> pieces{loop0};
  append(pieces, path);
  pieces.push_back(loop1);
  append(pieces, back);
  pieces.push_back(reversed(loop0));
  append(pieces, path);
  pieces.push_back(reversed(loop1));
  append(pieces, back);
  return finish(c, "pochhammer(" + first.to_string() + "," + second.to_string() + ")", CycleKind::Pochhammer,
                std::move(pieces));
}

Cycle build_custom(const Connection& c, std::vector<Piece> pieces, std::string name) {
  return finish(c, std::move(name), CycleKind::Custom, std::move(pieces));
}

// --------------------------------------------------------------- validation

ValidityReport validate_cycle(const Connection& c, const Cycle& cy, double delta) {
  auto fail = [](std::string why) { return ValidityReport{false, std::move(why)}; };
  if (cy.pieces.empty()) return fail("empty cycle");
  const std::size_t n = cy.pieces.size();

  for (std::size_t i = 0; i < n; ++i) {
    const auto* r = std::get_if<RayPiece>(&cy.pieces[i]);
    if (!r) continue;
    const bool leading = i == 0 && r->orientation == RayOrientation::FromPoint;
    const bool trailing = i + 1 == n && r->orientation == RayOrientation::ToPoint;
    if (!leading && !trailing) return fail("decay ray in the interior of piece " + std::to_string(i));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!near(piece_end(cy.pieces[i]), piece_start(cy.pieces[i + 1]))) {
      return fail("pieces " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not share an endpoint");
    }
  }

  const bool open_start = std::holds_alternative<RayPiece>(cy.pieces.front());
  const bool open_end = std::holds_alternative<RayPiece>(cy.pieces.back()) &&
                        std::get<RayPiece>(cy.pieces.back()).orientation == RayOrientation::ToPoint;
  if (open_start != open_end) return fail("open end is not a decay ray");
  if (!open_start && !near(piece_start(cy.pieces.front()), piece_end(cy.pieces.back()))) {
    return fail("open end at a nonsingular point");
  }

  const auto& set = c.singular_set();
  for (const auto& piece : cy.pieces) {
    const auto* r = std::get_if<RayPiece>(&piece);
    if (!r) continue;
    if (std::find(set.begin(), set.end(), r->point) == set.end()) {
      return fail("decay ray ends at " + r->point.to_string() + ", which is not in D");
    }
    const auto sp = local_data(c, r->point);
    if (!sp.irregular()) {
      return fail("no rapid decay at " + r->point.to_string() + " (pole order " + std::to_string(sp.pole_order) + ")");
    }
    if (stokes_geometry(sp).sector_of(r->direction) < 0) {
      return fail("ray direction " + std::to_string(r->direction) + " at " + r->point.to_string() +
                  " is not inside a decay sector");
    }
    if (!r->point.at_infinity) {
      const cplx rel = r->junction - r->point.to_complex();
      if (std::abs(rel) == 0 || std::abs(principal(std::arg(rel) - r->direction)) > 1e-9) {
        return fail("ray junction does not lie on the ray direction");
      }
    }
  }

  const CycleGeometry geo(c);
  const auto& pts = geo.finite_points();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (piece_distance(cy.pieces[i], pts[j]) < delta) {
        return fail("piece " + std::to_string(i) + " passes within " + std::to_string(delta) + " of " +
                    c.finite_points()[j].to_string());
      }
    }
  }

  if (!open_start) {
    ExactScalar defect;
    const auto finite = c.finite_points();
    for (std::size_t j = 0; j < finite.size(); ++j) {
      const double w = winding_number(cy.pieces, pts[j]);
      const long wi = std::lround(w);
      if (std::abs(w - static_cast<double>(wi)) > 1e-6) return fail("closed path has non-integral winding number");
      defect += local_data(c, Point::finite(finite[j])).residue * ExactScalar(wi);
    }
    if (!defect.is_integer()) return fail("closed loop with nontrivial monodromy (branch defect " + defect.to_string() + ")");
  }
  if (cy.base_args.size() != pts.size()) return fail("branch state does not match the singular points");
  return {};
}

// ------------------------------------------------------------ candidate set

std::vector<Cycle> candidate_basis(const Connection& c) {
  const auto profile = rd_profile(c);
  const auto points = singular_profile(c);
  const auto mono = monodromy(c, Side::Dual);
  const CycleGeometry geo(c);

  struct Irregular {
    Point point;
    std::vector<double> valleys;
  };
  std::vector<Irregular> irregular;
  for (const auto& sp : points) {
    if (!sp.irregular()) continue;
    Irregular irr{sp.point, {}};
    for (const auto& s : stokes_geometry(sp).decay_sectors) irr.valleys.push_back(s.bisector());
    irregular.push_back(std::move(irr));
  }
  auto trivial_at = [&](const Point& p) {
    for (const auto& e : mono.entries) {
      if (e.point == p) return e.trivial;
    }
    return true;
  };

  std::vector<Point> punctures;
  for (const auto& p : c.singular_set()) punctures.push_back(p);
  punctures.pop_back();  // infinity when present, otherwise the last finite point

  std::vector<Cycle> out;
  auto add = [&](Cycle cy, std::string name) {
    cy.name = std::move(name);
    out.push_back(std::move(cy));
  };

  if (!irregular.empty()) {
    for (const auto& irr : irregular) {
      for (std::size_t i = 0; i + 1 < irr.valleys.size(); ++i) {
        add(build_ray_pair(c, {irr.point, irr.valleys[i]}, {irr.point, irr.valleys[i + 1]}),
            "adjacent(" + irr.point.to_string() + ":" + std::to_string(i) + "," + std::to_string(i + 1) + ")");
      }
    }
    for (std::size_t i = 0; i + 1 < irregular.size(); ++i) {
      add(build_ray_pair(c, {irregular[i].point, irregular[i].valleys[0]},
                         {irregular[i + 1].point, irregular[i + 1].valleys[0]}),
          "cross(" + irregular[i].point.to_string() + "," + irregular[i + 1].point.to_string() + ")");
    }
    const Anchor anchor{irregular[0].point, irregular[0].valleys[0]};
    for (const auto& p : punctures) {
      if (trivial_at(p)) {
        add(build_circle(c, p.location), "circle(" + p.to_string() + ")");
      } else {
        const bool irr = local_data(c, p).irregular();
        const double r = irr ? geo.clearance_of(p.to_complex()) : kDefaultHankelRadius;
        add(build_hankel(c, p.location, anchor, r), "hankel(" + p.to_string() + "@" + anchor.point.to_string() + ")");
      }
    }
  } else if (mono.all_trivial()) {
    for (const auto& p : punctures) add(build_circle(c, p.location), "circle(" + p.to_string() + ")");
  } else {
    std::vector<Point> finite;
    for (const auto& p : c.singular_set()) {
      if (!p.at_infinity) finite.push_back(p);
    }
    auto first = std::find_if(finite.begin(), finite.end(), [&](const Point& p) { return !trivial_at(p); });
    const Point x0 = *first;
    std::vector<Point> others;
    for (const auto& p : finite) {
      if (p != x0) others.push_back(p);
    }
    if (!c.infinity_singular() && !others.empty()) others.pop_back();
    for (const auto& p : others) {
      if (trivial_at(p)) {
        add(build_circle(c, p.location), "circle(" + p.to_string() + ")");
      } else {
        add(build_pochhammer(c, x0.location, p.location),
            "pochhammer(" + x0.to_string() + "," + p.to_string() + ")");
      }
    }
  }

  for (const auto& cy : out) {
    const auto report = validate_cycle(c, cy);
    if (!report.valid) throw Error(ErrorCode::BasisNotFound, cy.name + ": " + report.reason);
  }
  if (static_cast<int>(out.size()) != profile.h1_xd) {
    throw Error(ErrorCode::BasisNotFound, "found " + std::to_string(out.size()) + " candidate cycles, need " +
                                              std::to_string(profile.h1_xd));
  }
  return out;
}

// -------------------------------------------------------------- perturbation

Cycle perturb_waypoints(const Connection& c, const Cycle& cy, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto jitter = [&] { return polar(amplitude * unit(rng), kTwoPi * unit(rng)); };

  std::vector<Piece> pieces;
  cplx new_base = cy.base;
  for (std::size_t i = 0; i < cy.pieces.size(); ++i) {
    const auto& piece = cy.pieces[i];
    if (const auto* l = std::get_if<LinePiece>(&piece)) {
      const cplx mid = 0.5 * (l->from + l->to) + jitter();
      pieces.push_back(LinePiece{l->from, mid});
      pieces.push_back(LinePiece{mid, l->to});
    } else if (const auto* r = std::get_if<RayPiece>(&piece)) {
      RayPiece moved = *r;
      if (r->point.at_infinity) {
        moved.junction = r->junction + jitter();
      } else {
        const cplx x = r->point.to_complex();
        const double rho = std::abs(r->junction - x);
        const double eta = (2 * unit(rng) - 1) * amplitude / rho;
        moved.direction = r->direction + eta;
        moved.junction = x + polar(rho, moved.direction);
      }
      if (r->orientation == RayOrientation::FromPoint) {
        pieces.push_back(moved);
        pieces.push_back(LinePiece{moved.junction, r->junction});
        if (i == 0) new_base = moved.junction;
      } else {
        pieces.push_back(LinePiece{r->junction, moved.junction});
        pieces.push_back(moved);
      }
    } else {
      pieces.push_back(piece);
    }
  }
  Cycle out = cy;
  out.name = cy.name + "~";
  out.pieces = std::move(pieces);
  out.base = new_base;
  const auto finite = c.finite_points();
  for (std::size_t j = 0; j < finite.size() && j < out.base_args.size(); ++j) {
    out.base_args[j] += arg_change(cy.base, new_base, finite[j].to_complex());
  }
  return out;
}

}  // namespace ipd
