#include "ipd/io.hpp"

#include <fstream>
#include <sstream>

#include "ipd/error.hpp"

namespace ipd::io {

namespace {

Polynomial polynomial_from_json(const json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorCode::Parse, std::string(what) + " must be an array of scalar strings");
  std::vector<ExactScalar> coeffs;
  for (const auto& e : j) {
    if (e.is_string()) {
      coeffs.push_back(ExactScalar::parse(e.get<std::string>()));
    } else if (e.is_number_integer()) {
      coeffs.emplace_back(e.get<long>());
    } else {
      throw Error(ErrorCode::Parse, std::string(what) + " entries must be scalar strings");
    }
  }
  return Polynomial(std::move(coeffs));
}

json polynomial_to_json(const Polynomial& p) {
  json out = json::array();
  for (const auto& x : p.coeffs()) out.push_back(x.to_string());
  if (out.empty()) out.push_back("0");
  return out;
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw Error(ErrorCode::Parse, std::string("missing number '") + key + "'");
  return j.at(key).get<double>();
}

Piece piece_from_json(const json& j) {
  const std::string type = j.value("type", "");
  if (type == "line") return LinePiece{complex_from_json(j.at("from")), complex_from_json(j.at("to"))};
  if (type == "arc") {
    return ArcPiece{complex_from_json(j.at("center")), number(j, "radius"), number(j, "theta_from"), number(j, "theta_to")};
  }
  if (type == "ray") {
    RayPiece r;
    r.point = Point::parse(j.at("point").get<std::string>());
    r.direction = number(j, "direction");
    r.junction = complex_from_json(j.at("junction"));
    const std::string o = j.value("orientation", "from_point");
    if (o == "from_point") {
      r.orientation = RayOrientation::FromPoint;
    } else if (o == "to_point") {
      r.orientation = RayOrientation::ToPoint;
    } else {
      throw Error(ErrorCode::Parse, "ray orientation must be from_point or to_point");
    }
    return r;
  }
  throw Error(ErrorCode::Parse, "unknown piece type '" + type + "'");
}

json piece_to_json(const Connection& c, const Piece& piece) {
  if (const auto* l = std::get_if<LinePiece>(&piece)) {
    return {{"type", "line"}, {"from", complex_to_json(l->from)}, {"to", complex_to_json(l->to)}};
  }
  if (const auto* a = std::get_if<ArcPiece>(&piece)) {
    return {{"type", "arc"},
            {"center", complex_to_json(a->center)},
            {"radius", a->radius},
            {"theta_from", a->theta_from},
            {"theta_to", a->theta_to}};
  }
  const auto& r = std::get<RayPiece>(piece);
  json out = {{"type", "ray"},
              {"point", r.point.to_string()},
              {"direction", r.direction},
              {"junction", complex_to_json(r.junction)},
              {"orientation", r.orientation == RayOrientation::FromPoint ? "from_point" : "to_point"}};
  try {
    const auto g = stokes_geometry(local_data(c, r.point));
    out["sector"] = g.sector_of(r.direction);
  } catch (const Error&) {
    out["sector"] = nullptr;
  }
  return out;
}

}  // namespace

Connection connection_from_json(const json& j) {
  if (!j.is_object() || !j.contains("alpha")) throw Error(ErrorCode::Parse, "connection file needs an 'alpha' object");
  const auto& a = j.at("alpha");
  if (!a.is_object() || !a.contains("num")) throw Error(ErrorCode::Parse, "'alpha' needs 'num'");
  const Polynomial num = polynomial_from_json(a.at("num"), "alpha.num");
  const Polynomial den = a.contains("den") ? polynomial_from_json(a.at("den"), "alpha.den") : Polynomial(ExactScalar(1));
  if (den.is_zero()) throw Error(ErrorCode::InvalidInput, "alpha denominator is zero");
  std::string label = j.value("label", "");
  return canonicalize(RationalFunction(num, den), std::move(label));
}

json connection_to_json(const Connection& c) {
  return {{"label", c.label()},
          {"alpha", {{"num", polynomial_to_json(c.alpha().numerator())}, {"den", polynomial_to_json(c.alpha().denominator())}}}};
}

Connection read_connection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
  return connection_from_json(j);
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re")) return {j.at("re").get<double>(), j.value("im", 0.0)};
  throw Error(ErrorCode::Parse, "expected a complex number [re, im]");
}

json singular_points_to_json(const std::vector<SingularPointData>& profile) {
  json out = json::array();
  for (const auto& sp : profile) {
    json exp = json::array();
    for (const auto& t : sp.exponential_part) exp.push_back({{"power", t.power}, {"coeff", t.coeff.to_string()}});
    out.push_back({{"point", sp.point.to_string()},
                   {"pole_order", sp.pole_order},
                   {"residue", sp.residue.to_string()},
                   {"irregular", sp.irregular()},
                   {"exponential_part", exp}});
  }
  return out;
}

json stokes_to_json(const Connection& c) {
  json out = json::array();
  for (const auto& sp : singular_profile(c)) {
    if (!sp.irregular()) continue;
    const auto g = stokes_geometry(sp);
    json sectors = json::array();
    for (const auto& s : g.decay_sectors) sectors.push_back({s.start, s.end});
    out.push_back({{"point", sp.point.to_string()},
                   {"k", g.k},
                   {"leading", g.leading.to_string()},
                   {"stokes_rays", g.stokes_rays},
                   {"decay_sectors", sectors}});
  }
  return out;
}

json profile_to_json(const HomologyProfile& p) {
  json local = json::array();
  for (const auto& l : p.local) local.push_back({{"point", l.point.to_string()}, {"dim", l.dim}});
  return {{"h1_U", p.h1_u}, {"h0_U", p.h0_u}, {"local", local}, {"h1_XD", p.h1_xd}, {"h0_XD", p.h0_xd}};
}

json dims_to_json(const CohomologyBasis& basis, const EulerCharacteristics& chi) {
  json forms = json::array();
  for (const auto& f : basis.basis_forms) forms.push_back(f.to_string());
  return {{"h0", basis.h0_dim}, {"h1", basis.h1_dim}, {"chi_dr", chi.chi_dr}, {"chi_top", chi.chi_top}, {"basis", forms}};
}

json cycle_to_json(const Connection& c, const Cycle& cy) {
  json pieces = json::array();
  for (const auto& p : cy.pieces) pieces.push_back(piece_to_json(c, p));
  return {{"name", cy.name},
          {"kind", to_string(cy.kind)},
          {"orientation", cy.orientation},
          {"base", complex_to_json(cy.base)},
          {"base_args", cy.base_args},
          {"pieces", pieces}};
}

json cycles_to_json(const Connection& c, const std::vector<Cycle>& cycles) {
  json out = json::array();
  for (const auto& cy : cycles) out.push_back(cycle_to_json(c, cy));
  return out;
}

std::vector<Cycle> cycles_from_json(const Connection& c, const json& j) {
  const json& list = j.is_object() && j.contains("cycles") ? j.at("cycles") : j;
  if (!list.is_array()) throw Error(ErrorCode::Parse, "cycles file must hold a list of cycles");
  std::vector<Cycle> out;
  try {
    for (const auto& e : list) {
      std::vector<Piece> pieces;
      for (const auto& p : e.at("pieces")) pieces.push_back(piece_from_json(p));
      Cycle cy = build_custom(c, std::move(pieces), e.value("name", "custom"));
      if (e.contains("kind")) cy.kind = cycle_kind_from_string(e.at("kind").get<std::string>());
      cy.orientation = e.value("orientation", 1);
      if (e.contains("base")) cy.base = complex_from_json(e.at("base"));
      if (e.contains("base_args")) {
        cy.base_args = e.at("base_args").get<std::vector<double>>();
      } else {
        cy.base_args = principal_args(c, cy.base);
      }
      if (cy.base_args.size() != c.finite_points().size()) {
        throw Error(ErrorCode::Parse, "base_args needs one entry per finite singular point");
      }
      out.push_back(std::move(cy));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("malformed cycle: ") + e.what());
  }
  return out;
}

json period_value_to_json(const PeriodValue& v) {
  return {{"value", complex_to_json(v.value)},
          {"abs_error", v.abs_error},
          {"tail_bound", v.tail_bound},
          {"scale", v.scale},
          {"segments_used", v.segments_used},
          {"converged", v.converged}};
}

json periods_to_json(const PeriodMatrix& m, const std::vector<Cycle>& cycles, const std::vector<RationalFunction>& forms) {
  json rows = json::array();
  for (const auto& row : m.entries) {
    json r = json::array();
    for (const auto& v : row) r.push_back(period_value_to_json(v));
    rows.push_back(r);
  }
  json names = json::array();
  for (const auto& cy : cycles) names.push_back(cy.name);
  json fs = json::array();
  for (const auto& f : forms) fs.push_back(f.to_string());
  json out = {{"cycles", names}, {"forms", fs}, {"entries", rows}, {"rank", m.rank},
              {"equilibrated_rank", m.equilibrated_rank}, {"scale", m.scale},
              {"converged", m.converged}};
  out["determinant"] = m.determinant ? complex_to_json(*m.determinant) : json(nullptr);
  return out;
}

std::string periods_to_csv(const PeriodMatrix& m, const std::vector<Cycle>& cycles,
                           const std::vector<RationalFunction>& forms) {
  std::ostringstream out;
  out.precision(17);
  out << "cycle,form,re,im,abs_error,tail_bound,converged\n";
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    for (std::size_t j = 0; j < m.entries[i].size(); ++j) {
      const auto& v = m.entries[i][j];
      out << cycles[i].name << ",\"" << forms[j].to_string() << "\"," << v.value.real() << ',' << v.value.imag() << ','
          << v.abs_error << ',' << v.tail_bound << ',' << (v.converged ? 1 : 0) << '\n';
    }
  }
  return out.str();
}

}  // namespace ipd::io
