#include "ipd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "ipd/derham.hpp"
#include "ipd/error.hpp"
#include "ipd/homology.hpp"
#include "ipd/io.hpp"
#include "ipd/oracles.hpp"
#include "ipd/periods.hpp"

#ifndef IPD_VERSION
#define IPD_VERSION "0.0.0"
#endif

namespace ipd {

using nlohmann::json;

namespace {

constexpr cplx kI{0.0, 1.0};

json value_json(cplx z) {
  if (z.imag() == 0) return z.real();
  return io::complex_to_json(z);
}

class SuiteBuilder {
 public:
  explicit SuiteBuilder(const SuiteOptions& opts) : opts_(opts) {}

  void close(const std::string& id, cplx expected, cplx computed, double rel_tol) {
    Check c{id, value_json(expected), value_json(computed)};
    c.abs_err = std::abs(computed - expected);
    c.rel_err = expected == cplx(0) ? c.abs_err : c.abs_err / std::abs(expected);
    c.pass = std::isfinite(c.rel_err) && c.rel_err < tol(rel_tol);
    checks_.push_back(std::move(c));
  }

  /// |value| small against a reference magnitude.
  void small(const std::string& id, double value, double reference, double rel_tol) {
    Check c{id, 0.0, value};
    c.abs_err = std::abs(value);
    c.rel_err = reference > 0 ? c.abs_err / reference : c.abs_err;
    c.pass = std::isfinite(c.rel_err) && c.rel_err < tol(rel_tol);
    checks_.push_back(std::move(c));
  }

  void equal(const std::string& id, long expected, long computed) {
    Check c{id, expected, computed};
    c.abs_err = static_cast<double>(std::labs(computed - expected));
    c.rel_err = expected == 0 ? c.abs_err : c.abs_err / static_cast<double>(std::labs(expected));
    c.pass = expected == computed;
    checks_.push_back(std::move(c));
  }

  void holds(const std::string& id, bool ok, json expected, json computed) {
    Check c{id, std::move(expected), std::move(computed)};
    c.abs_err = ok ? 0 : 1;
    c.rel_err = c.abs_err;
    c.pass = ok;
    checks_.push_back(std::move(c));
  }

  /// Records a thrown error as a failed check.
  void guard(const std::string& id, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      holds(id + ".error", false, "no error", e.what());
    }
  }

  std::vector<Check> take() { return std::move(checks_); }

 private:
  double tol(double fallback) const { return opts_.tol.value_or(fallback); }

  const SuiteOptions& opts_;
  std::vector<Check> checks_;
};

cplx hankel_factor(cplx s) { return std::exp(2.0 * std::numbers::pi * kI * s) - 1.0; }

void gaussian_suite(SuiteBuilder& b) {
  const Connection c = gaussian_connection();
  const auto basis = h1_basis(c);
  const auto cycles = candidate_basis(c);
  const auto v = integrate_cycle(c, cycles.at(0), basis.basis_forms.at(0));
  b.close("gaussian.period", oracle::gamma(0.5), v.value, 1e-9);
}

void gamma_suite(SuiteBuilder& b) {
  for (const char* text : {"1/2", "1/3", "3/4"}) {
    const ExactScalar s = ExactScalar::parse(text);
    const std::string id = std::string("gamma.s=") + text;
    b.guard(id, [&] {
      const Connection c = gamma_connection(s);
      const RationalFunction form = RationalFunction::pole(ExactScalar(0), 1, ExactScalar(1));
      const auto sc = s.to_complex();
      const cplx expected = hankel_factor(sc) * oracle::gamma(sc);
      const auto basis_cycles = candidate_basis(c);
      b.close(id + ".hankel", expected, integrate_cycle(c, basis_cycles.at(0), form).value, 1e-8);
      const Anchor anchor{Point::infinity(), stokes_geometry(local_data(c, Point::infinity())).decay_sectors.at(0).bisector()};
      const auto wide = integrate_cycle(c, build_hankel(c, ExactScalar(0), anchor, 1e-2), form);
      const auto narrow = integrate_cycle(c, build_hankel(c, ExactScalar(0), anchor, 1e-3), form);
      b.close(id + ".radius", wide.value, narrow.value, 1e-8);
    });
  }
}

cplx circle_period(const Connection& c, const Cycle& circle, int n, int order) {
  const RationalFunction form = RationalFunction::pole(ExactScalar(0), n + 1, ExactScalar(1));
  return parametric_derivative_period(c, circle, form, order, bessel_parameter_derivative).value;
}

void bessel_suite(SuiteBuilder& b) {
  const Connection c = bessel_connection(ExactScalar(1));
  const Cycle circle = build_circle(c, ExactScalar(0));
  const cplx two_pi_i = 2.0 * std::numbers::pi * kI;
  for (int n = 0; n <= 2; ++n) {
    const std::string id = "bessel.n=" + std::to_string(n);
    b.guard(id, [&] {
      const cplx p0 = circle_period(c, circle, n, 0);
      const cplx p1 = circle_period(c, circle, n, 1);
      const cplx p2 = circle_period(c, circle, n, 2);
      b.close(id + ".circle", two_pi_i * oracle::bessel_j(n, 1.0), p0, 1e-8);
      b.close(id + ".derivative", two_pi_i * oracle::bessel_j_derivative(n, 1.0), p1, 1e-8);
      const double z = 1.0;
      const double scale = std::abs(z * z * p2) + std::abs(z * p1) + std::abs(z * z - n * n) * std::abs(p0);
      b.small(id + ".ode_residual", std::abs(z * z * p2 + z * p1 + (z * z - n * n) * p0), scale, 1e-6);
    });
  }
  b.guard("bessel.pairing", [&] {
    const auto basis = h1_basis(c);
    const auto cycles = candidate_basis(c);
    const auto m = period_matrix(c, cycles, basis.basis_forms);
    const double det = m.determinant ? std::abs(*m.determinant) : 0.0;
    const double scale = std::pow(m.scale, static_cast<double>(cycles.size()));
    b.holds("bessel.pairing.det", det > 1e-6 * scale, "|det| > 1e-6 * " + std::to_string(scale), det);
    b.equal("bessel.pairing.rank", basis.h1_dim, m.rank);
  });
  b.guard("bessel.growth", [&] {
    auto h0 = [](const char* y) {
      const Connection cy = bessel_connection(ExactScalar(0, mpq_class(y)));
      const Cycle path = build_ray_pair(cy, {Point::finite(0), kPi / 2}, {Point::infinity(), kPi / 2});
      return integrate_cycle(cy, path, RationalFunction::pole(ExactScalar(0), 1, ExactScalar(1))).value;
    };
    const double near = std::abs(h0("1/100"));
    const double far = std::abs(h0("1/10"));
    b.holds("bessel.growth", near > far, "|H0(0.01i)| > |H0(0.1i)|", json::array({near, far}));
  });
}

int pole_excess(const Connection& c) {
  int total = 0;
  for (const auto& sp : singular_profile(c)) total += sp.pole_order - 1;
  return total;
}

void dimensions_suite(SuiteBuilder& b, const SuiteOptions& opts) {
  const auto corpus = random_corpus(opts.seed, opts.corpus_size);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Connection& c = corpus[i];
    const std::string id = "dims." + std::to_string(i);
    b.guard(id, [&] {
      const auto basis = h1_basis(c);
      const auto chi = euler_characteristics(c);
      const auto profile = rd_profile(c);
      b.equal(id + ".h1_vs_xd", profile.h1_xd, basis.h1_dim);
      b.equal(id + ".h1_vs_euler", basis.h0_dim - chi.chi_dr, basis.h1_dim);
      b.equal(id + ".h0_vs_xd", profile.h0_xd, basis.h0_dim);
      b.equal("euler." + std::to_string(i), -pole_excess(c), chi.chi_dr - (profile.h0_u - profile.h1_u));
    });
  }
}

std::vector<Connection> example_connections() {
  return {gaussian_connection(), gamma_connection(ExactScalar::parse("1/2")), gamma_connection(ExactScalar::parse("1/3")),
          gamma_connection(ExactScalar::parse("3/4")), bessel_connection(ExactScalar(1))};
}

void stokes_checks(SuiteBuilder& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coeff(-9, 9);
  std::uniform_int_distribution<int> den(1, 6);
  for (int m = 2; m <= 6; ++m) {
    int bad = 0;
    for (int trial = 0; trial < 50; ++trial) {
      ExactScalar a;
      do {
        a = ExactScalar(mpq_class(coeff(rng), den(rng)), mpq_class(coeff(rng), den(rng)));
      } while (a.is_zero());
      const Point p = trial % 2 == 0 ? Point::infinity() : Point::finite(ExactScalar(coeff(rng)));
      const auto g = stokes_geometry(p, a, m - 1);
      bool ok = static_cast<int>(g.stokes_rays.size()) == 2 * (m - 1) &&
                static_cast<int>(g.decay_sectors.size()) == m - 1;
      for (const auto& s : g.decay_sectors) ok = ok && leading_decay_rate(g, s.bisector()) < 0;
      if (!ok) ++bad;
    }
    b.equal("stokes.m=" + std::to_string(m) + ".failures", 0, bad);
  }
}

void invariants_suite(SuiteBuilder& b, const SuiteOptions& opts) {
  stokes_checks(b, opts.seed);
  const auto examples = example_connections();
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const Connection& c = examples[e];
    const std::string tag = c.label();
    b.guard("exact." + tag, [&] {
      const auto cycles = candidate_basis(c);
      double worst = 0;
      for (int k = 0; k < 20; ++k) {
        const auto g = random_section(c, opts.seed * 1000 + e * 100 + static_cast<std::uint64_t>(k));
        const auto form = apply_connection(c, g);
        for (const auto& cy : cycles) {
          const auto v = integrate_cycle(c, cy, form);
          worst = std::max(worst, v.scale > 0 ? std::abs(v.value) / v.scale : std::abs(v.value));
        }
      }
      b.small("exact." + tag, worst, 1.0, 1e-8);
    });
    b.guard("homotopy." + tag, [&] {
      const auto cycles = candidate_basis(c);
      const auto basis = h1_basis(c);
      double worst = 0;
      for (std::size_t i = 0; i < cycles.size(); ++i) {
        for (std::uint64_t s = 0; s < 3; ++s) {
          const Cycle moved = perturb_waypoints(c, cycles[i], 0.05, opts.seed + s);
          if (!validate_cycle(c, moved).valid) throw Error(ErrorCode::InvalidAnchor, "perturbed cycle is invalid");
          for (const auto& f : basis.basis_forms) {
            const auto a = integrate_cycle(c, cycles[i], f);
            const auto p = integrate_cycle(c, moved, f);
            const double ref = std::abs(a.value) > 1e-6 * a.scale ? std::abs(a.value) : a.scale;
            worst = std::max(worst, std::abs(p.value - a.value) / ref);
          }
        }
      }
      b.small("homotopy." + tag, worst, 1.0, 1e-8);
    });
  }
}

Polynomial random_polynomial(std::mt19937_64& rng, int degree) {
  std::uniform_int_distribution<int> c(-3, 3);
  std::vector<ExactScalar> coeffs;
  for (int i = 0; i <= degree; ++i) coeffs.emplace_back(mpq_class(c(rng)), mpq_class(i % 2 == 0 ? 0 : c(rng)));
  while (coeffs.back().is_zero()) coeffs.back() = ExactScalar(c(rng) >= 0 ? 1 : -1);
  return Polynomial(std::move(coeffs));
}

}  // namespace

std::string_view version() { return IPD_VERSION; }

cplx reference_oracle(std::string_view name, const std::vector<cplx>& args) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw Error(ErrorCode::DomainError, std::string(name) + " expects " + std::to_string(n) + " arguments");
  };
  auto order = [&] {
    const double n = args[0].real();
    if (args[0].imag() != 0 || n != std::round(n)) throw Error(ErrorCode::DomainError, "bessel order must be an integer");
    return static_cast<int>(n);
  };
  if (name == "gamma") {
    need(1);
    return oracle::gamma(args[0]);
  }
  if (name == "bessel_j") {
    need(2);
    return oracle::bessel_j(order(), args[1]);
  }
  if (name == "bessel_j_derivative") {
    need(2);
    return oracle::bessel_j_derivative(order(), args[1]);
  }
  if (name == "erf") {
    need(1);
    if (args[0].imag() != 0) throw Error(ErrorCode::DomainError, "erf takes a real argument");
    return oracle::erf(args[0].real());
  }
  throw Error(ErrorCode::DomainError, "unknown oracle '" + std::string(name) + "'");
}

void to_json(json& j, const Check& c) {
  j = {{"id", c.id}, {"expected", c.expected}, {"computed", c.computed},
       {"abs_err", c.abs_err}, {"rel_err", c.rel_err}, {"pass", c.pass}};
}

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json SuiteReport::to_json() const {
  return {{"suite", name}, {"pass", pass()}, {"seconds", seconds}, {"checks", checks}};
}

std::vector<std::string> suite_names() { return {"gaussian", "gamma", "bessel", "dimensions", "invariants"}; }

SuiteReport run_suite(std::string_view name, const SuiteOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  SuiteBuilder b(opts);
  if (name == "gaussian") {
    b.guard("gaussian", [&] { gaussian_suite(b); });
  } else if (name == "gamma") {
    gamma_suite(b);
  } else if (name == "bessel") {
    bessel_suite(b);
  } else if (name == "dimensions") {
    dimensions_suite(b, opts);
  } else if (name == "invariants") {
    invariants_suite(b, opts);
  } else {
    throw Error(ErrorCode::InvalidInput, "unknown suite '" + std::string(name) + "'");
  }
  SuiteReport out;
  out.name = std::string(name);
  out.checks = b.take();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::vector<Connection> random_corpus(std::uint64_t seed, int count) {
  const std::vector<ExactScalar> sites = {ExactScalar(0),    ExactScalar(1), ExactScalar(-1),
                                          ExactScalar(0, 1), ExactScalar(0, -1), ExactScalar(2)};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> npoints(0, 3);
  std::uniform_int_distribution<int> order(1, 4);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> small(-3, 3);
  std::uniform_int_distribution<int> degree(-1, 2);
  std::vector<Connection> out;
  while (static_cast<int>(out.size()) < count) {
    std::vector<ExactScalar> chosen = sites;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(static_cast<std::size_t>(npoints(rng)));
    PartialFractionForm pf;
    for (const auto& a : chosen) {
      const int m = order(rng);
      pf.poles.push_back({a, 1, ExactScalar(mpq_class(num(rng), den(rng)))});
      for (int j = 2; j <= m; ++j) {
        ExactScalar c(mpq_class(small(rng)), mpq_class(small(rng)));
        if (j == m && c.is_zero()) c = ExactScalar(1);
        pf.poles.push_back({a, j, c});
      }
    }
    const int d = degree(rng);
    if (d >= 0) pf.polynomial_part = random_polynomial(rng, d);
    const RationalFunction alpha = pf.reexpand();
    if (alpha.is_zero()) continue;
    out.push_back(canonicalize(alpha, "corpus-" + std::to_string(out.size())));
  }
  return out;
}

RationalFunction random_section(const Connection& c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> degree(0, 2);
  std::uniform_int_distribution<int> small(-3, 3);
  RationalFunction g = random_polynomial(rng, degree(rng));
  for (const auto& a : c.finite_points()) {
    for (int j = 1; j <= 2; ++j) {
      g = g + RationalFunction::pole(a, j, ExactScalar(mpq_class(small(rng)), mpq_class(small(rng))));
    }
  }
  return g;
}

json generate_report(const Connection& c, std::uint64_t seed) {
  json report;
  report["version"] = std::string(version());
  report["connection"] = io::connection_to_json(c);
  report["seed"] = seed;
  auto section = [&](const char* key, const std::function<json()>& body) {
    try {
      report[key] = body();
    } catch (const Error& e) {
      report[key] = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
  };
  SuiteOptions opts;
  opts.seed = seed;
  SuiteBuilder b(opts);

  section("singular_points", [&] { return io::singular_points_to_json(singular_profile(c)); });
  section("stokes", [&] { return io::stokes_to_json(c); });

  HomologyProfile profile;
  section("profile", [&] {
    profile = rd_profile(c);
    return io::profile_to_json(profile);
  });

  CohomologyBasis basis;
  section("dims", [&] {
    basis = h1_basis(c);
    const auto chi = euler_characteristics(c);
    const Connection dual = dualize(c);
    const json out = {{"dual", io::dims_to_json(basis, chi)},
                      {"self", io::dims_to_json(h1_basis(dual), euler_characteristics(dual))}};
    b.equal("h1_vs_xd", profile.h1_xd, basis.h1_dim);
    b.equal("h0_vs_xd", profile.h0_xd, basis.h0_dim);
    if (chi.non_reduced_divisor) {
      // a point with m = 0 is not a pole; the lattice Euler formula does not apply
      json flagged = out;
      flagged["flags"] = json::array({"non_reduced_divisor"});
      return flagged;
    }
    b.equal("h1_vs_euler", basis.h0_dim - chi.chi_dr, basis.h1_dim);
    b.equal("euler_difference", -pole_excess(c), chi.chi_dr - (profile.h0_u - profile.h1_u));
    return out;
  });

  std::vector<Cycle> cycles;
  section("cycles", [&] {
    cycles = candidate_basis(c);
    for (const auto& cy : cycles) {
      const auto v = validate_cycle(c, cy);
      b.holds("valid." + cy.name, v.valid, true, v.valid ? json(true) : json(v.reason));
    }
    return io::cycles_to_json(c, cycles);
  });

  section("periods", [&] {
    const auto m = period_matrix(c, cycles, basis.basis_forms);
    json out = io::periods_to_json(m, cycles, basis.basis_forms);
    if (basis.h1_dim > 0) {
      b.equal("period_rank", basis.h1_dim, m.equilibrated_rank);
    } else if (basis.h0_dim > 0) {
      out["note"] = "H^1 vanishes; the pairing lives in degree 0 between constant flat sections and points";
    }
    b.holds("periods_converged", m.converged, true, m.converged);
    return out;
  });

  report["checks"] = b.take();
  return report;
}

}  // namespace ipd
