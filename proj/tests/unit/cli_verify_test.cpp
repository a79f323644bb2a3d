#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include <unistd.h>

#include "ipd/derham.hpp"
#include "ipd/error.hpp"
#include "ipd/io.hpp"
#include "ipd/oracles.hpp"
#include "ipd/periods.hpp"
#include "ipd/verify.hpp"
#include "generators.hpp"

using namespace ipd;
using testgen::Gen;
using nlohmann::json;

namespace {

const std::filesystem::path kData = IPD_TEST_DATA;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IPD_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture_cli(const std::string& args) {
  static int counter = 0;
  const auto out = std::filesystem::temp_directory_path() /
                   ("ipd_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string(IPD_CLI) + " " + args + " > " + out.string() + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  (void)rc;
  std::ifstream in(out);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::filesystem::remove(out);
  return text;
}

}  // namespace

TEST(Oracle, GammaMatchesStandardLibrary) {
  for (double x = 0.1; x < 20; x += 0.37) {
    EXPECT_LT(std::abs(oracle::gamma(x).real() - std::tgamma(x)) / std::tgamma(x), 1e-12) << x;
  }
  for (double x : {-0.5, -1.5, -2.7}) EXPECT_LT(std::abs(oracle::gamma(x).real() / std::tgamma(x) - 1), 1e-12);
}

TEST(Oracle, GammaFunctionalEquations) {
  Gen g(80);
  for (int i = 0; i < 100; ++i) {
    const cplx s(g.real(-4, 6), g.real(-3, 3));
    EXPECT_LT(std::abs(oracle::gamma(s + 1.0) - s * oracle::gamma(s)), 1e-11 * std::abs(s * oracle::gamma(s)));
    const cplx reflected = oracle::gamma(s) * oracle::gamma(1.0 - s) * std::sin(std::numbers::pi * s);
    EXPECT_LT(std::abs(reflected - std::numbers::pi), 1e-10);
  }
}

TEST(Oracle, GammaPolesRaise) {
  for (double x : {0.0, -1.0, -7.0}) {
    try {
      (void)oracle::gamma(x);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
  }
}

TEST(Oracle, BesselMatchesStandardLibrary) {
  for (int n = 0; n <= 6; ++n) {
    for (double x = 0; x <= 20; x += 0.5) {
      EXPECT_NEAR(oracle::bessel_j(n, x).real(), std::cyl_bessel_j(n, x), 1e-13) << n << " " << x;
    }
    EXPECT_NEAR(oracle::bessel_j(-n, 1.3).real(), std::pow(-1.0, n) * std::cyl_bessel_j(n, 1.3), 1e-15);
  }
  EXPECT_NEAR(oracle::bessel_j(0, 1).real(), 0.7651976865579666, 1e-15);
  EXPECT_THROW((void)oracle::bessel_j(0, 21.0), Error);
}

TEST(Oracle, BesselRecurrenceOffAxis) {
  Gen g(83);
  for (int i = 0; i < 200; ++i) {
    const cplx z(g.real(-15, 15), g.real(-5, 5));
    const int n = static_cast<int>(g.integer(1, 8));
    const cplx lhs = oracle::bessel_j(n - 1, z) + oracle::bessel_j(n + 1, z);
    const cplx rhs = 2.0 * static_cast<double>(n) / z * oracle::bessel_j(n, z);
    const double size = std::abs(oracle::bessel_j(n - 1, z)) + std::abs(oracle::bessel_j(n + 1, z));
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * size) << z << " " << n;
  }
}

TEST(Oracle, BesselDerivativeByDifferences) {
  for (int n = 0; n <= 3; ++n) {
    const double h = 1e-5, x = 1.7;
    const double numeric = (std::cyl_bessel_j(n, x + h) - std::cyl_bessel_j(n, x - h)) / (2 * h);
    EXPECT_NEAR(oracle::bessel_j_derivative(n, x).real(), numeric, 1e-9);
  }
}

TEST(Oracle, ErfMatchesStandardLibrary) {
  for (double x = -7; x <= 7; x += 0.05) EXPECT_NEAR(oracle::erf(x), std::erf(x), 1e-14) << x;
  EXPECT_NEAR(oracle::erf(6), 1.0, 1e-12);
}

TEST(Oracle, Dispatch) {
  EXPECT_LT(std::abs(reference_oracle("gamma", {0.5}) - std::sqrt(std::numbers::pi)), 1e-14);
  EXPECT_LT(std::abs(reference_oracle("bessel_j", {0.0, 1.0}) - std::cyl_bessel_j(0, 1.0)), 1e-15);
  EXPECT_THROW((void)reference_oracle("bessel_j", {0.5, 1.0}), Error);
  EXPECT_THROW((void)reference_oracle("zeta", {2.0}), Error);
}

TEST(Io, ConnectionRoundTrip) {
  for (const auto& c : random_corpus(81, 20)) {
    const auto back = io::connection_from_json(io::connection_to_json(c));
    EXPECT_EQ(back, c);
  }
}

TEST(Io, ReadsConnectionFiles) {
  EXPECT_EQ(io::read_connection(kData / "gamma.json").alpha(), gamma_connection(ExactScalar::parse("1/2")).alpha());
  EXPECT_EQ(io::read_connection(kData / "bessel.json").alpha(), bessel_connection(ExactScalar(1)).alpha());
  try {
    (void)io::read_connection(kData / "malformed.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
  }
  try {
    (void)io::read_connection(kData / "irrational.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IrreducibleDenominator);
  }
}

TEST(Io, CyclesRoundTripPreservesPeriods) {
  const auto c = bessel_connection(ExactScalar(1));
  const auto cycles = candidate_basis(c);
  const auto back = io::cycles_from_json(c, json::parse(io::cycles_to_json(c, cycles).dump()));
  ASSERT_EQ(back.size(), cycles.size());
  const auto forms = h1_basis(c).basis_forms;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    EXPECT_TRUE(validate_cycle(c, back[i]).valid);
    for (const auto& f : forms) {
      EXPECT_EQ(integrate_cycle(c, back[i], f).value, integrate_cycle(c, cycles[i], f).value);
    }
  }
}

TEST(Io, PeriodsCsvHasOneRowPerEntry) {
  const auto c = bessel_connection(ExactScalar(1));
  const auto cycles = candidate_basis(c);
  const auto forms = h1_basis(c).basis_forms;
  const auto csv = io::periods_to_csv(period_matrix(c, cycles, forms), cycles, forms);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
}

TEST(Corpus, DeterministicAndWellFormed) {
  const auto a = random_corpus(3, 50);
  const auto b = random_corpus(3, 50);
  ASSERT_EQ(a.size(), 50u);
  EXPECT_EQ(a, b);
  EXPECT_NE(random_corpus(4, 50), a);
  const std::vector<ExactScalar> sites = {ExactScalar(0), ExactScalar(1), ExactScalar(-1), ExactScalar(0, 1),
                                          ExactScalar(0, -1), ExactScalar(2)};
  for (const auto& c : a) {
    EXPECT_FALSE(c.alpha().is_zero());
    EXPECT_LE(c.finite_points().size(), 3u);
    for (const auto& x : c.finite_points()) EXPECT_NE(std::find(sites.begin(), sites.end(), x), sites.end());
    for (const auto& sp : singular_profile(c)) {
      if (!sp.point.at_infinity) {
        EXPECT_LE(sp.pole_order, 4);
        EXPECT_LE(sp.residue.re().get_den(), 6);
      }
    }
  }
}

TEST(Suites, KnownAnswerSuitesPass) {
  for (const char* name : {"gaussian", "gamma", "bessel"}) {
    const auto r = run_suite(name);
    EXPECT_TRUE(r.pass()) << r.to_json().dump(2);
    EXPECT_FALSE(r.checks.empty());
  }
  EXPECT_EQ(run_suite("gaussian").checks.size(), 1u);
}

TEST(Suites, UnknownSuiteRaises) {
  try {
    (void)run_suite("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
}

TEST(Suites, ToleranceOverrideCanFail) {
  SuiteOptions opts;
  opts.tol = 0.0;
  EXPECT_FALSE(run_suite("gamma", opts).pass());
}

TEST(Report, GammaBesselTrivial) {
  const auto g = generate_report(gamma_connection(ExactScalar::parse("1/2")));
  EXPECT_EQ(g["dims"]["dual"]["h1"], 1);
  EXPECT_EQ(g["cycles"].size(), 1u);
  EXPECT_EQ(g["periods"]["entries"].size(), 1u);
  for (const auto& c : g["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();

  const auto b = generate_report(bessel_connection(ExactScalar(1)));
  EXPECT_EQ(b["dims"]["dual"]["h1"], 2);
  EXPECT_FALSE(b["periods"]["determinant"].is_null());

  const auto t = generate_report(trivial_connection());
  EXPECT_EQ(t["dims"]["dual"]["h1"], 0);
  EXPECT_TRUE(t["periods"]["entries"].empty());
  EXPECT_TRUE(t["periods"].contains("note"));
  EXPECT_EQ(t["dims"]["flags"], json::array({"non_reduced_divisor"}));
  for (const auto& c : t["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
    EXPECT_NE(c["id"], "h1_vs_euler");
  }
  for (const char* key : {"version", "connection", "profile", "dims", "cycles", "periods", "checks"}) {
    EXPECT_TRUE(t.contains(key)) << key;
  }
}

TEST(Report, ByteIdenticalAcrossRuns) {
  for (const auto& c : {bessel_connection(ExactScalar(1)), random_corpus(82, 1).front()}) {
    EXPECT_EQ(generate_report(c, 5).dump(), generate_report(c, 5).dump());
  }
}

TEST(Cli, ExitCodes) {
  const std::string data = kData.string() + "/";
  EXPECT_EQ(run_cli("dims " + data + "gamma.json"), 0);
  EXPECT_EQ(run_cli("cycles " + data + "bessel.json"), 0);
  EXPECT_EQ(run_cli("periods " + data + "bessel.json --out csv"), 0);
  EXPECT_EQ(run_cli("analyze " + data + "gaussian.json"), 0);
  EXPECT_EQ(run_cli("analyze " + data + "trivial.json"), 0);
  EXPECT_EQ(run_cli("verify gaussian --quiet"), 0);
  EXPECT_EQ(run_cli("verify gamma --tol 0"), 1);
  EXPECT_EQ(run_cli("dims " + data + "malformed.json"), 2);
  EXPECT_EQ(run_cli("dims " + data + "irrational.json"), 2);
  EXPECT_EQ(run_cli("dims " + data + "missing.json"), 2);
  EXPECT_EQ(run_cli("verify nonsense"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Cli, DimsOutput) {
  const auto j = json::parse(capture_cli("dims " + (kData / "bessel.json").string()));
  EXPECT_EQ(j["h0"], 0);
  EXPECT_EQ(j["h1"], 2);
  EXPECT_EQ(j["chi_dr"], -2);
  EXPECT_EQ(j["chi_top"], 0);
  EXPECT_EQ(j["basis"], json::array({"1/z", "1/z^2"}));
}

TEST(Cli, CyclesFeedPeriods) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto cycles_file = dir / ("ipd_cli_cycles_" + std::to_string(::getpid()) + ".json");
  {
    std::ofstream out(cycles_file);
    out << capture_cli("cycles " + (kData / "gamma.json").string());
  }
  const auto j = json::parse(capture_cli("periods " + (kData / "gamma.json").string() + " --cycles " + cycles_file.string()));
  std::filesystem::remove(cycles_file);
  const double re = j["entries"][0][0]["value"][0];
  EXPECT_NEAR(re, -2 * std::sqrt(std::numbers::pi), 1e-9);
  EXPECT_EQ(j["rank"], 1);
}
