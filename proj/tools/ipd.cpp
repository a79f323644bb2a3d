#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ipd/derham.hpp"
#include "ipd/error.hpp"
#include "ipd/io.hpp"
#include "ipd/periods.hpp"
#include "ipd/verify.hpp"

using nlohmann::json;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kInputError = 2 };

struct Output {
  std::string format = "json";
  bool quiet = false;

  void emit(const json& j) const {
    if (!quiet) std::cout << j.dump(2) << '\n';
  }
  void emit_text(const std::string& s) const {
    if (!quiet) std::cout << s;
  }
  bool csv() const { return format == "csv"; }
};

std::string csv_field(const json& j) {
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return quoted + "\"";
}

std::string checks_csv(const json& checks) {
  std::ostringstream out;
  out << "id,expected,computed,abs_err,rel_err,pass\n";
  for (const auto& c : checks) {
    out << csv_field(c["id"]) << ',' << csv_field(c["expected"]) << ',' << csv_field(c["computed"]) << ','
        << c["abs_err"].dump() << ',' << c["rel_err"].dump() << ',' << (c["pass"].get<bool>() ? 1 : 0) << '\n';
  }
  return out.str();
}

bool all_pass(const json& checks) {
  for (const auto& c : checks) {
    if (!c["pass"].get<bool>()) return false;
  }
  return true;
}

int run_analyze(const std::string& path, std::uint64_t seed, const Output& out) {
  const auto c = ipd::io::read_connection(path);
  const json report = ipd::generate_report(c, seed);
  if (out.csv()) {
    out.emit_text(checks_csv(report["checks"]));
  } else {
    out.emit(report);
  }
  return all_pass(report["checks"]) ? kPass : kCheckFailed;
}

int run_dims(const std::string& path, const Output& out) {
  const auto c = ipd::io::read_connection(path);
  const json dims = ipd::io::dims_to_json(ipd::h1_basis(c), ipd::euler_characteristics(c));
  if (out.csv()) {
    std::ostringstream s;
    s << "h0,h1,chi_dr,chi_top\n" << dims["h0"] << ',' << dims["h1"] << ',' << dims["chi_dr"] << ',' << dims["chi_top"] << '\n';
    out.emit_text(s.str());
  } else {
    out.emit(dims);
  }
  return kPass;
}

int run_cycles(const std::string& path, const Output& out) {
  const auto c = ipd::io::read_connection(path);
  out.emit(ipd::io::cycles_to_json(c, ipd::candidate_basis(c)));
  return kPass;
}

int run_periods(const std::string& path, const std::string& cycles_path, const Output& out) {
  const auto c = ipd::io::read_connection(path);
  std::vector<ipd::Cycle> cycles;
  if (cycles_path.empty()) {
    cycles = ipd::candidate_basis(c);
  } else {
    std::ifstream in(cycles_path);
    if (!in) throw ipd::Error(ipd::ErrorCode::Parse, "cannot open " + cycles_path);
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ipd::Error(ipd::ErrorCode::Parse, cycles_path + ": " + e.what());
    }
    cycles = ipd::io::cycles_from_json(c, j);
    for (const auto& cy : cycles) {
      const auto v = ipd::validate_cycle(c, cy);
      if (!v.valid) throw ipd::Error(ipd::ErrorCode::InvalidInput, cy.name + " is not a valid cycle: " + v.reason);
    }
  }
  const auto basis = ipd::h1_basis(c);
  const auto m = ipd::period_matrix(c, cycles, basis.basis_forms);
  if (out.csv()) {
    out.emit_text(ipd::io::periods_to_csv(m, cycles, basis.basis_forms));
  } else {
    out.emit(ipd::io::periods_to_json(m, cycles, basis.basis_forms));
  }
  return m.converged ? kPass : kCheckFailed;
}

int run_verify(const std::string& suite, const ipd::SuiteOptions& opts, const Output& out) {
  std::vector<std::string> names = suite == "all" ? ipd::suite_names() : std::vector<std::string>{suite};
  json reports = json::array();
  json checks = json::array();
  bool pass = true;
  for (const auto& name : names) {
    const auto r = ipd::run_suite(name, opts);
    pass = pass && r.pass();
    reports.push_back(r.to_json());
    for (const auto& c : r.checks) checks.push_back(c);
  }
  if (out.csv()) {
    out.emit_text(checks_csv(checks));
  } else {
    out.emit(names.size() == 1 ? reports[0] : reports);
  }
  return pass ? kPass : kCheckFailed;
}

int exit_code(ipd::ErrorCode code) {
  switch (code) {
    case ipd::ErrorCode::Parse:
    case ipd::ErrorCode::InvalidInput:
    case ipd::ErrorCode::IrreducibleDenominator:
    case ipd::ErrorCode::InvalidAnchor:
    case ipd::ErrorCode::DomainError:
      return kInputError;
    default:
      return kCheckFailed;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periods of rank-1 connections on the projective line"};
  app.set_version_flag("--version", std::string(ipd::version()));
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  app.add_option("--out", out.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_flag("--quiet,-q", out.quiet, "suppress output; only the exit code is reported");

  std::string conn;
  std::string cycles_path;
  std::uint64_t seed = 0;
  std::string suite;
  double tol = 0;

  auto* analyze = app.add_subcommand("analyze", "full report: profile, Stokes data, dimensions, cycles, periods, checks");
  analyze->add_option("connection", conn, "connection file")->required();
  analyze->add_option("--seed", seed, "seed for randomized checks");
  auto* dims = app.add_subcommand("dims", "de Rham dimensions and basis");
  dims->add_option("connection", conn, "connection file")->required();
  auto* cycles = app.add_subcommand("cycles", "rapid-decay cycle basis");
  cycles->add_option("connection", conn, "connection file")->required();
  auto* periods = app.add_subcommand("periods", "period matrix over a cycle list");
  periods->add_option("connection", conn, "connection file")->required();
  periods->add_option("--cycles", cycles_path, "cycle file (output format of 'cycles')");
  auto* verify = app.add_subcommand("verify", "known-answer suites");
  std::vector<std::string> suites = ipd::suite_names();
  suites.push_back("all");
  verify->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suites));
  verify->add_option("--seed", seed, "corpus seed");
  auto* tol_opt = verify->add_option("--tol", tol, "relative tolerance override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*analyze) return run_analyze(conn, seed, out);
    if (*dims) return run_dims(conn, out);
    if (*cycles) return run_cycles(conn, out);
    if (*periods) return run_periods(conn, cycles_path, out);
    ipd::SuiteOptions opts;
    opts.seed = seed;
    if (*tol_opt) opts.tol = tol;
    return run_verify(suite, opts, out);
  } catch (const ipd::Error& e) {
    std::cerr << "ipd: " << ipd::to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "ipd: " << e.what() << '\n';
    return kInputError;
  }
}
