#pragma once

// Known-answer suites, the random connection corpus and full analysis reports.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ipd/connection.hpp"
#include "ipd/stokes.hpp"

namespace ipd {

std::string_view version();

/// gamma(s), bessel_j(n, z), bessel_j_derivative(n, z) or erf(x); n is the real part of args[0].
cplx reference_oracle(std::string_view name, const std::vector<cplx>& args);

struct Check {
  std::string id;
  nlohmann::json expected;
  nlohmann::json computed;
  double abs_err = 0;
  double rel_err = 0;
  bool pass = false;
};

void to_json(nlohmann::json& j, const Check& c);

struct SuiteReport {
  std::string name;
  std::vector<Check> checks;
  double seconds = 0;

  bool pass() const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 0;
  /// Replaces the relative tolerance of every floating-point check when set.
  std::optional<double> tol;
  int corpus_size = 100;
};

std::vector<std::string> suite_names();
/// Throws InvalidInput for an unknown suite name.
SuiteReport run_suite(std::string_view name, const SuiteOptions& opts = {});

/// Random rank-1 connections: poles at up to three of {0, 1, -1, i, -i, 2} with
/// orders 1..4, residues p/q with q <= 6, polynomial part of degree <= 2.
std::vector<Connection> random_corpus(std::uint64_t seed, int count);

/// Random section with poles only on D: polynomial of degree <= 2 plus principal
/// parts of order <= 2 at the finite singular points.
RationalFunction random_section(const Connection& c, std::uint64_t seed);

/// Full analysis; component failures are recorded as {"error", "message"} entries.
nlohmann::json generate_report(const Connection& c, std::uint64_t seed = 0);

}  // namespace ipd
