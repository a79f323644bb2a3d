#pragma once

// Rank-1 connections on the projective line, given by alpha = nabla(1) as the
// dz-coefficient of a rational 1-form.

#include <complex>
#include <string>
#include <vector>

#include "ipd/exact_algebra.hpp"

namespace ipd {

/// A point of the projective line: a Gaussian rational or infinity.
struct Point {
  bool at_infinity = false;
  ExactScalar location;

  static Point infinity() { return {true, {}}; }
  static Point finite(const ExactScalar& x) { return {false, x}; }

  std::complex<double> to_complex() const { return location.to_complex(); }
  /// "inf" or the scalar text form.
  std::string to_string() const;
  static Point parse(std::string_view text);

  friend bool operator==(const Point& a, const Point& b) {
    return a.at_infinity == b.at_infinity && (a.at_infinity || a.location == b.location);
  }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

/// Finite points in canonical order, infinity last.
bool point_less(const Point& a, const Point& b);

/// coeff * w^power in the local coordinate (w = z - x, or w = 1/z at infinity).
struct ExponentialTerm {
  int power = -1;
  ExactScalar coeff;

  friend bool operator==(const ExponentialTerm&, const ExponentialTerm&) = default;
};

struct SingularPointData {
  Point point;
  int pole_order = 0;
  ExactScalar residue;
  /// Principal part of the antiderivative, most singular term first.
  std::vector<ExponentialTerm> exponential_part;
  /// Laurent principal part of the local dw-coefficient; entry j-1 multiplies w^{-j}.
  std::vector<ExactScalar> principal_part;

  bool irregular() const { return pole_order >= 2; }
};

class Connection {
 public:
  Connection() = default;

  const RationalFunction& alpha() const { return alpha_; }
  const std::string& label() const { return label_; }
  /// D: poles of alpha in both charts, canonical order, infinity last. Never empty.
  const std::vector<Point>& singular_set() const { return singular_set_; }
  const PartialFractionForm& alpha_partial_fractions() const { return pf_; }
  /// Finite points of D in canonical order.
  std::vector<ExactScalar> finite_points() const;
  bool infinity_singular() const { return !singular_set_.empty() && singular_set_.back().at_infinity; }

  friend bool operator==(const Connection& a, const Connection& b) {
    return a.alpha_ == b.alpha_ && a.label_ == b.label_;
  }

 private:
  friend Connection canonicalize(const RationalFunction& raw_alpha, std::string label);

  RationalFunction alpha_;
  std::string label_;
  std::vector<Point> singular_set_;
  PartialFractionForm pf_;
};

Connection canonicalize(const RationalFunction& raw_alpha, std::string label);

std::vector<SingularPointData> singular_profile(const Connection& c);
SingularPointData local_data(const Connection& c, const Point& x);

/// Connection with form -alpha.
Connection dualize(const Connection& c);

struct LogTerm {
  ExactScalar location;
  ExactScalar residue;
};

/// Integral of alpha = f_global + sum residue * log(z - location).
struct GlobalAntiderivative {
  RationalFunction f_global;
  std::vector<LogTerm> log_terms;
};

GlobalAntiderivative global_antiderivative(const Connection& c);

// Connections used throughout the examples and the verification suites.
Connection trivial_connection();
/// alpha = -1 + s/t; dual flat section e^{-t} t^s.
Connection gamma_connection(const ExactScalar& s);
/// alpha = -2t; dual flat section e^{-t^2}.
Connection gaussian_connection();
/// alpha = (z/2)(1 + u^{-2}); dual flat section exp(z(u - 1/u)/2).
Connection bessel_connection(const ExactScalar& z);

}  // namespace ipd
