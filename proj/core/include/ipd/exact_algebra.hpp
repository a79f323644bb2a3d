#pragma once

// Exact arithmetic over the Gaussian rationals Q(i): scalars, univariate
// polynomials, rational functions and their partial-fraction decompositions.

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ipd {

/// re + im*i with both parts reduced rationals.
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(long value) : re_(value), im_(0) {}  // NOLINT(google-explicit-constructor)
  ExactScalar(mpq_class re, mpq_class im = 0);

  /// num/den as a real scalar; den must be nonzero.
  static ExactScalar rational(long num, long den);
  static ExactScalar gaussian(long re_num, long re_den, long im_num, long im_den);
  static ExactScalar imaginary_unit();

  /// Text form "a/b+c/di" (spaces ignored); decimals such as "0.25" are read exactly.
  static ExactScalar parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_integer() const;

  ExactScalar conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }
  std::complex<long double> to_complex_ld() const;

  std::string to_string() const;

  ExactScalar operator-() const { return {-re_, -im_}; }
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const ExactScalar& o);
  ExactScalar& operator/=(const ExactScalar& o);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }
  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

/// Deterministic total order (real part, then imaginary part).
bool canonical_less(const ExactScalar& a, const ExactScalar& b);

ExactScalar pow(const ExactScalar& base, int exponent);

/// Dense polynomial, coefficients in ascending power order, no trailing zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<ExactScalar> coeffs);
  Polynomial(const ExactScalar& constant);  // NOLINT(google-explicit-constructor)

  static Polynomial monomial(const ExactScalar& coeff, int degree);
  /// z - root
  static Polynomial linear(const ExactScalar& root);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<ExactScalar>& coeffs() const { return coeffs_; }
  /// Coefficient of z^k, zero outside the stored range.
  ExactScalar coeff(int k) const;
  const ExactScalar& leading() const;

  ExactScalar eval(const ExactScalar& z) const;
  std::complex<double> eval(std::complex<double> z) const;

  Polynomial derivative() const;
  /// Coefficients of p(a + h) as a polynomial in h.
  Polynomial taylor_shift(const ExactScalar& a) const;
  /// z^n p(1/z); requires n >= degree().
  Polynomial reversed(int n) const;
  Polynomial monic() const;
  Polynomial scaled(const ExactScalar& c) const;

  std::string to_string(char var = 'z') const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void trim();
  std::vector<ExactScalar> coeffs_;
};

/// Euclidean division: {quotient, remainder}.
std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den);
/// Monic gcd; gcd(0, 0) = 0.
Polynomial gcd(Polynomial a, Polynomial b);

/// numerator / denominator, coprime, monic denominator.
class RationalFunction {
 public:
  RationalFunction() = default;
  RationalFunction(Polynomial num, Polynomial den);
  RationalFunction(const Polynomial& poly);  // NOLINT(google-explicit-constructor)
  RationalFunction(const ExactScalar& constant);  // NOLINT(google-explicit-constructor)
  RationalFunction(long constant) : RationalFunction(ExactScalar(constant)) {}  // NOLINT

  /// coeff * z^power, power may be negative.
  static RationalFunction monomial(const ExactScalar& coeff, int power);
  /// coeff / (z - location)^order
  static RationalFunction pole(const ExactScalar& location, int order, const ExactScalar& coeff);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.degree() == 0; }

  std::complex<double> eval(std::complex<double> z) const;
  std::string to_string(char var = 'z') const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

 private:
  Polynomial num_;
  Polynomial den_{ExactScalar(1)};
};

RationalFunction differentiate(const RationalFunction& r);

/// Rewrites r(z) dz in the chart w = 1/z and returns the dw coefficient,
/// i.e. -r(1/w) / w^2.
RationalFunction change_chart_infinity(const RationalFunction& r);

struct PoleTerm {
  ExactScalar location;
  int order = 1;
  ExactScalar coeff;

  friend bool operator==(const PoleTerm&, const PoleTerm&) = default;
};

/// polynomial_part + sum coeff / (z - location)^order. Only nonzero terms are
/// listed; (location, order) pairs are distinct and sorted.
struct PartialFractionForm {
  Polynomial polynomial_part;
  std::vector<PoleTerm> poles;

  RationalFunction reexpand() const;
  /// Distinct pole locations in canonical order.
  std::vector<ExactScalar> locations() const;
};

struct Root {
  ExactScalar value;
  int multiplicity = 1;
};

/// All roots of p with multiplicity. Throws IrreducibleDenominator when some
/// root is not a Gaussian rational.
std::vector<Root> gaussian_roots(const Polynomial& p);

PartialFractionForm partial_fractions(const RationalFunction& r);

/// Principal part of r at a: entry j-1 is the coefficient of (z-a)^{-j}.
/// Empty when r is regular at a. The last entry is nonzero.
std::vector<ExactScalar> laurent_principal_part(const RationalFunction& r, const ExactScalar& a);

/// Binomial coefficient C(n, k) for integer n (possibly negative) and k >= 0.
mpz_class binomial(long n, long k);

}  // namespace ipd
