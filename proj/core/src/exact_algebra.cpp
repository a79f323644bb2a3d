#include "ipd/exact_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "ipd/error.hpp"

namespace ipd {

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

mpq_class parse_rational(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  mpq_class value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) {
      throw Error(ErrorCode::Parse, "malformed rational '" + std::string(text) + "'");
    }
    mpz_class d{std::string(den), 10};
    if (d == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
    value = mpq_class(mpz_class(std::string(num), 10), d);
    value.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw Error(ErrorCode::Parse, "malformed decimal '" + std::string(text) + "'");
    }
    mpz_class digits{std::string(whole) + std::string(frac), 10};
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    value = mpq_class(digits, scale);
    value.canonicalize();
  } else {
    if (!is_digits(s)) throw Error(ErrorCode::Parse, "malformed number '" + std::string(text) + "'");
    value = mpq_class(mpz_class(std::string(s), 10));
  }
  return negative ? mpq_class(-value) : value;
}

}  // namespace

// ---------------------------------------------------------------- ExactScalar

ExactScalar::ExactScalar(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

ExactScalar ExactScalar::rational(long num, long den) {
  if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return {q, 0};
}

ExactScalar ExactScalar::gaussian(long re_num, long re_den, long im_num, long im_den) {
  return rational(re_num, re_den) + rational(im_num, im_den) * imaginary_unit();
}

ExactScalar ExactScalar::imaginary_unit() { return {0, 1}; }

ExactScalar ExactScalar::parse(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::Parse, "empty scalar");
  if (s.back() != 'i') return {parse_rational(s), 0};

  s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if (s[k] == '+' || s[k] == '-') {
      split = k;
      break;
    }
  }
  std::string re_part = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_part = split == std::string::npos ? s : s.substr(split);
  mpq_class im;
  if (im_part.empty() || im_part == "+") {
    im = 1;
  } else if (im_part == "-") {
    im = -1;
  } else {
    im = parse_rational(im_part);
  }
  mpq_class re = re_part.empty() ? mpq_class(0) : parse_rational(re_part);
  return {re, im};
}

bool ExactScalar::is_integer() const { return sgn(im_) == 0 && re_.get_den() == 1; }

std::complex<long double> ExactScalar::to_complex_ld() const {
  return {static_cast<long double>(re_.get_d()), static_cast<long double>(im_.get_d())};
}

std::string ExactScalar::to_string() const {
  const bool has_re = sgn(re_) != 0;
  const bool has_im = sgn(im_) != 0;
  if (!has_im) return re_.get_str();
  mpq_class mag = abs(im_);
  std::string im_text = mag == 1 ? std::string() : mag.get_str();
  std::string out;
  if (has_re) {
    out = re_.get_str();
    out += sgn(im_) > 0 ? "+" : "-";
  } else if (sgn(im_) < 0) {
    out = "-";
  }
  return out + im_text + "i";
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
  if (o.is_zero()) throw Error(ErrorCode::InvalidInput, "division by zero");
  if (sgn(o.im_) == 0) {
    re_ /= o.re_;
    im_ /= o.re_;
    return *this;
  }
  mpq_class n = o.norm();
  mpq_class re = (re_ * o.re_ + im_ * o.im_) / n;
  mpq_class im = (im_ * o.re_ - re_ * o.im_) / n;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

bool canonical_less(const ExactScalar& a, const ExactScalar& b) {
  if (a.re() != b.re()) return a.re() < b.re();
  return a.im() < b.im();
}

ExactScalar pow(const ExactScalar& base, int exponent) {
  if (exponent < 0) return ExactScalar(1) / pow(base, -exponent);
  ExactScalar result(1);
  ExactScalar b = base;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    e >>= 1U;
    if (e != 0) b *= b;
  }
  return result;
}

mpz_class binomial(long n, long k) {
  if (k < 0) return 0;
  mpz_class result;
  mpz_class nn(n);
  mpz_bin_ui(result.get_mpz_t(), nn.get_mpz_t(), static_cast<unsigned long>(k));
  return result;
}

// ----------------------------------------------------------------- Polynomial

Polynomial::Polynomial(std::vector<ExactScalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(const ExactScalar& constant) {
  if (!constant.is_zero()) coeffs_.push_back(constant);
}

Polynomial Polynomial::monomial(const ExactScalar& coeff, int degree) {
  if (degree < 0) throw Error(ErrorCode::InvalidInput, "negative monomial degree");
  std::vector<ExactScalar> c(static_cast<std::size_t>(degree) + 1);
  c.back() = coeff;
  return Polynomial(std::move(c));
}

Polynomial Polynomial::linear(const ExactScalar& root) { return Polynomial({-root, ExactScalar(1)}); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

ExactScalar Polynomial::coeff(int k) const {
  if (k < 0 || k > degree()) return {};
  return coeffs_[static_cast<std::size_t>(k)];
}

const ExactScalar& Polynomial::leading() const {
  if (coeffs_.empty()) throw Error(ErrorCode::InvalidInput, "leading coefficient of zero polynomial");
  return coeffs_.back();
}

ExactScalar Polynomial::eval(const ExactScalar& z) const {
  ExactScalar acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= z;
    acc += *it;
  }
  return acc;
}

std::complex<double> Polynomial::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + it->to_complex();
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<ExactScalar> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * ExactScalar(static_cast<long>(k));
  return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(const ExactScalar& a) const {
  // Horner in the ring Q(i)[h] with z = h + a.
  std::vector<ExactScalar> acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    std::vector<ExactScalar> next(acc.size() + 1);
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] += acc[k] * a;
    }
    next[0] += *it;
    acc = std::move(next);
  }
  return Polynomial(std::move(acc));
}

Polynomial Polynomial::reversed(int n) const {
  if (n < degree()) throw Error(ErrorCode::InvalidInput, "reversal degree below polynomial degree");
  std::vector<ExactScalar> c(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= degree(); ++k) c[static_cast<std::size_t>(n - k)] = coeffs_[static_cast<std::size_t>(k)];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return scaled(ExactScalar(1) / leading());
}

Polynomial Polynomial::scaled(const ExactScalar& c) const {
  if (c.is_zero()) return {};
  std::vector<ExactScalar> out = coeffs_;
  for (auto& x : out) x *= c;
  return Polynomial(std::move(out));
}

namespace {

std::string coefficient_text(const ExactScalar& c, bool& negative) {
  negative = false;
  if (c.is_real()) {
    negative = sgn(c.re()) < 0;
    return mpq_class(abs(c.re())).get_str();
  }
  if (sgn(c.re()) == 0) {
    negative = sgn(c.im()) < 0;
    return ExactScalar(0, abs(c.im())).to_string();
  }
  return "(" + c.to_string() + ")";
}

}  // namespace

std::string Polynomial::to_string(char var) const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const ExactScalar& c = coeffs_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    bool negative = false;
    std::string ct = coefficient_text(c, negative);
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    std::string mono;
    if (k == 1) mono = std::string(1, var);
    if (k > 1) mono = std::string(1, var) + "^" + std::to_string(k);
    if (mono.empty()) {
      out += ct;
    } else if (ct == "1") {
      out += mono;
    } else {
      out += ct + "*" + mono;
    }
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<ExactScalar> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-() const { return scaled(ExactScalar(-1)); }

std::pair<Polynomial, Polynomial> divmod(const Polynomial& num, const Polynomial& den) {
  if (den.is_zero()) throw Error(ErrorCode::InvalidInput, "polynomial division by zero");
  if (num.degree() < den.degree()) return {Polynomial(), num};
  std::vector<ExactScalar> rem = num.coeffs();
  std::vector<ExactScalar> quot(static_cast<std::size_t>(num.degree() - den.degree()) + 1);
  const ExactScalar inv_lead = ExactScalar(1) / den.leading();
  const int dd = den.degree();
  for (int k = num.degree() - dd; k >= 0; --k) {
    ExactScalar q = rem[static_cast<std::size_t>(k + dd)] * inv_lead;
    if (q.is_zero()) continue;
    quot[static_cast<std::size_t>(k)] = q;
    for (int j = 0; j <= dd; ++j) rem[static_cast<std::size_t>(k + j)] -= q * den.coeffs()[static_cast<std::size_t>(j)];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

// ----------------------------------------------------------- RationalFunction

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
  if (den.is_zero()) throw Error(ErrorCode::InvalidInput, "rational function with zero denominator");
  if (num.is_zero()) return;
  Polynomial g = gcd(num, den);
  if (g.degree() > 0) {
    num = divmod(num, g).first;
    den = divmod(den, g).first;
  }
  ExactScalar lead = den.leading();
  num_ = num.scaled(ExactScalar(1) / lead);
  den_ = den.monic();
}

RationalFunction::RationalFunction(const Polynomial& poly) : num_(poly) {}

RationalFunction::RationalFunction(const ExactScalar& constant) : num_(constant) {}

RationalFunction RationalFunction::monomial(const ExactScalar& coeff, int power) {
  if (power >= 0) return RationalFunction(Polynomial::monomial(coeff, power));
  return RationalFunction(Polynomial(coeff), Polynomial::monomial(ExactScalar(1), -power));
}

RationalFunction RationalFunction::pole(const ExactScalar& location, int order, const ExactScalar& coeff) {
  Polynomial den(ExactScalar(1));
  const Polynomial lin = Polynomial::linear(location);
  for (int k = 0; k < order; ++k) den = den * lin;
  return RationalFunction(Polynomial(coeff), den);
}

std::complex<double> RationalFunction::eval(std::complex<double> z) const {
  return num_.eval(z) / den_.eval(z);
}

std::string RationalFunction::to_string(char var) const {
  std::string n = num_.to_string(var);
  if (is_polynomial()) return n;
  auto single = [](const Polynomial& p) {
    int terms = 0;
    for (const auto& c : p.coeffs()) terms += c.is_zero() ? 0 : 1;
    return terms == 1;
  };
  std::string d = den_.to_string(var);
  if (!single(num_)) n = "(" + n + ")";
  if (!single(den_) || d.find('*') != std::string::npos) d = "(" + d + ")";
  return n + "/" + d;
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) throw Error(ErrorCode::InvalidInput, "division by the zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction differentiate(const RationalFunction& r) {
  const Polynomial& n = r.numerator();
  const Polynomial& d = r.denominator();
  return RationalFunction(n.derivative() * d - n * d.derivative(), d * d);
}

RationalFunction change_chart_infinity(const RationalFunction& r) {
  if (r.is_zero()) return {};
  const int dn = r.numerator().degree();
  const int dd = r.denominator().degree();
  Polynomial num = r.numerator().reversed(dn).scaled(ExactScalar(-1));
  Polynomial den = r.denominator().reversed(dd);
  // r(1/w) = w^{dd-dn} revN / revD, then multiply by -1/w^2.
  const int shift = dd - dn - 2;
  if (shift >= 0) {
    num = num * Polynomial::monomial(ExactScalar(1), shift);
  } else {
    den = den * Polynomial::monomial(ExactScalar(1), -shift);
  }
  return RationalFunction(num, den);
}

// ---------------------------------------------------------- roots and PF form

std::vector<Root> gaussian_roots(const Polynomial& p) {
  if (p.degree() <= 0) return {};
  Polynomial sqf = divmod(p, gcd(p, p.derivative())).first.monic();

  std::vector<ExactScalar> candidates;
  if (sqf.degree() == 1) {
    candidates.push_back(-sqf.coeff(0));
  } else {
    // Scale to Gaussian-integer coefficients. For a root u/v in lowest terms,
    // v divides the leading coefficient, so lead * root is a Gaussian integer.
    mpz_class lcm = 1;
    for (const auto& c : sqf.coeffs()) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.re().get_den_mpz_t());
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.im().get_den_mpz_t());
    }
    Polynomial integral = sqf.scaled(ExactScalar(mpq_class(lcm)));
    const ExactScalar lead = integral.leading();

    const int n = sqf.degree();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 1; k < n; ++k) companion(k, k - 1) = 1.0;
    for (int k = 0; k < n; ++k) companion(k, n - 1) = -sqf.coeff(k).to_complex();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::IrreducibleDenominator, "root isolation failed for " + p.to_string());
    }
    const Polynomial dsqf = sqf.derivative();
    for (int k = 0; k < n; ++k) {
      std::complex<long double> r(solver.eigenvalues()[k].real(), solver.eigenvalues()[k].imag());
      for (int it = 0; it < 4; ++it) {
        std::complex<long double> f = 0, df = 0;
        for (int j = sqf.degree(); j >= 0; --j) f = f * r + sqf.coeff(j).to_complex_ld();
        for (int j = dsqf.degree(); j >= 0; --j) df = df * r + dsqf.coeff(j).to_complex_ld();
        if (std::abs(df) == 0.0L) break;
        r -= f / df;
      }
      const std::complex<long double> scaled = lead.to_complex_ld() * r;
      const long double re = std::round(scaled.real());
      const long double im = std::round(scaled.imag());
      if (std::fabs(re) > 9.0e15L || std::fabs(im) > 9.0e15L) {
        throw Error(ErrorCode::IrreducibleDenominator, "root out of exact range in " + p.to_string());
      }
      ExactScalar guess = ExactScalar(mpq_class(static_cast<long>(re)), mpq_class(static_cast<long>(im))) / lead;
      if (!sqf.eval(guess).is_zero()) {
        throw Error(ErrorCode::IrreducibleDenominator,
                    "denominator " + p.to_string() + " has a root that is not a Gaussian rational");
      }
      candidates.push_back(guess);
    }
  }

  std::sort(candidates.begin(), candidates.end(), canonical_less);
  if (std::adjacent_find(candidates.begin(), candidates.end()) != candidates.end()) {
    throw Error(ErrorCode::IrreducibleDenominator, "root isolation produced duplicates for " + p.to_string());
  }

  std::vector<Root> roots;
  for (const auto& c : candidates) {
    Polynomial q = p;
    int mult = 0;
    const Polynomial lin = Polynomial::linear(c);
    while (q.degree() > 0 && q.eval(c).is_zero()) {
      q = divmod(q, lin).first;
      ++mult;
    }
    roots.push_back({c, mult});
  }
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  if (total != p.degree()) {
    throw Error(ErrorCode::IrreducibleDenominator, "incomplete factorization of " + p.to_string());
  }
  return roots;
}

std::vector<ExactScalar> laurent_principal_part(const RationalFunction& r, const ExactScalar& a) {
  if (r.is_zero()) return {};
  Polynomial q = r.denominator();
  const Polynomial lin = Polynomial::linear(a);
  int k = 0;
  while (q.degree() > 0 && q.eval(a).is_zero()) {
    q = divmod(q, lin).first;
    ++k;
  }
  if (k == 0) return {};
  const Polynomial ns = r.numerator().taylor_shift(a);
  const Polynomial qs = q.taylor_shift(a);
  std::vector<ExactScalar> series(static_cast<std::size_t>(k));
  const ExactScalar inv_q0 = ExactScalar(1) / qs.coeff(0);
  for (int i = 0; i < k; ++i) {
    ExactScalar acc = ns.coeff(i);
    for (int l = 1; l <= i; ++l) acc -= qs.coeff(l) * series[static_cast<std::size_t>(i - l)];
    series[static_cast<std::size_t>(i)] = acc * inv_q0;
  }
  std::vector<ExactScalar> principal(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) principal[static_cast<std::size_t>(j - 1)] = series[static_cast<std::size_t>(k - j)];
  return principal;
}

PartialFractionForm partial_fractions(const RationalFunction& r) {
  PartialFractionForm pf;
  pf.polynomial_part = divmod(r.numerator(), r.denominator()).first;
  for (const auto& root : gaussian_roots(r.denominator())) {
    auto principal = laurent_principal_part(r, root.value);
    for (std::size_t j = 0; j < principal.size(); ++j) {
      if (!principal[j].is_zero()) pf.poles.push_back({root.value, static_cast<int>(j) + 1, principal[j]});
    }
  }
  return pf;
}

RationalFunction PartialFractionForm::reexpand() const {
  RationalFunction sum(polynomial_part);
  for (const auto& t : poles) sum = sum + RationalFunction::pole(t.location, t.order, t.coeff);
  return sum;
}

std::vector<ExactScalar> PartialFractionForm::locations() const {
  std::vector<ExactScalar> out;
  for (const auto& t : poles) {
    if (out.empty() || out.back() != t.location) out.push_back(t.location);
  }
  return out;
}

}  // namespace ipd
