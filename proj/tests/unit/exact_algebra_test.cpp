#include <gtest/gtest.h>

#include "ipd/error.hpp"
#include "ipd/exact_algebra.hpp"
#include "generators.hpp"

using namespace ipd;
using testgen::Gen;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

Polynomial from_roots(const std::vector<Root>& roots, const ExactScalar& lead) {
  Polynomial p(lead);
  for (const auto& r : roots) {
    for (int k = 0; k < r.multiplicity; ++k) p = p * Polynomial::linear(r.value);
  }
  return p;
}

}  // namespace

TEST(ExactScalar, ParsesTextForms) {
  EXPECT_EQ(S("1/2"), ExactScalar(mpq_class(1, 2)));
  EXPECT_EQ(S("-3+1/4i"), ExactScalar(mpq_class(-3), mpq_class(1, 4)));
  EXPECT_EQ(S("0.25"), ExactScalar(mpq_class(1, 4)));
  EXPECT_EQ(S("010/08"), ExactScalar(mpq_class(5, 4)));
  EXPECT_EQ(S("i"), ExactScalar::imaginary_unit());
  EXPECT_EQ(S("-i"), -ExactScalar::imaginary_unit());
  EXPECT_EQ(S(" 2 - 3/2i "), ExactScalar(mpq_class(2), mpq_class(-3, 2)));
}

TEST(ExactScalar, RejectsMalformedText) {
  for (const char* bad : {"", "1/0", "abc", "1//2", "1+2j"}) {
    try {
      (void)S(bad);
      ADD_FAILURE() << "accepted '" << bad << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Parse) << bad;
    }
  }
}

TEST(ExactScalar, TextRoundTrip) {
  Gen g(11);
  for (int i = 0; i < 200; ++i) {
    const ExactScalar x = g.scalar(40, 13);
    EXPECT_EQ(S(x.to_string().c_str()), x) << x.to_string();
  }
}

TEST(ExactScalar, FieldIdentities) {
  Gen g(12);
  for (int i = 0; i < 200; ++i) {
    const ExactScalar a = g.scalar(), b = g.nonzero_scalar(), c = g.scalar();
    EXPECT_EQ((a * b) / b, a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a - c) + c, a);
    EXPECT_EQ(b * b.conj(), ExactScalar(b.norm()));
  }
}

TEST(Polynomial, DivisionIdentity) {
  Gen g(13);
  for (int i = 0; i < 100; ++i) {
    const Polynomial num = g.polynomial(g.integer(0, 6));
    Polynomial den = g.polynomial(g.integer(0, 3));
    if (den.is_zero()) continue;
    const auto [q, r] = divmod(num, den);
    EXPECT_EQ(q * den + r, num);
    EXPECT_LT(r.degree(), den.degree());
  }
}

TEST(Polynomial, GcdDividesBoth) {
  Gen g(14);
  for (int i = 0; i < 60; ++i) {
    const Polynomial common = from_roots({{g.site(), g.integer(1, 2)}}, ExactScalar(1));
    const Polynomial a = common * g.polynomial(g.integer(0, 3));
    const Polynomial b = common * g.polynomial(g.integer(0, 3));
    if (a.is_zero() || b.is_zero()) continue;
    const Polynomial d = gcd(a, b);
    EXPECT_TRUE(divmod(a, d).second.is_zero());
    EXPECT_TRUE(divmod(b, d).second.is_zero());
    EXPECT_GE(d.degree(), common.degree());
    EXPECT_EQ(d.leading(), ExactScalar(1));
  }
}

TEST(Polynomial, TaylorShiftEvaluates) {
  Gen g(15);
  for (int i = 0; i < 50; ++i) {
    const Polynomial p = g.polynomial(4);
    const ExactScalar a = g.scalar(), h = g.scalar();
    EXPECT_EQ(p.taylor_shift(a).eval(h), p.eval(a + h));
  }
}

TEST(Roots, RecoverGaussianRootsWithMultiplicity) {
  Gen g(16);
  for (int i = 0; i < 60; ++i) {
    std::vector<Root> roots;
    for (const auto& s : g.distinct_sites(g.integer(1, 4))) roots.push_back({s, g.integer(1, 3)});
    const ExactScalar lead = g.nonzero_scalar();
    const Polynomial p = from_roots(roots, lead);
    const auto found = gaussian_roots(p);
    EXPECT_EQ(from_roots(found, lead), p);
    int total = 0;
    for (const auto& r : found) total += r.multiplicity;
    EXPECT_EQ(total, p.degree());
  }
}

TEST(Roots, RationalNonIntegerRoots) {
  const Polynomial p = Polynomial::linear(S("1/3+2/5i")) * Polynomial::linear(S("-7/2"));
  const auto r = gaussian_roots(p);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(from_roots(r, ExactScalar(1)), p);
}

TEST(Roots, IrrationalRootsRaise) {
  const Polynomial p(std::vector<ExactScalar>{ExactScalar(-2), ExactScalar(0), ExactScalar(1)});
  try {
    (void)gaussian_roots(p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IrreducibleDenominator);
  }
}

TEST(PartialFractions, ReexpandsToInput) {
  Gen g(17);
  for (int i = 0; i < 80; ++i) {
    const auto sites = g.distinct_sites(g.integer(0, 3));
    const RationalFunction r = g.rational_function(sites, 3, g.integer(-1, 2));
    const auto pf = partial_fractions(r);
    EXPECT_EQ(pf.reexpand(), r);
    for (std::size_t k = 1; k < pf.poles.size(); ++k) {
      const auto& a = pf.poles[k - 1];
      const auto& b = pf.poles[k];
      EXPECT_FALSE(a.location == b.location && a.order == b.order);
    }
  }
}

TEST(PartialFractions, KnownDecomposition) {
  // 1/(1 + 4z^2) = (i/4)/(z + i/2) - (i/4)/(z - i/2)
  const RationalFunction r(Polynomial(ExactScalar(1)),
                           Polynomial(std::vector<ExactScalar>{ExactScalar(1), ExactScalar(0), ExactScalar(4)}));
  const auto pf = partial_fractions(r);
  ASSERT_EQ(pf.poles.size(), 2u);
  for (const auto& t : pf.poles) {
    EXPECT_EQ(t.order, 1);
    EXPECT_EQ(t.coeff, t.location == S("1/2i") ? S("-1/4i") : S("1/4i"));
  }
}

TEST(Laurent, PrincipalPartMatchesConstruction) {
  Gen g(18);
  for (int i = 0; i < 80; ++i) {
    const ExactScalar a = g.site();
    const int m = g.integer(1, 5);
    std::vector<ExactScalar> c;
    RationalFunction r = g.polynomial(2);
    for (int j = 1; j <= m; ++j) {
      c.push_back(j == m ? g.nonzero_scalar() : g.scalar());
      r = r + RationalFunction::pole(a, j, c.back());
    }
    ExactScalar other = g.site();
    if (other != a) r = r + RationalFunction::pole(other, 2, ExactScalar(1));
    EXPECT_EQ(laurent_principal_part(r, a), c);
  }
}

TEST(Laurent, RegularPointHasEmptyPrincipalPart) {
  EXPECT_TRUE(laurent_principal_part(RationalFunction::pole(ExactScalar(1), 2, ExactScalar(3)), ExactScalar(0)).empty());
}

TEST(ChartChange, KnownValueAndInvolution) {
  // -2z dz = 2 w^{-3} dw
  EXPECT_EQ(change_chart_infinity(RationalFunction::monomial(ExactScalar(-2), 1)), RationalFunction::monomial(ExactScalar(2), -3));
  Gen g(19);
  for (int i = 0; i < 50; ++i) {
    const RationalFunction r = g.rational_function(g.distinct_sites(g.integer(0, 2)), 3, g.integer(-1, 2));
    EXPECT_EQ(change_chart_infinity(change_chart_infinity(r)), r);
  }
}

TEST(Calculus, ProductRule) {
  Gen g(20);
  for (int i = 0; i < 50; ++i) {
    const RationalFunction f = g.rational_function(g.distinct_sites(1), 2, 1);
    const RationalFunction h = g.rational_function(g.distinct_sites(1), 2, 1);
    EXPECT_EQ(differentiate(f * h), differentiate(f) * h + f * differentiate(h));
  }
}

TEST(Calculus, NumericDerivativeAgrees) {
  Gen g(21);
  const RationalFunction f = g.rational_function({ExactScalar(0), ExactScalar(1)}, 3, 2);
  const RationalFunction df = differentiate(f);
  const std::complex<double> z(0.3, 0.7);
  const double h = 1e-5;
  const auto numeric = (f.eval(z + h) - f.eval(z - h)) / (2 * h);
  EXPECT_LT(std::abs(numeric - df.eval(z)) / std::abs(df.eval(z)), 1e-7);
}

TEST(Binomial, GeneralisedCoefficients) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(5, 7), 0);
  for (long k = 0; k < 10; ++k) EXPECT_EQ(binomial(-1, k), k % 2 == 0 ? 1 : -1);
  EXPECT_EQ(binomial(-3, 2), 6);
}
