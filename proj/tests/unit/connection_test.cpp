#include <gtest/gtest.h>

#include "ipd/connection.hpp"
#include "ipd/error.hpp"
#include "ipd/verify.hpp"
#include "generators.hpp"

using namespace ipd;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

RationalFunction z() { return RationalFunction::monomial(ExactScalar(1), 1); }

}  // namespace

TEST(Point, ParseAndPrint) {
  EXPECT_TRUE(Point::parse("inf").at_infinity);
  EXPECT_TRUE(Point::parse("infinity").at_infinity);
  EXPECT_EQ(Point::parse("1/2+i"), Point::finite(S("1/2+i")));
  EXPECT_EQ(Point::infinity().to_string(), "inf");
  EXPECT_TRUE(point_less(Point::finite(ExactScalar(5)), Point::infinity()));
}

TEST(Profile, Gamma) {
  const auto c = gamma_connection(S("1/3"));
  ASSERT_EQ(c.singular_set().size(), 2u);
  const auto p = singular_profile(c);
  EXPECT_EQ(p[0].point, Point::finite(ExactScalar(0)));
  EXPECT_EQ(p[0].pole_order, 1);
  EXPECT_EQ(p[0].residue, S("1/3"));
  EXPECT_FALSE(p[0].irregular());
  EXPECT_TRUE(p[1].point.at_infinity);
  EXPECT_EQ(p[1].pole_order, 2);
  EXPECT_EQ(p[1].residue, S("-1/3"));
  // -t = -1/w
  ASSERT_EQ(p[1].exponential_part.size(), 1u);
  EXPECT_EQ(p[1].exponential_part[0], (ExponentialTerm{-1, ExactScalar(-1)}));
}

TEST(Profile, Gaussian) {
  const auto p = singular_profile(gaussian_connection());
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].pole_order, 3);
  EXPECT_EQ(p[0].residue, ExactScalar(0));
  ASSERT_EQ(p[0].exponential_part.size(), 1u);
  EXPECT_EQ(p[0].exponential_part[0], (ExponentialTerm{-2, ExactScalar(-1)}));
}

TEST(Profile, Bessel) {
  const auto p = singular_profile(bessel_connection(ExactScalar(1)));
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].pole_order, 2);
  EXPECT_EQ(p[1].pole_order, 2);
  EXPECT_EQ(p[0].residue, ExactScalar(0));
}

TEST(Profile, TrivialConnection) {
  const auto c = trivial_connection();
  ASSERT_EQ(c.singular_set().size(), 1u);
  EXPECT_TRUE(c.singular_set()[0].at_infinity);
  EXPECT_EQ(singular_profile(c)[0].pole_order, 0);
}

TEST(Profile, ResiduesSumToZero) {
  for (const auto& c : random_corpus(5, 60)) {
    ExactScalar total;
    for (const auto& sp : singular_profile(c)) total += sp.residue;
    EXPECT_TRUE(total.is_zero()) << c.alpha().to_string();
  }
}

TEST(Profile, ExponentialPartDifferentiatesToPrincipalPart) {
  for (const auto& c : random_corpus(6, 60)) {
    for (const auto& sp : singular_profile(c)) {
      // d/dw sum coeff w^power = sum_{j>=2} c_j w^{-j}
      std::vector<ExactScalar> rebuilt(sp.principal_part.size());
      if (!rebuilt.empty()) rebuilt[0] = sp.residue;
      for (const auto& t : sp.exponential_part) {
        const int j = 1 - t.power;
        rebuilt.at(static_cast<std::size_t>(j - 1)) += t.coeff * ExactScalar(t.power);
      }
      EXPECT_EQ(rebuilt, sp.principal_part) << c.alpha().to_string() << " at " << sp.point.to_string();
      EXPECT_EQ(sp.pole_order, static_cast<int>(sp.principal_part.size()));
    }
  }
}

TEST(Antiderivative, DifferentiatesBackToAlpha) {
  for (const auto& c : random_corpus(7, 60)) {
    const auto a = global_antiderivative(c);
    RationalFunction d = differentiate(a.f_global);
    for (const auto& l : a.log_terms) d = d + RationalFunction::pole(l.location, 1, l.residue);
    EXPECT_EQ(d, c.alpha());
  }
}

TEST(Canonicalize, RejectsIrrationalPoles) {
  const RationalFunction alpha(Polynomial(ExactScalar(1)),
                               Polynomial(std::vector<ExactScalar>{ExactScalar(-2), ExactScalar(0), ExactScalar(1)}));
  try {
    (void)canonicalize(alpha, "sqrt2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IrreducibleDenominator);
  }
}

TEST(Canonicalize, ReducesCommonFactors) {
  const RationalFunction raw(Polynomial(std::vector<ExactScalar>{ExactScalar(0), ExactScalar(2)}),
                             Polynomial(std::vector<ExactScalar>{ExactScalar(0), ExactScalar(0), ExactScalar(2)}));
  const auto c = canonicalize(raw, "");
  EXPECT_EQ(c.alpha(), RationalFunction::pole(ExactScalar(0), 1, ExactScalar(1)));
  EXPECT_EQ(c.singular_set().size(), 2u);
}

TEST(Dualize, NegatesAndIsAnInvolution) {
  const auto c = bessel_connection(ExactScalar(1));
  const auto d = dualize(c);
  EXPECT_EQ(d.alpha(), -c.alpha());
  EXPECT_EQ(dualize(d), c);
  EXPECT_NE(d.label(), c.label());
}

TEST(StandardConnections, Forms) {
  const auto s = S("1/2");
  EXPECT_EQ(gamma_connection(s).alpha(), RationalFunction(ExactScalar(-1)) + RationalFunction::pole(ExactScalar(0), 1, s));
  EXPECT_EQ(gaussian_connection().alpha(), RationalFunction(ExactScalar(-2)) * z());
  const auto half = S("1/2");
  EXPECT_EQ(bessel_connection(ExactScalar(1)).alpha(),
            RationalFunction(half) + RationalFunction::monomial(half, -2));
}
