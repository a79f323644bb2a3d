#include <gtest/gtest.h>

#include "ipd/error.hpp"
#include "ipd/homology.hpp"
#include "ipd/verify.hpp"

using namespace ipd;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

MonodromyData data(const std::vector<const char*>& exponents) {
  MonodromyData mu;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const ExactScalar e = S(exponents[i]);
    mu.entries.push_back({Point::finite(ExactScalar(static_cast<long>(i))), e, e.is_integer()});
  }
  return mu;
}

}  // namespace

TEST(Monodromy, GammaExponents) {
  const auto c = gamma_connection(S("1/2"));
  const auto dual = monodromy(c, Side::Dual);
  ASSERT_EQ(dual.entries.size(), 2u);
  EXPECT_EQ(dual.entries[0].exponent, S("1/2"));
  EXPECT_FALSE(dual.entries[0].trivial);
  EXPECT_EQ(dual.entries[1].exponent, S("-1/2"));
  const auto self = monodromy(c, Side::Self);
  EXPECT_EQ(self.entries[0].exponent, S("-1/2"));
  EXPECT_FALSE(dual.all_trivial());
}

TEST(Monodromy, IntegerResiduesAreTrivial) {
  EXPECT_TRUE(monodromy(gamma_connection(ExactScalar(3)), Side::Dual).all_trivial());
  EXPECT_TRUE(monodromy(bessel_connection(ExactScalar(1)), Side::Dual).all_trivial());
}

TEST(LocalSystem, TrivialAndNontrivial) {
  const auto trivial = local_system_homology(data({"0", "2", "-2"}), 3);
  EXPECT_EQ(trivial.h0, 1);
  EXPECT_EQ(trivial.h1, 2);
  const auto twisted = local_system_homology(data({"1/3", "2/3", "0"}), 3);
  EXPECT_EQ(twisted.h0, 0);
  EXPECT_EQ(twisted.h1, 1);
}

TEST(LocalSystem, MultipliersMustMultiplyToOne) {
  try {
    (void)local_system_homology(data({"1/3", "1/3"}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentMonodromy);
  }
}

TEST(LocalRapidDecay, Dimensions) {
  EXPECT_EQ(local_rd_dim({{3, 1}}), 2);
  EXPECT_EQ(local_rd_dim({{1, 1}}), 0);
  EXPECT_EQ(local_rd_dim({{2, 2}, {4, 1}}), 5);
  EXPECT_EQ(local_rd_dim({{3, 1}}, 2), 1);
  try {
    (void)local_rd_dim({{2, 1}}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonIntegralDimension);
  }
}

TEST(Profile, Bessel) {
  const auto p = rd_profile(bessel_connection(ExactScalar(1)));
  EXPECT_EQ(p.h0_u, 1);
  EXPECT_EQ(p.h1_u, 1);
  ASSERT_EQ(p.local.size(), 2u);
  EXPECT_EQ(p.local[0].dim, 1);
  EXPECT_EQ(p.local[1].dim, 1);
  EXPECT_EQ(p.h0_xd, 0);
  EXPECT_EQ(p.h1_xd, 2);
}

TEST(Profile, GammaAndGaussian) {
  const auto g = rd_profile(gamma_connection(S("1/3")));
  EXPECT_EQ(g.h1_u, 0);
  EXPECT_EQ(g.h0_u, 0);
  EXPECT_EQ(g.h1_xd, 1);
  const auto n = rd_profile(gaussian_connection());
  EXPECT_EQ(n.h0_u, 1);
  EXPECT_EQ(n.h1_u, 0);
  EXPECT_EQ(n.local_total(), 2);
  EXPECT_EQ(n.h1_xd, 1);
}

TEST(Profile, TrivialConnection) {
  const auto p = rd_profile(trivial_connection());
  EXPECT_EQ(p.h0_xd, 1);
  EXPECT_EQ(p.h1_xd, 0);
}

TEST(Profile, LongExactSequenceEulerCharacteristic) {
  // h0_XD - h1_XD = (h0_U - h1_U) - sum local
  for (const auto& c : random_corpus(40, 60)) {
    const auto p = rd_profile(c);
    EXPECT_EQ(p.h0_xd - p.h1_xd, p.h0_u - p.h1_u - p.local_total()) << c.alpha().to_string();
    EXPECT_GE(p.h1_xd, 0);
  }
}
