#include <gtest/gtest.h>

#include <cmath>

#include "ipd/error.hpp"
#include "ipd/homology.hpp"
#include "ipd/stokes.hpp"
#include "ipd/verify.hpp"
#include "generators.hpp"

using namespace ipd;
using testgen::Gen;

namespace {

ExactScalar S(const char* text) { return ExactScalar::parse(text); }

std::vector<Connection> examples() {
  return {gaussian_connection(), gamma_connection(S("1/2")), gamma_connection(S("1/3")), gamma_connection(S("3/4")),
          bessel_connection(ExactScalar(1))};
}

}  // namespace

TEST(Geometry, GaussianAtInfinity) {
  const auto g = stokes_geometry(local_data(gaussian_connection(), Point::infinity()));
  EXPECT_EQ(g.k, 2);
  EXPECT_EQ(g.stokes_rays.size(), 4u);
  ASSERT_EQ(g.decay_sectors.size(), 2u);
  EXPECT_GE(g.sector_of(0.0), 0);
  EXPECT_GE(g.sector_of(kPi), 0);
  EXPECT_EQ(g.sector_of(kPi / 2), -1);
}

TEST(Geometry, GammaDecaysAlongPositiveAxis) {
  const auto g = stokes_geometry(local_data(gamma_connection(S("1/2")), Point::infinity()));
  ASSERT_EQ(g.decay_sectors.size(), 1u);
  EXPECT_NEAR(std::remainder(g.decay_sectors[0].bisector(), kTwoPi), 0.0, 1e-12);
}

TEST(Geometry, RegularPointsRaise) {
  try {
    (void)stokes_geometry(local_data(gamma_connection(S("1/2")), Point::finite(ExactScalar(0))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIrregular);
  }
}

TEST(Geometry, RayAndSectorCounts) {
  Gen g(50);
  for (int k = 1; k <= 6; ++k) {
    for (int trial = 0; trial < 30; ++trial) {
      const Point p = g.coin() ? Point::infinity() : Point::finite(g.site());
      const auto geo = stokes_geometry(p, g.nonzero_scalar(9, 5), k);
      ASSERT_EQ(static_cast<int>(geo.stokes_rays.size()), 2 * k);
      ASSERT_EQ(static_cast<int>(geo.decay_sectors.size()), k);
      for (double r : geo.stokes_rays) EXPECT_NEAR(leading_decay_rate(geo, r), 0.0, 1e-9);
      for (const auto& s : geo.decay_sectors) {
        EXPECT_NEAR(s.end - s.start, kPi / k, 1e-12);
        EXPECT_LT(leading_decay_rate(geo, s.bisector()), 0.0);
        // the rate changes sign across each boundary
        EXPECT_GT(leading_decay_rate(geo, s.end + 0.5 * kPi / k), 0.0);
      }
    }
  }
}

TEST(Geometry, DecayMatchesSampledSection) {
  // along a decay bisector at infinity the leading exponential shrinks monotonically
  Gen g(51);
  for (int trial = 0; trial < 20; ++trial) {
    const ExactScalar a = g.nonzero_scalar(5, 3);
    const int k = g.integer(1, 4);
    const auto geo = stokes_geometry(Point::infinity(), a, k);
    const double theta = geo.decay_sectors[0].bisector();
    double prev = 1e300;
    for (double r = 1; r < 20; r += 1) {
      // w = 1/z, leading term a w^{-k} = a z^k
      const auto val = std::abs(std::exp(a.to_complex() * std::pow(std::polar(r, theta), k)));
      EXPECT_LE(val, prev);
      prev = val;
    }
  }
}

TEST(Cycles, CandidateBasisIsValidAndSized) {
  for (const auto& c : examples()) {
    const auto cycles = candidate_basis(c);
    EXPECT_EQ(static_cast<int>(cycles.size()), rd_profile(c).h1_xd) << c.label();
    for (const auto& cy : cycles) {
      const auto v = validate_cycle(c, cy);
      EXPECT_TRUE(v.valid) << c.label() << " " << cy.name << ": " << v.reason;
    }
  }
}

TEST(Cycles, CorpusCandidateBasesValidate) {
  for (const auto& c : random_corpus(52, 40)) {
    const auto cycles = candidate_basis(c);
    EXPECT_EQ(static_cast<int>(cycles.size()), rd_profile(c).h1_xd);
    for (const auto& cy : cycles) EXPECT_TRUE(validate_cycle(c, cy).valid) << c.alpha().to_string() << " " << cy.name;
  }
}

TEST(Cycles, PerturbedCyclesStayValid) {
  for (const auto& c : examples()) {
    for (const auto& cy : candidate_basis(c)) {
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto moved = perturb_waypoints(c, cy, 0.05, seed);
        EXPECT_TRUE(validate_cycle(c, moved).valid) << cy.name;
      }
    }
  }
}

TEST(Cycles, CircleWindsOnce) {
  const auto c = bessel_connection(ExactScalar(1));
  const auto circle = build_circle(c, ExactScalar(0));
  EXPECT_TRUE(circle.closed());
  EXPECT_NEAR(winding_number(circle.pieces, {0, 0}), 1.0, 1e-12);
  EXPECT_NEAR(winding_number(circle.pieces, {5, 0}), 0.0, 1e-12);
}

TEST(Cycles, NontrivialCircleIsNotACycle) {
  const auto c = gamma_connection(S("1/2"));
  const auto v = validate_cycle(c, build_circle(c, ExactScalar(0), 0.5));
  EXPECT_FALSE(v.valid);
}

TEST(Cycles, PathsThroughSingularPointsRejected) {
  const auto c = canonicalize(RationalFunction::pole(ExactScalar(0), 1, ExactScalar(1)) +
                                  RationalFunction::pole(ExactScalar(1), 1, ExactScalar(-1)),
                              "");
  const auto bad = build_custom(c, {LinePiece{{-1, 0.0005}, {0.5, 0.0005}}, LinePiece{{0.5, 0.0005}, {0.5, 1}},
                                    LinePiece{{0.5, 1}, {-1, 0.0005}}});
  EXPECT_FALSE(validate_cycle(c, bad).valid);
}

TEST(Cycles, AnchorsOnStokesRaysRejected) {
  const auto c = gaussian_connection();
  const auto g = stokes_geometry(local_data(c, Point::infinity()));
  try {
    (void)build_ray_pair(c, {Point::infinity(), g.stokes_rays[0]}, {Point::infinity(), kPi});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidAnchor);
  }
}

TEST(Cycles, RoutesKeepClearOfOtherPoints) {
  const auto c = canonicalize(RationalFunction::pole(ExactScalar(0), 2, ExactScalar(1)) +
                                  RationalFunction::pole(ExactScalar(1), 2, ExactScalar(1)) +
                                  RationalFunction::pole(ExactScalar(2), 2, ExactScalar(1)),
                              "");
  const CycleGeometry geo(c);
  const auto pieces = geo.route({-1, 0}, {3, 0});
  for (std::size_t i = 0; i < geo.finite_points().size(); ++i) {
    for (const auto& p : pieces) EXPECT_GE(piece_distance(p, geo.finite_points()[i]), 0.999 * geo.clearance(i));
  }
}
