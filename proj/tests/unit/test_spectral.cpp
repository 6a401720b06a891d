#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracberno/error.hpp"
#include "fracberno/kernels.hpp"
#include "fracberno/spectral.hpp"

using namespace fracberno;

namespace {

CylinderOptions coarse(double h = 1.0 / 16) {
  CylinderOptions o;
  o.h = h;
  return o;
}

}  // namespace

TEST(Cylinder, MaximumPrincipleAndMonotonicity) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  const CylinderSolution s = solve_cylinder(cg, ball_polygon({{0, 0}, 0.4}));
  EXPECT_LE(s.residual, 1e-8);
  for (double v : s.v) {
    EXPECT_GE(v, -1e-9);
    EXPECT_LE(v, 1.0 + 1e-9);
  }
  const Grid& g = cg.cross_section();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (s.K_mask[i]) EXPECT_EQ(s.trace[i], 1.0);
    if (!cg.domain_mask()[i]) EXPECT_EQ(s.trace[i], 0.0);
  }
  EXPECT_LE(axial_monotonicity_violation(cg, s), 1e-12);
}

TEST(Cylinder, SingleCellK) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  const double h = cg.cross_section().h;
  // Square around the centre cell, so exactly one cell centre lies inside.
  const Vec2 c = cg.cross_section().center(*cg.cross_section().locate({0.01, 0.01}));
  const Polygon K{{c + Vec2{-0.4 * h, -0.4 * h}, c + Vec2{0.4 * h, -0.4 * h}, c + Vec2{0.4 * h, 0.4 * h},
                   c + Vec2{-0.4 * h, 0.4 * h}}};
  const CylinderSolution s = solve_cylinder(cg, K);
  EXPECT_EQ(s.K_mask.count(), 1u);
  for (double v : s.trace) EXPECT_LE(v, 1.0);
}

TEST(Cylinder, MarginAndHeight) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  EXPECT_NEAR(cg.height(), 4.0, 1e-12);
  try {
    solve_cylinder(cg, ball_polygon({{0, 0}, 0.99}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "margin");
  }
}

TEST(Cylinder, TruncationHeightInsensitive) {
  CylinderOptions a = coarse(), b = coarse();
  b.height_factor = 4.0;
  b.levels = 56;
  const DomainSpec D = DomainSpec::ball({0, 0}, 1.0);
  const Polygon K = ball_polygon({{0, 0}, 0.4});
  const CylinderGrid ga(D, a), gb(D, b);
  const CylinderSolution sa = solve_cylinder(ga, K), sb = solve_cylinder(gb, K);
  double diff = 0.0;
  for (std::size_t i = 0; i < sa.trace.size(); ++i) diff = std::max(diff, std::abs(sa.trace[i] - sb.trace[i]));
  EXPECT_LE(diff, 1e-4);
}

TEST(Spectral, HugeLambdaAdmitsAnything) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  const SubsolutionState s = evaluate_subsolution(cg, ball_polygon({{0, 0}, 0.5}));
  EXPECT_TRUE(admissibility(s, 1e6).admissible);
  EXPECT_FALSE(admissibility(s, 1e-3).admissible);
  EXPECT_TRUE(satisfies_distance_bound(s, 1e6, cg.cross_section().h));
  EXPECT_NEAR(s.wall_distance, 0.5, 1e-2);
  EXPECT_GE(s.metric, s.sup_ratio);
}

TEST(Spectral, BallInBiggerBall) {
  // B_1 inside B_2 passes at 1.1 times the explicit bound for r = 2.
  const double h = 1.0 / 24;
  const DomainSpec D = DomainSpec::ball({0, 0}, 2.0);
  const CylinderGrid cg(D, coarse(h));
  const SubsolutionState s = evaluate_subsolution(cg, ball_polygon({{0, 0}, 1.0}));
  const double bound = spectral_ball_upper_bound(2, 2.0);
  EXPECT_TRUE(admissibility(s, 1.1 * bound).admissible) << "metric " << s.metric << " bound " << bound;
  EXPECT_TRUE(satisfies_distance_bound(s, 1.1 * bound, h));
}

TEST(Spectral, SupportPolygonNesting) {
  SupportPolygon P = SupportPolygon::from_polygon(ball_polygon({{0, 0}, 0.3}), 32);
  const double a0 = signed_area(P.polygon());
  EXPECT_NEAR(a0, std::numbers::pi * 0.09, 0.01);
  const auto before = P.support;
  P.include({0.6, 0.0});
  for (int m = 0; m < P.directions(); ++m) EXPECT_GE(P.support[m], before[m]);
  EXPECT_GT(signed_area(P.polygon()), a0);
  EXPECT_TRUE(is_convex(P.polygon()));
  const auto mid = P.support;
  P.dilate(0.05);
  for (int m = 0; m < P.directions(); ++m) EXPECT_NEAR(P.support[m], mid[m] + 0.05, 1e-12);
  for (const Vec2& v : P.polygon().vertices) {
    double best = -1e300;
    for (int m = 0; m < P.directions(); ++m) best = std::max(best, dot(v, P.normal(m)) - P.support[m]);
    EXPECT_LE(best, 1e-9);
  }
}

TEST(Spectral, ClosureOfOneSet) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  const Polygon K = ball_polygon({{0, 0}, 0.4}, 32);
  const double lambda = 3.0;
  const ClosureResult r = convex_closure(cg, {K}, lambda);
  EXPECT_NEAR(signed_area(r.state.K), signed_area(K), 1e-12);
  const SubsolutionState direct = evaluate_subsolution(cg, K);
  EXPECT_NEAR(r.state.metric, direct.metric, 1e-9);
  EXPECT_EQ(r.admissible, admissibility(direct, lambda).admissible);
}

TEST(Spectral, ClosureOfTwoDisks) {
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), coarse());
  const ClosureResult r =
      convex_closure(cg, {ball_polygon({{-0.2, 0}, 0.3}), ball_polygon({{0.2, 0}, 0.3})}, 3.0);
  EXPECT_TRUE(is_convex(r.state.K));
  EXPECT_NEAR(r.state.wall_distance, 0.5, 2e-2);
  EXPECT_FALSE(r.violation);
}

TEST(Spectral, NonconvexDomainRejectedByBm) {
  const DomainSpec L = DomainSpec::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  LambdaSOptions o;
  o.cylinder.h = 1.0 / 8;
  EXPECT_THROW(bm_verify(L, DomainSpec::ball({0, 0}, 1.0), {0.5}, o), Error);
}
