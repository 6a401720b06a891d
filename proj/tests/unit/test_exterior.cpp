#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracberno/error.hpp"
#include "fracberno/exterior.hpp"
#include "fracberno/kernels.hpp"

using namespace fracberno;

namespace {

ExteriorProblem problem(const DomainSpec& K, double lambda, double h, double half_width = 80.0 / 96.0) {
  ExteriorProblem p;
  p.K = K;
  p.lambda = lambda;
  p.grid = square_grid(2, {0, 0}, half_width, h);
  return p;
}

}  // namespace

TEST(Exterior, MeasureWeight) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 0.25);
  EXPECT_DOUBLE_EQ(measure_weight(2.0, g), std::numbers::pi / 4 * 4 * 0.0625);
}

TEST(Exterior, LambdaControlsOmega) {
  const DomainSpec K = DomainSpec::ball({0, 0}, 0.3);
  const FreeBoundaryResult big = minimize_exterior(problem(K, 50.0, 1.0 / 24));
  EXPECT_LE(big.omega.count(), dilate(big.pinned).count());
  const FreeBoundaryResult small = minimize_exterior(problem(K, 0.05, 1.0 / 24));
  EXPECT_GT(small.box_fill, 0.9);
  EXPECT_TRUE(small.touches_box);
}

TEST(Exterior, SolutionProperties) {
  const double h = 1.0 / 64;
  const FreeBoundaryResult r = minimize_exterior(problem(DomainSpec::ball({0, 0}, 0.5), 2.0, h, 1.25));
  EXPECT_FALSE(r.touches_box);
  EXPECT_TRUE(r.pinned.subset_of(r.omega));
  for (std::size_t i = 0; i < r.u.values.size(); ++i) {
    EXPECT_GE(r.u.values[i], 0.0);
    EXPECT_LE(r.u.values[i], 1.0);
    if (r.pinned[i]) EXPECT_EQ(r.u.values[i], 1.0);
  }
  const double wq = measure_weight(2.0, r.u.grid) * r.omega.count();
  EXPECT_NEAR(r.energies.measure, wq, 1e-12 * wq);
  EXPECT_NEAR(r.energies.total, r.energies.gagliardo + r.energies.measure, 1e-12 * r.energies.total);
  const GagliardoForm form(r.u.grid);
  EXPECT_NEAR(r.energies.gagliardo, form.energy(r.u.values), 1e-10 * r.energies.gagliardo);

  const DirectionalRates rates = exterior_rates(r, {0, 0}, 16);
  EXPECT_NEAR(rates.trace.radius[0], rates.trace.radius[4], 2 * h);
  EXPECT_NEAR(rates.mean, 2.0, 0.3);
}

TEST(Exterior, Monotonicity) {
  const double h = 1.0 / 32;
  const MonotonicityReport m = check_uniqueness_monotonicity(problem(DomainSpec::ball({0, 0}, 0.3), 2.0, h),
                                                             problem(DomainSpec::ball({0, 0}, 0.5), 2.0, h));
  EXPECT_TRUE(m.ok);
  EXPECT_LE(m.max_violation, 1e-6);
  EXPECT_EQ(m.omega_violations, 0u);
}

TEST(Exterior, StarshapedLevels) {
  std::vector<double> rho(64);
  for (int k = 0; k < 64; ++k) rho[k] = 0.4 + 0.15 * std::cos(4 * 2 * std::numbers::pi * k / 64);
  const FreeBoundaryResult r = minimize_exterior(problem(DomainSpec::star({0, 0}, rho), 2.0, 1.0 / 32));
  const auto flags = check_starshaped_levels(r, Ball{{0, 0}, 0.1}, {0.1, 0.3, 0.5, 0.7, 0.9});
  for (bool f : flags) EXPECT_TRUE(f);
}

TEST(Exterior, BoundaryOfDisk) {
  const Grid g = Grid::make(2, {-1, -1}, {1, 1}, 1.0 / 64);
  const CellMask disk = rasterize(DomainSpec::ball({0, 0}, 0.6), g);
  const BoundaryTrace t = extract_boundary(disk, {0, 0}, 32);
  ASSERT_EQ(t.radius.size(), 32u);
  for (std::size_t k = 0; k < t.radius.size(); ++k) {
    EXPECT_NEAR(t.radius[k], 0.6, g.h);
    EXPECT_NEAR(norm(t.normals[k]), 1.0, 1e-12);
    EXPECT_LT(dot(t.normals[k], unit_direction(t.theta[k])), 0.0);
  }
}

TEST(Exterior, BoundaryOfEllipse) {
  const Grid g = Grid::make(2, {-1, -1}, {1, 1}, 1.0 / 64);
  CellMask m(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 p = g.center(i);
    m.cells[i] = p.x * p.x / 0.36 + p.y * p.y / 0.09 < 1.0;
  }
  const BoundaryTrace t = extract_boundary(m, {0, 0}, 16);
  for (std::size_t k = 0; k < t.radius.size(); ++k) {
    const double c = std::cos(t.theta[k]), s = std::sin(t.theta[k]);
    const double exact = 1.0 / std::sqrt(c * c / 0.36 + s * s / 0.09);
    EXPECT_NEAR(t.radius[k], exact, 1.5 * g.h);
  }
}

TEST(Exterior, AnnulusNeedsMaskBoundary) {
  const Grid g = Grid::make(2, {-1, -1}, {1, 1}, 1.0 / 32);
  CellMask m(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = norm(g.center(i));
    m.cells[i] = r < 0.3 || (r > 0.5 && r < 0.8);
  }
  try {
    extract_boundary(m, {0, 0}, 16);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "use mask boundary");
  }
  EXPECT_FALSE(mask_boundary_points(m).empty());
}

TEST(Exterior, SqrtRateOfHalfSpaceProfile) {
  // u = psi(x) along the x axis has u ~ sqrt(x) near zero with unit coefficient.
  const Grid g = Grid::make(2, {-1, -1}, {1, 1}, 1.0 / 256);
  GridFunction u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = std::sqrt(std::max(0.0, g.center(i).x));
  const RateEstimate r = sqrt_rate(u, {0, 0}, {1, 0}, 2 * g.h, 0.2);
  EXPECT_NEAR(r.lambda_hat, 1.0, 1e-3);
  EXPECT_LT(r.residual, 1e-2);

  GridFunction lin(g);
  for (std::size_t i = 0; i < g.size(); ++i) lin.values[i] = std::max(0.0, g.center(i).x);
  EXPECT_GT(sqrt_rate(lin, {0, 0}, {1, 0}, 2 * g.h, 0.2).residual, 0.05);

  EXPECT_THROW(sqrt_rate(u, {0, 0}, {1, 0}, 0.5 * g.h, 0.2), Error);
  EXPECT_THROW(sqrt_rate(u, {0, 0}, {1, 0}, 2 * g.h, 1.5), Error);
}

TEST(Exterior, HalfSpacePsiProfile) {
  const Grid g = Grid::make(1, {-2, 0}, {2, 0}, 1.0 / 512);
  GridFunction u(g);
  for (std::size_t i = 0; i < g.size(); ++i) u.values[i] = half_space_psi(g.center(i).x);
  const RateEstimate r = sqrt_rate(u, {0, 0}, {1, 0}, 2 * g.h, 0.05);
  EXPECT_NEAR(r.lambda_hat, 1.0, 1e-3);
}

TEST(Exterior, DistanceToMask) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 0.25);
  CellMask m(g);
  m.cells[g.index(0, 0)] = 1;
  EXPECT_DOUBLE_EQ(distance_to_mask(m, {0.1, 0.1}), 0.0);
  EXPECT_NEAR(distance_to_mask(m, {0.75, 0.25}), 0.5, 1e-12);
  EXPECT_NEAR(distance_to_mask(m, {0.5, 0.5}), std::hypot(0.25, 0.25), 1e-12);
}
