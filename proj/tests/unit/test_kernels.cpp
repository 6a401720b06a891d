#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "fracberno/error.hpp"
#include "fracberno/kernels.hpp"

using namespace fracberno;

namespace {

constexpr double kPi = std::numbers::pi;

double j2(double x, double y) {
  const std::vector<double> p{x, y};
  return profile_j(2, p);
}

}  // namespace

TEST(Kernels, NormalizationConstants) {
  EXPECT_NEAR(normalization_A(1), 1.0 / (2 * kPi), 1e-12);
  EXPECT_NEAR(normalization_A(2), 1.0 / (4 * kPi), 1e-12);
  EXPECT_NEAR(kernel_constants(2).C0, 2 * std::sqrt(2.0) / kPi, 1e-12);
  EXPECT_NEAR(kernel_constants(3).C0, std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(kernel_constants(2).c_tilde, 6.0 / kPi, 6.0 / kPi * 1e-4);
  EXPECT_NEAR(kernel_constants(3).c_tilde, 2.31, 0.01);
  EXPECT_TRUE(std::isnan(kernel_constants(1).C0));
}

TEST(Kernels, PoissonValuesAndScaling) {
  EXPECT_NEAR(poisson_kernel(1, {0, 0}, 1.0), 1.0 / kPi, 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int d : {1, 2}) {
    for (int k = 0; k < 10; ++k) {
      const Vec2 x{u(rng), d == 2 ? u(rng) : 0.0};
      const double y = std::abs(u(rng)) + 0.1;
      EXPECT_NEAR(poisson_kernel(d, x * 2.0, 2 * y), std::pow(2.0, -d) * poisson_kernel(d, x, y), 1e-14);
    }
  }
  EXPECT_THROW(poisson_kernel(1, {0, 0}, 0.0), Error);
}

TEST(Kernels, PoissonUnitMass) {
  boost::math::quadrature::exp_sinh<double> q;
  for (double y : {0.1, 1.0, 7.0}) {
    const double m1 = 2 * q.integrate([&](double x) { return poisson_kernel(1, {x, 0}, y); });
    const double m2 = q.integrate([&](double r) { return 2 * kPi * r * poisson_kernel(2, {r, 0}, y); });
    EXPECT_NEAR(m1, 1.0, 1e-6);
    EXPECT_NEAR(m2, 1.0, 1e-6);
  }
}

TEST(Kernels, PoissonSemigroup) {
  boost::math::quadrature::tanh_sinh<double> q;
  for (auto [y1, y2] : {std::pair{0.3, 0.5}, std::pair{1.0, 1.0}, std::pair{0.2, 2.0}}) {
    const double x = 0.7;
    const double conv = q.integrate(
        [&](double z) { return poisson_kernel(1, {x - z, 0}, y1) * poisson_kernel(1, {z, 0}, y2); },
        -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(conv, poisson_kernel(1, {x, 0}, y1 + y2), 1e-4);
  }
}

TEST(Kernels, HarmonicExtension) {
  const double h = 1.0 / 512;
  const Grid g = Grid::make(1, {-1, 0}, {1, 0}, h);
  GridFunction u(g);
  std::fill(u.values.begin(), u.values.end(), 1.0);
  for (double y : {0.25, 1.0, 3.0}) {
    EXPECT_NEAR(harmonic_extension(u, {0, 0}, y), 2 / kPi * std::atan(1 / y), 1e-5);
  }
  GridFunction zero(g);
  EXPECT_EQ(harmonic_extension(zero, {0.1, 0}, 0.5), 0.0);
  try {
    harmonic_extension(u, {0, 0}, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "evaluate trace directly");
  }
  const Grid big = Grid::make(1, {-200, 0}, {200, 0}, 1.0 / 8);
  GridFunction one(big);
  std::fill(one.values.begin(), one.values.end(), 1.0);
  EXPECT_NEAR(harmonic_extension(one, {0, 0}, 0.5), 1.0, 5e-3);
}

TEST(Kernels, ProfileIClosedFormD2) {
  for (double r : {1.01, 1.5, 2.0, 5.0, 40.0}) {
    EXPECT_NEAR(profile_I_radial(2, r), std::atan(1 / std::sqrt(r * r - 1)), 1e-10);
  }
  EXPECT_THROW(profile_I_radial(2, 1.0), Error);
}

TEST(Kernels, ProfileJ) {
  EXPECT_NEAR(j2(1, 0), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(j2(0, 0), 1.0, 1e-12);
  EXPECT_LT(j2(100, 0), 0.02);
  // continuity across the sphere |y + e1| = 1
  for (double th : {0.3, 1.2, 2.5}) {
    const double in = j2(-1 + 0.999999 * std::cos(th), 0.999999 * std::sin(th));
    const double out = j2(-1 + 1.000001 * std::cos(th), 1.000001 * std::sin(th));
    EXPECT_NEAR(in, out, 1e-2);
    EXPECT_NEAR(out, 1.0, 1e-2);
  }
  // radial about -e1
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (double r : {1.3, 2.0, 4.0}) {
    const double ref = j2(-1 + r, 0);
    for (int k = 0; k < 5; ++k) {
      const double t = ang(rng);
      EXPECT_NEAR(j2(-1 + r * std::cos(t), r * std::sin(t)), ref, 1e-8);
    }
  }
  // d = 3 against the same radial structure
  const std::vector<double> a{1, 0, 0}, b{-1, 0, 2};
  EXPECT_NEAR(profile_j(3, a), profile_j(3, b), 1e-8);
}

TEST(Kernels, Q1Rate) {
  const std::vector<double> t{0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  const RateFit f2 = q1_sqrt_rate(2, t);
  EXPECT_NEAR(f2.C, 2 * std::sqrt(2.0) / kPi, 0.02 * 2 * std::sqrt(2.0) / kPi);
  const RateFit f3 = q1_sqrt_rate(3, t);
  EXPECT_NEAR(f3.C, std::sqrt(2.0), 0.02 * std::sqrt(2.0));
  std::vector<double> fine;
  for (int k = 0; k < 14; ++k) fine.push_back(0.1 * std::pow(0.6, k));
  EXPECT_NEAR(q1_sqrt_rate(2, fine).C, f2.C, 0.02 * f2.C);
  EXPECT_THROW(q1_sqrt_rate(2, std::vector<double>(6, 0.01)), Error);
  EXPECT_THROW(q1_sqrt_rate(2, std::vector<double>{0.1, 0.05, 0.01}), Error);
  EXPECT_THROW(q1_sqrt_rate(2, std::vector<double>{0.5, 0.1, 0.05, 0.01, 0.001}), Error);
}

TEST(Kernels, SpectralBallBound) {
  EXPECT_NEAR(spectral_ball_upper_bound(2, 1), 6 / kPi, 6 / kPi * 1e-4);
  EXPECT_NEAR(spectral_ball_upper_bound(3, 1), 2.31, 0.01);
  EXPECT_NEAR(spectral_ball_upper_bound(2, 4), 3 / kPi, 3 / kPi * 1e-4);
  EXPECT_THROW(spectral_ball_upper_bound(1, 1), Error);
}

TEST(Kernels, Q1Domination) {
  std::vector<std::vector<double>> ray;
  for (double t : {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) ray.push_back({t, 0});
  const DominationReport r2 = q1_boundary_domination_check(2, ray);
  EXPECT_TRUE(r2.ok);
  EXPECT_LE(r2.max_ratio, 1.0 + 1e-4);
  EXPECT_GT(r2.max_ratio, 0.95);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0, 1);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<std::vector<double>> pts;
  while (pts.size() < 200) {
    std::vector<double> p{n(rng), n(rng), n(rng)};
    const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    const double r = 10 * std::cbrt(u(rng));
    for (double& c : p) c *= r / len;
    const double d = std::sqrt((p[0] + 1) * (p[0] + 1) + p[1] * p[1] + p[2] * p[2]) - 1;
    if (d >= 1e-3) pts.push_back(p);
  }
  EXPECT_TRUE(q1_boundary_domination_check(3, pts).ok);
  EXPECT_THROW(q1_boundary_domination_check(2, {{-1, 0}}), Error);
}

TEST(Kernels, HalfSpacePsi) {
  EXPECT_EQ(half_space_psi(-0.5), 0.0);
  EXPECT_DOUBLE_EQ(half_space_psi(0.25), 0.5);
  // Re sqrt(x + i y) is harmonic with boundary trace sqrt(x_+).
  for (auto [x, y] : {std::pair{0.0, 0.5}, std::pair{0.5, 0.2}, std::pair{-0.5, 1.0}, std::pair{2.0, 2.0}}) {
    const PsiValue v = half_space_Psi(x, y);
    const double exact = std::sqrt((std::hypot(x, y) + x) / 2);
    EXPECT_NEAR(v.value, exact, v.tail + 1e-6);
    EXPECT_LE(std::abs(v.value - exact), v.tail + 1e-6);
  }
}
