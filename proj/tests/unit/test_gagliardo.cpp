#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "fracberno/error.hpp"
#include "fracberno/gagliardo.hpp"
#include "fracberno/kernels.hpp"

using namespace fracberno;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(const Grid& g, const std::function<double(Vec2)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.center(i));
  return v;
}

// Sum over pairs straight from weight(), no convolution involved.
double dense_energy(const GagliardoForm& form, const std::vector<double>& u) {
  const Grid& g = form.grid();
  double q = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    q += form.tails()[i] * u[i] * u[i];
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const double d = u[i] - u[j];
      if (d != 0.0) q += form.weight(g.ix(j) - g.ix(i), g.iy(j) - g.iy(i)) * d * d;
    }
  }
  return q;
}

}  // namespace

TEST(Gagliardo, ZeroAndSymmetry) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 16);
  const GagliardoForm form(g);
  std::vector<double> u(g.size(), 0.0);
  EXPECT_EQ(form.energy(u), 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> uni(0, 1);
  for (double& x : u) x = uni(rng);
  std::vector<double> neg(u), shifted(u);
  for (double& x : neg) x = -x;
  for (double& x : shifted) x += 0.3;
  EXPECT_NEAR(form.energy(neg), form.energy(u), 1e-12 * form.energy(u));
  EXPECT_GT(form.energy(shifted), form.energy(u));
}

TEST(Gagliardo, FftMatchesDensePairSum) {
  for (int d : {1, 2}) {
    const Grid g = d == 1 ? Grid::make(1, {0, 0}, {1, 0}, 1.0 / 40) : Grid::make(2, {0, 0}, {1, 1}, 1.0 / 12);
    const GagliardoForm form(g);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> uni(-1, 1);
    std::vector<double> u(g.size());
    for (double& x : u) x = uni(rng);
    EXPECT_NEAR(form.energy(u), dense_energy(form, u), 1e-10 * dense_energy(form, u));
  }
}

TEST(Gagliardo, WeightsFarField) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 16);
  const GagliardoForm form(g);
  const double A = normalization_A(2), h = g.h;
  for (auto [dx, dy] : {std::pair{4, 0}, std::pair{3, 3}, std::pair{7, -2}}) {
    const double r = h * std::hypot(dx, dy);
    EXPECT_NEAR(form.weight(dx, dy), 2 * A * std::pow(h, 4) / std::pow(r, 3), 1e-14);
  }
  EXPECT_EQ(form.weight(0, 0), 0.0);
  EXPECT_NEAR(form.weight(1, 2), form.weight(-1, -2), 1e-15 * form.weight(1, 2));
}

TEST(Gagliardo, TailsMatchPolarQuadrature) {
  // t_i = 2 A_2 h^2 * int_0^{2 pi} dtheta / R(theta), R the distance to the box edge along theta.
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 8);
  const GagliardoForm form(g);
  boost::math::quadrature::tanh_sinh<double> q;
  for (std::size_t i : {std::size_t{0}, std::size_t{9}, std::size_t{27}, g.size() - 1}) {
    const Vec2 x = g.center(i);
    const std::vector<Vec2> corners{{1, 0}, {1, 1}, {0, 1}, {0, 0}};
    std::vector<double> cuts;
    for (const Vec2& c : corners) {
      double a = std::atan2(c.y - x.y, c.x - x.x);
      if (a < 0) a += 2 * kPi;
      cuts.push_back(a);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(cuts.front() + 2 * kPi);
    auto inv_r = [&](double t) {
      const double cx = std::cos(t), sy = std::sin(t);
      double R = 1e300;
      if (cx > 0) R = std::min(R, (1 - x.x) / cx);
      if (cx < 0) R = std::min(R, -x.x / cx);
      if (sy > 0) R = std::min(R, (1 - x.y) / sy);
      if (sy < 0) R = std::min(R, -x.y / sy);
      return 1.0 / R;
    };
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) integral += q.integrate(inv_r, cuts[k], cuts[k + 1]);
    const double oracle = 2 * normalization_A(2) * g.h * g.h * integral;
    EXPECT_NEAR(form.tails()[i], oracle, 1e-9 * oracle);
  }
}

TEST(Gagliardo, ConvergesToSeminormD1) {
  // A_1 [exp(-x^2)]_1 = (1 / 2 pi) int |xi| pi exp(-xi^2 / 2) dxi = 1.
  FormOptions opts;
  opts.max_cells_per_axis = 1000;
  const Grid g = Grid::make(1, {-6, 0}, {6, 0}, 1.0 / 32);
  const GagliardoForm form(g, opts);
  const double q = form.energy(sample(g, [](Vec2 p) { return std::exp(-p.x * p.x); }));
  EXPECT_NEAR(q, 1.0, 0.03);
}

TEST(Gagliardo, ConvergesToSeminormD2) {
  // A_2 [exp(-|x|^2)]_1 = (pi / 2)^{3/2}.
  const Grid g = Grid::make(2, {-4, -4}, {4, 4}, 1.0 / 16);
  const GagliardoForm form(g);
  const double q = form.energy(sample(g, [](Vec2 p) { return std::exp(-dot(p, p)); }));
  const double exact = std::pow(kPi / 2, 1.5);
  EXPECT_NEAR(q, exact, 0.03 * exact);
}

TEST(Gagliardo, GradientFiniteDifferences) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 12);
  const GagliardoForm form(g);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uni(0, 1);
  std::vector<double> u(g.size()), grad(g.size());
  for (double& x : u) x = uni(rng);
  form.gradient(u, grad);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  const double eps = 1e-5;
  for (int k = 0; k < 20; ++k) {
    const std::size_t i = pick(rng);
    auto up = u, dn = u;
    up[i] += eps;
    dn[i] -= eps;
    const double fd = (form.energy(up) - form.energy(dn)) / (2 * eps);
    EXPECT_LE(std::abs(grad[i] - fd), 1e-6 * (1 + std::abs(grad[i])));
  }
}

TEST(Gagliardo, ConstantWithoutTailsHasZeroGradient) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 10);
  FormOptions opts;
  opts.exterior_tails = false;
  const GagliardoForm form(g, opts);
  std::vector<double> u(g.size(), 0.7), grad(g.size());
  form.gradient(u, grad);
  for (double x : grad) EXPECT_NEAR(x, 0.0, 1e-12);
}

TEST(Gagliardo, DisjointBumpsCrossTerm) {
  const Grid g = Grid::make(2, {0, 0}, {4, 1}, 1.0 / 8);
  const GagliardoForm form(g);
  auto u1 = sample(g, [](Vec2 p) { return std::max(0.0, 0.4 - norm(p - Vec2{0.5, 0.5})); });
  auto u2 = sample(g, [](Vec2 p) { return std::max(0.0, 0.4 - norm(p - Vec2{3.5, 0.5})); });
  std::vector<double> sum(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sum[i] = u1[i] + u2[i];
  double cross = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (u1[i] != 0 && u2[j] != 0) cross += form.weight(g.ix(j) - g.ix(i), g.iy(j) - g.iy(i)) * u1[i] * u2[j];
    }
  }
  EXPECT_NEAR(form.energy(sum), form.energy(u1) + form.energy(u2) - 2 * cross, 1e-12);
}

TEST(Gagliardo, QuadraticInequalities) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 10);
  const GagliardoForm form(g);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> uni(0, 1);
  std::vector<double> u(g.size()), v(g.size()), w(g.size()), cut(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    u[i] = uni(rng);
    v[i] = uni(rng);
    w[i] = u[i] + v[i];
    cut[i] = std::min(u[i], 0.5);
  }
  EXPECT_LE(form.energy(w), 2 * form.energy(u) + 2 * form.energy(v));
  EXPECT_LE(form.energy(cut), form.energy(u));
}

TEST(Gagliardo, GridTooLarge) {
  try {
    GagliardoForm form(Grid::make(2, {0, 0}, {2, 2}, 1.0 / 100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "grid too large");
  }
}

TEST(Gagliardo, HarmonicAllPinned) {
  const Grid g = Grid::make(1, {0, 0}, {1, 0}, 1.0 / 8);
  const GagliardoForm form(g);
  GridFunction u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    u0.values[i] = 0.1 * i;
    u0.fixed[i] = 1;
  }
  EXPECT_EQ(solve_harmonic(form, u0).u.values, u0.values);
}

TEST(Gagliardo, HarmonicSymmetryAndComparison) {
  FormOptions opts;
  opts.max_cells_per_axis = 600;
  const Grid g = Grid::make(1, {-4, 0}, {4, 0}, 1.0 / 64);
  const GagliardoForm form(g, opts);
  auto pinned = [&](double a) {
    GridFunction u0(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (std::abs(g.center(i).x) < a) {
        u0.values[i] = 1.0;
        u0.fixed[i] = 1;
      }
    }
    return u0;
  };
  const HarmonicSolve small = solve_harmonic(form, pinned(0.25));
  EXPECT_LE(small.residual, 1e-8);
  const auto& u = small.u.values;
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n / 2; ++i) {
    EXPECT_NEAR(u[i], u[n - 1 - i], 1e-8);
    EXPECT_LE(u[i], u[i + 1] + 1e-10);
    EXPECT_GE(u[i], -1e-10);
    EXPECT_LE(u[i], 1 + 1e-10);
  }
  const HarmonicSolve big = solve_harmonic(form, pinned(0.5));
  for (std::size_t i = 0; i < n; ++i) EXPECT_LE(u[i], big.u.values[i] + 1e-10);

  const GridFunction lap = apply_half_laplacian(form, small.u);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!small.u.is_fixed(i)) worst = std::max(worst, std::abs(lap.values[i]));
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Gagliardo, HarmonicNeedsPins) {
  const Grid g = Grid::make(1, {0, 0}, {1, 0}, 1.0 / 8);
  const GagliardoForm form(g);
  EXPECT_THROW(solve_harmonic(form, GridFunction(g)), Error);
}

TEST(Gagliardo, HalfLaplacianSpike) {
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 9);
  const GagliardoForm form(g);
  GridFunction u(g);
  const std::size_t c = g.index(4, 4);
  u.values[c] = 1.0;
  const GridFunction lap = apply_half_laplacian(form, u);
  EXPECT_GT(lap.values[c], 0.0);
  EXPECT_LT(lap.values[g.index(5, 4)], 0.0);
  EXPECT_LT(lap.values[g.index(4, 3)], 0.0);
}

TEST(Gagliardo, HalfLaplacianOfGaussian) {
  // Fourier multiplier |xi|: (1 / pi) int_0^inf xi sqrt(pi) exp(-xi^2 / 4) cos(x xi) dxi.
  FormOptions opts;
  opts.max_cells_per_axis = 4096;
  const Grid g = Grid::make(1, {-8, 0}, {8, 0}, 1.0 / 128);
  const GagliardoForm form(g, opts);
  GridFunction u(g);
  u.values = sample(g, [](Vec2 p) { return std::exp(-p.x * p.x); });
  const GridFunction lap = apply_half_laplacian(form, u);
  boost::math::quadrature::exp_sinh<double> q;
  double scale = 0.0;
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double exact = q.integrate([&](double xi) {
      return xi * std::sqrt(kPi) * std::exp(-xi * xi / 4) * std::cos(x * xi) / kPi;
    });
    pts.push_back({x, exact});
    scale = std::max(scale, std::abs(exact));
  }
  for (auto [x, exact] : pts) {
    const double got = interpolate(g, lap.values, {x, 0});
    EXPECT_NEAR(got, exact, 0.05 * scale) << "x = " << x;
  }
}

TEST(Gagliardo, EnergyIdentityEdgeCases) {
  const Grid g = Grid::make(1, {-1, 0}, {1, 0}, 1.0 / 16);
  EXPECT_EQ(energy_identity_check(GridFunction(g), 8.0).discrepancy, 0.0);
  const Grid g2 = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 8);
  try {
    energy_identity_check(GridFunction(g2), 8.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "identity check implemented in d=1 only");
  }
}

TEST(Gagliardo, HalfSpaceEnergyMatchesForm) {
  const Grid g = Grid::make(1, {-1.5, 0}, {1.5, 0}, 1.0 / 64);
  GridFunction u(g);
  u.values = sample(g, [](Vec2 p) { return std::abs(p.x) < 1 ? std::exp(-1 / (1 - p.x * p.x)) : 0.0; });
  const EnergyIdentityReport r = energy_identity_check(u, 8.0);
  EXPECT_LE(r.half_space_discrepancy, 0.05);
  EXPECT_NEAR(r.reflected_energy, 2 * r.half_space_energy, 1e-12);
}

TEST(Gagliardo, IndicatorDiverges) {
  const std::vector<double> hs{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128};
  const auto jump = radial_jump_divergence([](double r) { return r < 1 ? 1.0 : 0.0; }, 1.0, 1.0, 1.5, hs, 400);
  EXPECT_TRUE(jump.strictly_increasing);
  EXPECT_GT(jump.min_increment, 0.0);
  EXPECT_GT(jump.log_slope, 0.0);
  const auto smooth = radial_energy_sequence([](double r) { return std::exp(-4 * r * r); }, 1.5, hs, 400);
  const auto& e = smooth.energies;
  EXPECT_LT(std::abs(e.back() - e[e.size() - 2]), 0.02 * e.back());
  EXPECT_THROW(radial_jump_divergence([](double r) { return std::exp(-r); }, 1.0, 0.5, 1.5, hs), Error);
  EXPECT_THROW(radial_jump_divergence([](double r) { return r < 1 ? 1.0 : 0.0; }, 1.0, 0.0, 1.5, hs), Error);
}
