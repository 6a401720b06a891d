#include "fracberno/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;

void require_dim(int d, int min_d) {
  if (d < min_d) throw Error("unsupported dimension", "d = " + std::to_string(d));
}

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

// Integral in the definition of I after b = s^2 and s = tan(phi):
//   int_0^{1/a} (1 - a b)^{(d-2)/2} / (sqrt(b) (1 + b)) db
//     = int_0^{atan(1/sqrt(a))} 2 (1 - a tan^2 phi)^{(d-2)/2} dphi.
double reduced_integral(int d, double a, double upper_phi) {
  if (d == 2) return 2.0 * upper_phi;
  const double p = 0.5 * (d - 2);
  auto f = [&](double phi) {
    const double t = std::tan(phi);
    return 2.0 * std::pow(std::max(0.0, 1.0 - a * t * t), p);
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(f, 0.0, upper_phi, 1e-14);
}

}  // namespace

double normalization_A(int d) {
  require_dim(d, 1);
  return 0.5 * std::tgamma(0.5 * (d + 1)) * std::pow(kPi, -0.5 * (d + 1));
}

KernelConstants kernel_constants(int d) {
  require_dim(d, 1);
  KernelConstants k;
  k.d = d;
  k.A_d = normalization_A(d);
  if (d < 2) {
    k.C0 = k.c_tilde = k.I_e1 = std::numeric_limits<double>::quiet_NaN();
    return k;
  }
  k.C0 = 2.0 * std::numbers::sqrt2 * std::tgamma(0.5 * d) / (kSqrtPi * std::tgamma(0.5 * (d - 1)));
  k.I_e1 = kSqrtPi * std::tgamma(0.5 * (d - 1)) / (2.0 * std::tgamma(0.5 * d));
  // Direct route in b; the b^{-1/2} endpoint is handled by tanh-sinh.
  const double p = 0.5 * (d - 2);
  auto g = [&](double b) { return std::pow(std::max(0.0, 1.0 - 3.0 * b), p) / (std::sqrt(b) * (1.0 + b)); };
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double integral = integrator.integrate(g, 0.0, 1.0 / 3.0, 1e-14);
  k.c_tilde = std::numbers::sqrt2 * k.C0 / (1.0 - integral / (kPi * std::pow(2.0, d - 2)));
  return k;
}

double poisson_kernel(std::span<const double> x, double y) {
  if (!(y > 0.0)) throw Error("invalid height", "Poisson kernel needs y > 0");
  const int d = static_cast<int>(x.size());
  return 2.0 * normalization_A(d) * y / std::pow(norm_sq(x) + y * y, 0.5 * (d + 1));
}

double poisson_kernel(int d, Vec2 x, double y) {
  const double c[2] = {x.x, x.y};
  return poisson_kernel(std::span<const double>(c, d), y);
}

double harmonic_extension(const GridFunction& u, Vec2 x, double y) {
  if (y == 0.0) throw Error("evaluate trace directly");
  const Grid& g = u.grid;
  const double ay = std::abs(y);
  const double c = 2.0 * normalization_A(g.dim) * ay * g.cell_volume();
  const double expo = 0.5 * (g.dim + 1);
  double sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (u.values[i] == 0.0) continue;
    const Vec2 r = x - g.center(i);
    sum += u.values[i] / std::pow(dot(r, r) + ay * ay, expo);
  }
  return c * sum;
}

double profile_I_radial(int d, double r) {
  require_dim(d, 2);
  if (!(r > 1.0)) throw Error("inside unit ball", "I needs |y| > 1");
  const double a = r * r - 1.0;
  const double prefactor = std::tgamma(0.5 * (d - 1)) / (2.0 * kSqrtPi * std::tgamma(0.5 * d)) * std::pow(r, 2.0 - d);
  return prefactor * reduced_integral(d, a, std::atan(1.0 / std::sqrt(a)));
}

double profile_I(int d, std::span<const double> y) {
  if (static_cast<int>(y.size()) != d) throw Error("dimension mismatch");
  return profile_I_radial(d, std::sqrt(norm_sq(y)));
}

double profile_j(int d, std::span<const double> y) {
  if (static_cast<int>(y.size()) != d) throw Error("dimension mismatch");
  require_dim(d, 2);
  double s = 0.0;
  for (int k = 0; k < d; ++k) {
    const double c = y[k] + (k == 0 ? 1.0 : 0.0);
    s += c * c;
  }
  const double r = std::sqrt(s);
  if (r <= 1.0) return 1.0;
  return profile_I_radial(d, r) / kernel_constants(d).I_e1;
}

double profile_q1(int d, std::span<const double> y) { return 1.0 - profile_j(d, y); }

RateFit q1_sqrt_rate(int d, std::span<const double> t_grid) {
  require_dim(d, 2);
  if (t_grid.size() < 5) throw Error("invalid t grid", "need at least 5 points");
  std::vector<double> ts(t_grid.begin(), t_grid.end());
  for (double t : ts) {
    if (!(t > 0.0 && t <= 0.1)) throw Error("invalid t grid", "t must lie in (0, 0.1]");
  }
  std::sort(ts.begin(), ts.end());
  if (std::unique(ts.begin(), ts.end()) - ts.begin() < 2) throw Error("degenerate fit", "t grid has one distinct value");

  const double I_e1 = kernel_constants(d).I_e1;
  std::vector<double> q(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) q[k] = 1.0 - profile_I_radial(d, 1.0 + ts[k]) / I_e1;

  // q/sqrt(t) = C + beta sqrt(t), ordinary least squares in s = sqrt(t).
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double s = std::sqrt(ts[k]), r = q[k] / s;
    n += 1;
    sx += s;
    sy += r;
    sxx += s * s;
    sxy += s * r;
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw Error("degenerate fit");
  RateFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.C = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double s = std::sqrt(ts[k]);
    const double e = q[k] - (fit.C + fit.slope * s) * s;
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  // The two smallest distinct t.
  std::size_t k1 = 1;
  while (ts[k1] == ts[0]) ++k1;
  const double s0 = std::sqrt(ts[0]), s1 = std::sqrt(ts[k1]);
  const double r0 = q[0] / s0, r1 = q[k1] / s1;
  fit.two_point = r0 - (r1 - r0) / (s1 - s0) * s0;
  return fit;
}

double spectral_ball_upper_bound(int d, double r) {
  require_dim(d, 2);
  if (!(r > 0.0)) throw Error("invalid radius");
  std::vector<double> e1(d, 0.0);
  e1[0] = 1.0;
  const double t = 1.0 / (1.0 - profile_j(d, e1));
  return std::numbers::sqrt2 * t * kernel_constants(d).C0 / std::sqrt(r);
}

DominationReport q1_boundary_domination_check(int d, const std::vector<std::vector<double>>& samples) {
  require_dim(d, 2);
  const double C0 = kernel_constants(d).C0;
  DominationReport rep;
  for (const auto& y : samples) {
    if (static_cast<int>(y.size()) != d) throw Error("dimension mismatch");
    double s = 0.0;
    for (int k = 0; k < d; ++k) {
      const double c = y[k] + (k == 0 ? 1.0 : 0.0);
      s += c * c;
    }
    const double dist = std::sqrt(s) - 1.0;
    if (dist < 1e-3) throw Error("sample inside the ball", "distance below 1e-3");
    const double ratio = profile_q1(d, y) / (C0 * std::sqrt(dist));
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    if (ratio > 1.0 + 1e-4) rep.ok = false;
  }
  return rep;
}

double half_space_psi(double x1) { return x1 > 0.0 ? std::sqrt(x1) : 0.0; }

PsiValue half_space_Psi(double x1, double y) {
  if (y == 0.0) return {half_space_psi(x1), 0.0};
  const double ay = std::abs(y);
  constexpr double L = 50.0;
  if (x1 >= L) throw Error("out of range", "x_1 must be below the truncation 50");
  auto f = [&](double z) { return std::sqrt(z) * ay / (kPi * ((x1 - z) * (x1 - z) + ay * ay)); };
  // Substitute z = s^2 to remove the sqrt cusp at 0, and split at the peak.
  auto g = [&](double s) { return 2.0 * s * f(s * s); };
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double peak = std::sqrt(std::clamp(x1, 0.0, L));
  double value = 0.0;
  if (peak > 0.0) value += GK::integrate(g, 0.0, peak, 15, 1e-13);
  value += GK::integrate(g, peak, std::sqrt(L), 15, 1e-13);
  // For z > L: (z - x1)^2 + y^2 >= (z - x1)^2 and sqrt z <= sqrt(z - x1) + sqrt(x1+)
  // give int_L^inf <= (y/pi) [2/sqrt(L - x1) + sqrt(x1+)/(L - x1)].
  const double m = L - x1;
  PsiValue out;
  out.value = value;
  out.tail = ay / kPi * (2.0 / std::sqrt(m) + std::sqrt(std::max(x1, 0.0)) / m);
  return out;
}

}  // namespace fracberno
