#pragma once

#include <span>
#include <vector>

#include "fracberno/grid.hpp"

namespace fracberno {

/// Dimension-dependent constants of the half Laplacian and of the spectral
/// ball construction. C0 and c_tilde are only defined for d >= 2 and are NaN
/// otherwise.
struct KernelConstants {
  int d = 0;
  double A_d = 0.0;      ///< Gamma((d+1)/2) pi^{-(d+1)/2} / 2
  double C0 = 0.0;       ///< 2 sqrt2 Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2))
  double c_tilde = 0.0;  ///< sqrt2 C0 / (1 - (1/(pi 2^{d-2})) int_0^{1/3} ...)
  double I_e1 = 0.0;     ///< sqrt(pi) Gamma((d-1)/2) / (2 Gamma(d/2))
};

KernelConstants kernel_constants(int d);
double normalization_A(int d);

/// P(x, y) = 2 A_d y / (|x|^2 + y^2)^{(d+1)/2}; x has d components.
double poisson_kernel(std::span<const double> x, double y);
/// Planar convenience form, using the grid's dimension d in {1, 2}.
double poisson_kernel(int d, Vec2 x, double y);

/// Midpoint quadrature of int P(x - z, |y|) u(z) dz over the cells of u.
double harmonic_extension(const GridFunction& u, Vec2 x, double y);

/// I(y) for |y| > 1, written as a function of r = |y|.
double profile_I_radial(int d, double r);
double profile_I(int d, std::span<const double> y);
/// j(y) = 1 on the closed ball B_1(-e_1), else I(y + e_1) / I(e_1).
double profile_j(int d, std::span<const double> y);
/// q_1 = 1 - j.
double profile_q1(int d, std::span<const double> y);

struct RateFit {
  double C = 0.0;              ///< intercept of q_1(t)/sqrt(t) = C + beta sqrt(t)
  double slope = 0.0;          ///< beta
  double two_point = 0.0;      ///< extrapolation from the two smallest t
  double residual = 0.0;       ///< rms residual of the fit of q_1
};

/// Fit of q_1(t e_1) ~ C sqrt(t) on t_grid subset of (0, 0.1].
RateFit q1_sqrt_rate(int d, std::span<const double> t_grid);

/// sqrt2 t C0 / sqrt(r) with t = (1 - j(e_1))^{-1}.
double spectral_ball_upper_bound(int d, double r);

struct DominationReport {
  bool ok = true;
  double max_ratio = 0.0;
};

/// q_1(y) <= C0 dist(y, B_1(-e_1))^{1/2} (1 + 1e-4) at every sample. Each
/// sample is a point with d components.
DominationReport q1_boundary_domination_check(int d, const std::vector<std::vector<double>>& samples);

/// psi(x) = sqrt(x_1) on x_1 > 0.
double half_space_psi(double x1);

struct PsiValue {
  double value = 0.0;  ///< Poisson integral over z_1 in (0, 50]
  double tail = 0.0;   ///< bound on the omitted part z_1 > 50
};

/// Harmonic extension of psi at (x_1, y). It only depends on x_1 and y, so the
/// d-dimensional Poisson integral reduces to the one-dimensional one.
PsiValue half_space_Psi(double x1, double y);

}  // namespace fracberno
