#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "fracberno/grid.hpp"

namespace fracberno {

struct FormOptions {
  /// Interaction with the zero exterior of the box.
  bool exterior_tails = true;
  /// Cells per axis allowed before assembly refuses with "grid too large".
  int max_cells_per_axis = 160;
};

/// Discrete Gagliardo form on a uniform grid,
///   Q(u) = sum_{i<j} w_ij (u_i - u_j)^2 + sum_i t_i u_i^2,
/// approximating A_d [u]_1 for u vanishing off the box. The pair weight only
/// depends on the cell offset, so products with the weight matrix are
/// evaluated as zero-padded FFT convolutions.
class GagliardoForm {
 public:
  explicit GagliardoForm(const Grid& grid, FormOptions options = {});
  ~GagliardoForm();
  GagliardoForm(const GagliardoForm&);
  GagliardoForm& operator=(const GagliardoForm&);
  GagliardoForm(GagliardoForm&&) noexcept;
  GagliardoForm& operator=(GagliardoForm&&) noexcept;

  const Grid& grid() const { return grid_; }
  const FormOptions& options() const { return options_; }
  double A_d() const { return A_d_; }

  /// w for the cell offset (dx, dy); zero at the origin.
  double weight(int dx, int dy = 0) const;
  /// t_i.
  std::span<const double> tails() const { return tails_; }
  /// W_i = sum_j w_ij over the box.
  std::span<const double> row_sums() const { return row_sums_; }
  /// Diagonal of the matrix of Q: W_i + t_i.
  double diagonal(std::size_t i) const { return row_sums_[i] + tails_[i]; }

  /// (w * u)_i = sum_j w_ij u_j.
  void convolve(std::span<const double> u, std::span<double> out) const;
  double energy(std::span<const double> u) const;
  /// g_i = dQ/du_i = 2 sum_j w_ij (u_i - u_j) + 2 t_i u_i.
  void gradient(std::span<const double> u, std::span<double> g) const;
  /// Both at the cost of one convolution.
  double energy_and_gradient(std::span<const double> u, std::span<double> g) const;

  double energy(const GridFunction& u) const;
  GridFunction gradient(const GridFunction& u) const;

 private:
  struct Fft;
  void check(const Grid& g) const;

  Grid grid_;
  FormOptions options_;
  double A_d_ = 0.0;
  int near_radius_ = 3;
  std::vector<double> kernel_;  // weights on offsets, (2 ny - 1) x (2 nx - 1)
  std::vector<double> tails_;
  std::vector<double> row_sums_;
  std::unique_ptr<Fft> fft_;
};

struct HarmonicSolve {
  GridFunction u;
  int iterations = 0;
  double residual = 0.0;  ///< max |reduced gradient| at exit
};

/// Minimizes Q over the free cells of u0 with the pinned cells held fixed
/// (preconditioned conjugate gradient, warm-started from u0's free values).
/// Converged when max |reduced gradient| <= tol * max |pinned value|.
HarmonicSolve solve_harmonic(const GagliardoForm& form, const GridFunction& u0, double tol = 1e-8);

/// (1 / (2 h^d)) times the gradient of Q.
GridFunction apply_half_laplacian(const GagliardoForm& form, const GridFunction& u);

struct EnergyIdentityReport {
  double form_energy = 0.0;          ///< Q(u), approximating A_1 [u]_1
  double half_space_energy = 0.0;    ///< int over (0, Y] of |grad U|^2
  double reflected_energy = 0.0;     ///< twice the half-space value
  double discrepancy = 0.0;          ///< |Q - reflected| / Q
  double half_space_discrepancy = 0.0;
};

/// Compares the form energy with the Dirichlet energy of the Poisson
/// extension of u, integrated over x in the box widened by Y and y in (0, Y]
/// and doubled for the even reflection. d = 1 only.
EnergyIdentityReport energy_identity_check(const GridFunction& u, double Y);

struct DivergenceReport {
  std::vector<double> spacings;
  std::vector<double> energies;
  double log_slope = 0.0;        ///< least-squares slope of Q_h against log(1/h)
  double min_increment = 0.0;    ///< min over refinements of Q_{h/2} - Q_h
  bool strictly_increasing = false;
};

/// Q_h(g(|x|)) in d = 2 on the square [-L, L]^2 for each spacing.
DivergenceReport radial_energy_sequence(const std::function<double(double)>& g, double half_width,
                                        std::span<const double> spacings, int max_cells_per_axis = 320);

/// As above, for a profile with a jump of size `jump` at `radius`. Throws
/// "no jump" unless jump > 0 and g actually jumps there.
DivergenceReport radial_jump_divergence(const std::function<double(double)>& g, double radius, double jump,
                                        double half_width, std::span<const double> spacings,
                                        int max_cells_per_axis = 320);

}  // namespace fracberno
