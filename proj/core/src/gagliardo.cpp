#include "fracberno/gagliardo.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include "fracberno/error.hpp"
#include "fracberno/kernels.hpp"
#include "fracberno/parallel.hpp"

namespace fracberno {

namespace {

// FFTW's planner is not thread safe; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Sum over 4^d x 4^d subcell midpoints of |x_a - y_b|^{-d-1} in units of the
// spacing, scaled by the subcell volumes (4^{-d})^2.
double near_sum(int d, int kx, int ky) {
  constexpr int S = 4;
  double sum = 0.0;
  if (d == 1) {
    for (int a = 0; a < S; ++a) {
      for (int b = 0; b < S; ++b) {
        const double r = std::abs(kx + (b - a) / static_cast<double>(S));
        sum += 1.0 / (r * r);
      }
    }
    return sum / (S * S);
  }
  for (int ay = 0; ay < S; ++ay) {
    for (int ax = 0; ax < S; ++ax) {
      for (int by = 0; by < S; ++by) {
        for (int bx = 0; bx < S; ++bx) {
          const double rx = kx + (bx - ax) / static_cast<double>(S);
          const double ry = ky + (by - ay) / static_cast<double>(S);
          const double r2 = rx * rx + ry * ry;
          sum += 1.0 / (r2 * std::sqrt(r2));
        }
      }
    }
  }
  return sum / (S * S * S * S);
}

// int over y outside [x0,x1] x [y0,y1] of |x - y|^{-3}, point strictly inside.
double rectangle_exterior_integral(Vec2 p, Vec2 lo, Vec2 hi) {
  auto side = [](double a, double s1, double s2) {
    return (s2 / std::hypot(a, s2) - s1 / std::hypot(a, s1)) / a;
  };
  return side(hi.x - p.x, lo.y - p.y, hi.y - p.y) + side(p.x - lo.x, lo.y - p.y, hi.y - p.y) +
         side(hi.y - p.y, lo.x - p.x, hi.x - p.x) + side(p.y - lo.y, lo.x - p.x, hi.x - p.x);
}

}  // namespace

struct GagliardoForm::Fft {
  int n0 = 1;  // padded rows (1 in d = 1)
  int n1 = 0;  // padded columns
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<std::complex<double>> spectrum;  // kernel transform / N

  Fft(int dim, int nx, int ny) {
    n1 = 2 * nx;
    n0 = dim == 1 ? 1 : 2 * ny;
    real_size = static_cast<std::size_t>(n0) * n1;
    complex_size = static_cast<std::size_t>(n0) * (n1 / 2 + 1);
    double* in = fftw_alloc_real(real_size);
    fftw_complex* out = fftw_alloc_complex(complex_size);
    {
      std::lock_guard lock(planner_mutex());
      if (dim == 1) {
        forward = fftw_plan_dft_r2c_1d(n1, in, out, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(n1, out, in, FFTW_ESTIMATE);
      } else {
        forward = fftw_plan_dft_r2c_2d(n0, n1, in, out, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_2d(n0, n1, out, in, FFTW_ESTIMATE);
      }
    }
    fftw_free(in);
    fftw_free(out);
  }

  ~Fft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
  }
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
};

GagliardoForm::GagliardoForm(const Grid& grid, FormOptions options) : grid_(grid), options_(options) {
  if (grid.dim != 1 && grid.dim != 2) throw Error("unsupported dimension");
  if (grid.nx > options.max_cells_per_axis || grid.ny > options.max_cells_per_axis) {
    throw Error("grid too large", std::to_string(grid.nx) + " x " + std::to_string(grid.ny) + " cells");
  }
  const int d = grid.dim;
  const int nx = grid.nx, ny = grid.ny;
  A_d_ = normalization_A(d);
  const double scale = 2.0 * A_d_ * std::pow(grid.h, d - 1);

  // Offset table.
  const int wx = 2 * nx - 1, wy = d == 1 ? 1 : 2 * ny - 1;
  kernel_.assign(static_cast<std::size_t>(wx) * wy, 0.0);
  for (int ky = -(wy / 2); ky <= wy / 2; ++ky) {
    for (int kx = -(nx - 1); kx <= nx - 1; ++kx) {
      if (kx == 0 && ky == 0) continue;
      const double r2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky;
      double s;
      if (r2 <= near_radius_ * near_radius_) {
        s = near_sum(d, kx, ky);
      } else {
        const double r = std::sqrt(r2);
        s = 1.0 / std::pow(r, d + 1);
      }
      kernel_[static_cast<std::size_t>(ky + wy / 2) * wx + (kx + nx - 1)] = scale * s;
    }
  }

  fft_ = std::make_unique<Fft>(d, nx, ny);
  {
    double* in = fftw_alloc_real(fft_->real_size);
    fftw_complex* out = fftw_alloc_complex(fft_->complex_size);
    std::fill(in, in + fft_->real_size, 0.0);
    for (int ky = -(wy / 2); ky <= wy / 2; ++ky) {
      const int row = ky < 0 ? ky + fft_->n0 : ky;
      for (int kx = -(nx - 1); kx <= nx - 1; ++kx) {
        const int col = kx < 0 ? kx + fft_->n1 : kx;
        in[static_cast<std::size_t>(row) * fft_->n1 + col] = weight(kx, ky);
      }
    }
    fftw_execute_dft_r2c(fft_->forward, in, out);
    const double inv = 1.0 / static_cast<double>(fft_->real_size);
    fft_->spectrum.resize(fft_->complex_size);
    for (std::size_t k = 0; k < fft_->complex_size; ++k) fft_->spectrum[k] = {out[k][0] * inv, out[k][1] * inv};
    fftw_free(in);
    fftw_free(out);
  }

  row_sums_.assign(grid.size(), 0.0);
  const std::vector<double> ones(grid.size(), 1.0);
  convolve(ones, row_sums_);

  tails_.assign(grid.size(), 0.0);
  if (options_.exterior_tails) {
    const Vec2 lo = grid.lo, hi = grid.hi();
    const double c = 2.0 * A_d_ * grid.cell_volume();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec2 x = grid.center(i);
      tails_[i] = d == 1 ? c * (1.0 / (x.x - lo.x) + 1.0 / (hi.x - x.x)) : c * rectangle_exterior_integral(x, lo, hi);
    }
  }
}

GagliardoForm::~GagliardoForm() = default;
GagliardoForm::GagliardoForm(GagliardoForm&&) noexcept = default;
GagliardoForm& GagliardoForm::operator=(GagliardoForm&&) noexcept = default;

GagliardoForm::GagliardoForm(const GagliardoForm& other)
    : grid_(other.grid_),
      options_(other.options_),
      A_d_(other.A_d_),
      near_radius_(other.near_radius_),
      kernel_(other.kernel_),
      tails_(other.tails_),
      row_sums_(other.row_sums_),
      fft_(std::make_unique<Fft>(other.grid_.dim, other.grid_.nx, other.grid_.ny)) {
  fft_->spectrum = other.fft_->spectrum;
}

GagliardoForm& GagliardoForm::operator=(const GagliardoForm& other) {
  if (this != &other) *this = GagliardoForm(other);
  return *this;
}

double GagliardoForm::weight(int dx, int dy) const {
  const int nx = grid_.nx, ny = grid_.dim == 1 ? 1 : grid_.ny;
  if (std::abs(dx) >= nx || std::abs(dy) >= ny) return 0.0;
  const int wx = 2 * nx - 1;
  return kernel_[static_cast<std::size_t>(dy + ny - 1) * wx + (dx + nx - 1)];
}

void GagliardoForm::check(const Grid& g) const {
  if (!(g == grid_)) throw Error("grid mismatch");
}

void GagliardoForm::convolve(std::span<const double> u, std::span<double> out) const {
  if (u.size() != grid_.size() || out.size() != grid_.size()) throw Error("grid mismatch", "vector length");
  const Fft& f = *fft_;
  double* buf = fftw_alloc_real(f.real_size);
  fftw_complex* spec = fftw_alloc_complex(f.complex_size);
  std::fill(buf, buf + f.real_size, 0.0);
  const int nx = grid_.nx, ny = grid_.ny;
  for (int iy = 0; iy < ny; ++iy) {
    std::copy_n(u.data() + static_cast<std::size_t>(iy) * nx, nx, buf + static_cast<std::size_t>(iy) * f.n1);
  }
  fftw_execute_dft_r2c(f.forward, buf, spec);
  for (std::size_t k = 0; k < f.complex_size; ++k) {
    const std::complex<double> z = std::complex<double>(spec[k][0], spec[k][1]) * f.spectrum[k];
    spec[k][0] = z.real();
    spec[k][1] = z.imag();
  }
  fftw_execute_dft_c2r(f.backward, spec, buf);
  for (int iy = 0; iy < ny; ++iy) {
    std::copy_n(buf + static_cast<std::size_t>(iy) * f.n1, nx, out.data() + static_cast<std::size_t>(iy) * nx);
  }
  fftw_free(buf);
  fftw_free(spec);
}

double GagliardoForm::energy_and_gradient(std::span<const double> u, std::span<double> g) const {
  convolve(u, g);
  double q = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double mu = diagonal(i) * u[i] - g[i];
    q += u[i] * mu;
    g[i] = 2.0 * mu;
  }
  return q;
}

double GagliardoForm::energy(std::span<const double> u) const {
  std::vector<double> g(u.size());
  return energy_and_gradient(u, g);
}

void GagliardoForm::gradient(std::span<const double> u, std::span<double> g) const { energy_and_gradient(u, g); }

double GagliardoForm::energy(const GridFunction& u) const {
  check(u.grid);
  return energy(std::span<const double>(u.values));
}

GridFunction GagliardoForm::gradient(const GridFunction& u) const {
  check(u.grid);
  GridFunction g(u.grid);
  g.fixed = u.fixed;
  gradient(u.values, g.values);
  return g;
}

HarmonicSolve solve_harmonic(const GagliardoForm& form, const GridFunction& u0, double tol) {
  if (!(u0.grid == form.grid())) throw Error("grid mismatch");
  const std::size_t n = u0.grid.size();
  double pinned_scale = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (u0.is_fixed(i)) {
      pinned_scale = std::max(pinned_scale, std::abs(u0.values[i]));
    } else {
      ++free_count;
    }
  }
  if (free_count == n) throw Error("no pinned cells", "harmonic solve needs Dirichlet data");

  HarmonicSolve out{u0, 0, 0.0};
  std::vector<double>& u = out.u.values;
  if (free_count == 0) return out;
  if (pinned_scale == 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!u0.is_fixed(i)) u[i] = 0.0;
    }
    return out;
  }
  const double target = tol * pinned_scale;

  // Reduced system M_ff x = -M_fp u_p with M = diag(W + t) - w; r = -(M u)_f.
  std::vector<double> conv(n), r(n, 0.0), z(n, 0.0), p(n, 0.0), Ap(n, 0.0);
  auto apply = [&](const std::vector<double>& v, std::vector<double>& res) {
    form.convolve(v, conv);
    for (std::size_t i = 0; i < n; ++i) res[i] = form.diagonal(i) * v[i] - conv[i];
  };
  auto masked_max = [&](const std::vector<double>& v) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!u0.is_fixed(i)) m = std::max(m, std::abs(v[i]));
    }
    return m;
  };

  apply(u, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = u0.is_fixed(i) ? 0.0 : -r[i];
  double res = 2.0 * masked_max(r);
  double rz = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = u0.is_fixed(i) ? 0.0 : r[i] / form.diagonal(i);
    p[i] = z[i];
    rz += r[i] * z[i];
  }
  const int max_iter = static_cast<int>(std::min<std::size_t>(20 * free_count, 1000000));
  int it = 0;
  while (res > target) {
    if (it >= max_iter) {
      throw Error("CG did not converge", "residual " + std::to_string(res) + " after " + std::to_string(it) + " iterations");
    }
    apply(p, Ap);
    double pAp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!u0.is_fixed(i)) pAp += p[i] * Ap[i];
    }
    if (!(pAp > 0.0)) break;
    const double alpha = rz / pAp;
    double rz_new = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (u0.is_fixed(i)) continue;
      u[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
      z[i] = r[i] / form.diagonal(i);
      rz_new += r[i] * z[i];
    }
    ++it;
    // Recompute the true residual now and then to avoid drift.
    if (it % 50 == 0) {
      apply(u, r);
      for (std::size_t i = 0; i < n; ++i) r[i] = u0.is_fixed(i) ? 0.0 : -r[i];
      rz_new = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        z[i] = u0.is_fixed(i) ? 0.0 : r[i] / form.diagonal(i);
        rz_new += r[i] * z[i];
      }
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = u0.is_fixed(i) ? 0.0 : z[i] + beta * p[i];
    res = 2.0 * masked_max(r);
  }
  // Report the true residual.
  apply(u, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = u0.is_fixed(i) ? 0.0 : r[i];
  out.residual = 2.0 * masked_max(r);
  out.iterations = it;
  return out;
}

GridFunction apply_half_laplacian(const GagliardoForm& form, const GridFunction& u) {
  GridFunction g = form.gradient(u);
  const double s = 1.0 / (2.0 * u.grid.cell_volume());
  for (double& v : g.values) v *= s;
  return g;
}

EnergyIdentityReport energy_identity_check(const GridFunction& u, double Y) {
  if (u.grid.dim != 1) throw Error("identity check implemented in d=1 only");
  if (!(Y > 0.0)) throw Error("invalid height");
  EnergyIdentityReport rep;
  const GagliardoForm form(u.grid, FormOptions{true, 1 << 20});
  rep.form_energy = form.energy(u);
  if (rep.form_energy == 0.0) return rep;

  const Grid& g = u.grid;
  const double h = g.h;
  std::vector<double> z, m;  // support cells and their masses u_j h / pi
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (u.values[i] != 0.0) {
      z.push_back(g.center(i).x);
      m.push_back(u.values[i] * h / std::numbers::pi);
    }
  }
  // grad U for U(x, y) = sum_j m_j y / ((x - z_j)^2 + y^2).
  auto grad_sq = [&](double x, double y) {
    double ux = 0.0, uy = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      const double dx = x - z[j];
      const double s = dx * dx + y * y;
      const double s2 = s * s;
      ux += m[j] * (-2.0 * y * dx) / s2;
      uy += m[j] * (dx * dx - y * y) / s2;
    }
    return ux * ux + uy * uy;
  };
  const double x_lo = g.lo.x - 2.0 * Y, x_hi = g.hi().x + 2.0 * Y;
  const double dx = h / 4.0;
  const int nxq = static_cast<int>(std::ceil((x_hi - x_lo) / dx));
  auto line_integral = [&](double y) {
    // Composite trapezoid in x; the integrand is smooth on scale y >= h.
    double s = 0.0;
    for (int k = 0; k <= nxq; ++k) {
      const double w = (k == 0 || k == nxq) ? 0.5 : 1.0;
      s += w * grad_sq(x_lo + k * dx, y);
    }
    return s * dx;
  };
  using GL = boost::math::quadrature::gauss<double, 8>;
  // y in [0, h): rectangle rule with the value at y = h.
  double total = h * line_integral(h);
  for (double a = h; a < Y;) {
    const double b = std::min(2.0 * a, Y);
    total += GL::integrate(line_integral, a, b);
    a = b;
  }
  rep.half_space_energy = total;
  rep.reflected_energy = 2.0 * total;
  rep.discrepancy = std::abs(rep.form_energy - rep.reflected_energy) / rep.form_energy;
  rep.half_space_discrepancy = std::abs(rep.form_energy - rep.half_space_energy) / rep.form_energy;
  return rep;
}

DivergenceReport radial_energy_sequence(const std::function<double(double)>& g, double half_width,
                                        std::span<const double> spacings, int max_cells_per_axis) {
  if (spacings.size() < 2) throw Error("invalid resolutions", "need at least two spacings");
  for (std::size_t k = 1; k < spacings.size(); ++k) {
    if (!(spacings[k] < spacings[k - 1])) throw Error("invalid resolutions", "spacings must strictly decrease");
  }
  DivergenceReport rep;
  for (double h : spacings) {
    const Grid grid = Grid::make(2, {-half_width, -half_width}, {half_width, half_width}, h);
    const GagliardoForm form(grid, FormOptions{true, max_cells_per_axis});
    std::vector<double> u(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) u[i] = g(norm(grid.center(i)));
    rep.spacings.push_back(h);
    rep.energies.push_back(form.energy(u));
  }
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < rep.energies.size(); ++k) {
    const double x = std::log(1.0 / rep.spacings[k]);
    n += 1;
    sx += x;
    sy += rep.energies[k];
    sxx += x * x;
    sxy += x * rep.energies[k];
  }
  rep.log_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.min_increment = std::numeric_limits<double>::infinity();
  rep.strictly_increasing = true;
  for (std::size_t k = 1; k < rep.energies.size(); ++k) {
    const double inc = rep.energies[k] - rep.energies[k - 1];
    rep.min_increment = std::min(rep.min_increment, inc);
    if (!(inc > 0.0)) rep.strictly_increasing = false;
  }
  return rep;
}

DivergenceReport radial_jump_divergence(const std::function<double(double)>& g, double radius, double jump,
                                        double half_width, std::span<const double> spacings,
                                        int max_cells_per_axis) {
  if (!(jump > 0.0)) throw Error("no jump", "jump size must be positive");
  const double before = g(radius * (1.0 - 1e-9)), after = g(radius * (1.0 + 1e-9));
  if (!(before - after >= 0.5 * jump)) throw Error("no jump", "profile is continuous at the given radius");
  return radial_energy_sequence(g, half_width, spacings, max_cells_per_axis);
}

}  // namespace fracberno
