#include "fracberno/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracberno/error.hpp"
#include "fracberno/interior.hpp"

namespace fracberno {

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};
constexpr double kMinTheta = 1e-2;

// Fraction along a -> b where `inside` first changes from inside(a).
template <class Pred>
double crossing(Vec2 a, Vec2 b, Pred inside) {
  const bool start = inside(a);
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(a + (b - a) * mid) == start) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Growth ratio q with sum_{j=1..m} h q^j = length.
double grading_ratio(double h, int m, double length) {
  if (length <= m * h) return 1.0;
  double lo = 1.0, hi = 2.0;
  auto total = [&](double q) {
    double s = 0.0, p = 1.0;
    for (int j = 1; j <= m; ++j) {
      p *= q;
      s += h * p;
    }
    return s;
  };
  while (total(hi) < length) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) < length ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CylinderGrid::CylinderGrid(const DomainSpec& D, const CylinderOptions& options)
    : D_(D), options_(options), grid_(interior_grid(D, options.h)) {
  if (D.dim() != 2) throw Error("unsupported dimension", "the cylinder is built over a planar domain");
  if (options.levels < 2 || options.fine_levels < 1 || options.fine_levels >= options.levels) {
    throw Error("invalid levels");
  }
  mask_ = rasterize(D, grid_);
  if (mask_.empty()) throw Error("empty D");

  const double h = options.h;
  const double Y = options.height_factor * D.diameter();
  const int N = options.levels, F = options.fine_levels;
  if (!(Y > F * h)) throw Error("invalid height", "cylinder too short for the fine levels");
  const double q = grading_ratio(h, N - F, Y - F * h);
  y_.resize(N + 1);
  for (int k = 0; k <= F; ++k) y_[k] = k * h;
  double step = h;
  for (int k = F + 1; k <= N; ++k) {
    step *= q;
    y_[k] = y_[k - 1] + step;
  }
  y_[N] = Y;

  compressed_.assign(grid_.size(), -1);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (mask_[i]) {
      compressed_[i] = static_cast<long>(cells_.size());
      cells_.push_back(i);
    }
  }
  neighbors_.assign(4 * cells_.size(), -1);
  factors_.assign(4 * cells_.size(), 1.0);
  auto inside = [&](Vec2 p) { return D_.contains(p); };
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const int ix = grid_.ix(cells_[c]), iy = grid_.iy(cells_[c]);
    for (int k = 0; k < 4; ++k) {
      const int jx = ix + kDx[k], jy = iy + kDy[k];
      const bool in_box = jx >= 0 && jy >= 0 && jx < grid_.nx && jy < grid_.ny;
      if (in_box && mask_[grid_.index(jx, jy)]) {
        neighbors_[4 * c + k] = compressed_[grid_.index(jx, jy)];
      } else {
        const Vec2 a = grid_.center(ix, iy), b = a + Vec2{kDx[k] * h, kDy[k] * h};
        factors_[4 * c + k] = 1.0 / std::max(kMinTheta, crossing(a, b, inside));
      }
    }
  }
}

double distance_to_wall(const DomainSpec& D, const Polygon& K) {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2& v : K.vertices) {
    const double d = D.contains(v) ? distance_to_domain_boundary(D, v) : -distance_to_domain_boundary(D, v);
    best = std::min(best, d);
  }
  return best;
}

CylinderSolution solve_cylinder(const CylinderGrid& cg, const Polygon& K, const std::vector<double>* warm) {
  const CylinderOptions& opt = cg.options();
  const double h = opt.h;
  if (K.vertices.size() < 3) throw Error("invalid K", "K needs at least 3 vertices");
  if (distance_to_wall(cg.domain(), K) < 2.0 * h * (1.0 - 1e-9)) throw Error("margin", "K is closer than 2h to the wall");

  const Grid& g = cg.cross_section();
  const std::size_t nc = cg.cells();
  const int N = cg.levels();
  const auto y = cg.heights();
  auto in_K = [&](Vec2 p) { return distance_to_convex(K, p) == 0.0; };

  CylinderSolution sol;
  sol.K_mask = CellMask(g);
  std::vector<std::uint8_t> pinned(nc, 0);
  for (std::size_t c = 0; c < nc; ++c) {
    if (in_K(g.center(cg.grid_index(c)))) {
      pinned[c] = 1;
      sol.K_mask.cells[cg.grid_index(c)] = 1;
    }
  }
  if (sol.K_mask.empty()) throw Error("empty K", "K does not cover any cell centre");

  // Coefficients: horizontal a_k = omega_k / h^2, vertical b_k = 1 / (y_{k+1} - y_k).
  std::vector<double> a(N), b(N);
  for (int k = 0; k < N; ++k) {
    const double omega = k == 0 ? 0.5 * y[1] : 0.5 * (y[k + 1] - y[k - 1]);
    a[k] = omega / (h * h);
    b[k] = 1.0 / (y[k + 1] - y[k]);
  }
  // Level-0 couplings of free cells to the boundary of K.
  std::vector<double> k_factor(4 * nc, 0.0);
  for (std::size_t c = 0; c < nc; ++c) {
    if (pinned[c]) continue;
    for (int d = 0; d < 4; ++d) {
      const long n = cg.neighbor(c, d);
      if (n >= 0 && pinned[n]) {
        const Vec2 p = g.center(cg.grid_index(c)), q = g.center(cg.grid_index(static_cast<std::size_t>(n)));
        k_factor[4 * c + d] = 1.0 / std::max(kMinTheta, crossing(p, q, in_K));
      }
    }
  }

  const std::size_t n_all = static_cast<std::size_t>(N) * nc;
  auto is_pinned = [&](int k, std::size_t c) { return k == 0 && pinned[c]; };
  std::vector<double> diag(n_all, 0.0), rhs(n_all, 0.0);
  for (int k = 0; k < N; ++k) {
    for (std::size_t c = 0; c < nc; ++c) {
      if (is_pinned(k, c)) continue;
      double dsum = b[k] + (k > 0 ? b[k - 1] : 0.0);
      for (int d = 0; d < 4; ++d) {
        const long n = cg.neighbor(c, d);
        if (n < 0) {
          dsum += a[k] * cg.wall_factor(c, d);
        } else if (k == 0 && pinned[n]) {
          dsum += a[0] * k_factor[4 * c + d];
          rhs[c] += a[0] * k_factor[4 * c + d];
        } else {
          dsum += a[k];
        }
      }
      if (k == 1 && pinned[c]) rhs[nc + c] += b[0];
      diag[static_cast<std::size_t>(k) * nc + c] = dsum;
    }
  }

  auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (int k = 0; k < N; ++k) {
      const std::size_t base = static_cast<std::size_t>(k) * nc;
      for (std::size_t c = 0; c < nc; ++c) {
        const std::size_t i = base + c;
        if (is_pinned(k, c)) {
          out[i] = 0.0;
          continue;
        }
        double s = diag[i] * x[i];
        for (int d = 0; d < 4; ++d) {
          const long n = cg.neighbor(c, d);
          if (n >= 0 && !is_pinned(k, static_cast<std::size_t>(n))) s -= a[k] * x[base + n];
        }
        if (k + 1 < N) s -= b[k] * x[i + nc];
        if (k > 0 && !is_pinned(k - 1, c)) s -= b[k - 1] * x[i - nc];
        out[i] = s;
      }
    }
  };
  // y-line tridiagonal preconditioner (Thomas algorithm per column).
  std::vector<double> cprime(n_all), dprime(n_all);
  auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
    for (std::size_t c = 0; c < nc; ++c) {
      const int k0 = pinned[c] ? 1 : 0;
      for (int k = 0; k < k0; ++k) z[c] = 0.0;
      for (int k = k0; k < N; ++k) {
        const std::size_t i = static_cast<std::size_t>(k) * nc + c;
        const double lower = k > k0 ? -b[k - 1] : 0.0;
        const double upper = k + 1 < N ? -b[k] : 0.0;
        const double denom = diag[i] - (k > k0 ? lower * cprime[i - nc] : 0.0);
        cprime[i] = upper / denom;
        dprime[i] = (r[i] - (k > k0 ? lower * dprime[i - nc] : 0.0)) / denom;
      }
      for (int k = N - 1; k >= k0; --k) {
        const std::size_t i = static_cast<std::size_t>(k) * nc + c;
        z[i] = dprime[i] - (k + 1 < N ? cprime[i] * z[i + nc] : 0.0);
      }
    }
  };

  std::vector<double> x(n_all, 0.0);
  if (warm && warm->size() == n_all) x = *warm;
  for (std::size_t c = 0; c < nc; ++c) {
    if (pinned[c]) x[c] = 0.0;  // the pinned value enters through rhs
  }
  std::vector<double> r(n_all), z(n_all), p(n_all), Ap(n_all);
  apply(x, Ap);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n_all; ++i) {
    r[i] = rhs[i] - Ap[i];
    bnorm += rhs[i] * rhs[i];
  }
  bnorm = std::sqrt(bnorm);
  precondition(r, z);
  p = z;
  double rz = 0.0, rnorm = 0.0;
  for (std::size_t i = 0; i < n_all; ++i) {
    rz += r[i] * z[i];
    rnorm += r[i] * r[i];
  }
  rnorm = std::sqrt(rnorm);
  int it = 0;
  while (rnorm > opt.tol * bnorm) {
    if (it >= opt.max_iterations) {
      throw Error("CG did not converge", "relative residual " + std::to_string(rnorm / bnorm));
    }
    apply(p, Ap);
    double pAp = 0.0;
    for (std::size_t i = 0; i < n_all; ++i) pAp += p[i] * Ap[i];
    const double alpha = rz / pAp;
    for (std::size_t i = 0; i < n_all; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    precondition(r, z);
    double rz_new = 0.0;
    rnorm = 0.0;
    for (std::size_t i = 0; i < n_all; ++i) {
      rz_new += r[i] * z[i];
      rnorm += r[i] * r[i];
    }
    rnorm = std::sqrt(rnorm);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n_all; ++i) p[i] = z[i] + beta * p[i];
    ++it;
  }
  for (std::size_t c = 0; c < nc; ++c) {
    if (pinned[c]) x[c] = 1.0;
  }
  sol.v = std::move(x);
  sol.iterations = it;
  sol.residual = bnorm > 0.0 ? rnorm / bnorm : 0.0;
  sol.trace.assign(g.size(), 0.0);
  for (std::size_t c = 0; c < nc; ++c) sol.trace[cg.grid_index(c)] = sol.v[c];
  return sol;
}

double axial_monotonicity_violation(const CylinderGrid& cg, const CylinderSolution& sol) {
  const std::size_t nc = cg.cells();
  double worst = 0.0;
  for (int k = 0; k + 1 < cg.levels(); ++k) {
    for (std::size_t c = 0; c < nc; ++c) {
      worst = std::max(worst, sol.v[(k + 1) * nc + c] - sol.v[k * nc + c]);
    }
  }
  return worst;
}

}  // namespace fracberno
