#include "fracberno/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_outer_layer(const Grid& g, std::size_t i) {
  const int ix = g.ix(i), iy = g.iy(i);
  if (ix == 0 || ix == g.nx - 1) return true;
  return g.dim == 2 && (iy == 0 || iy == g.ny - 1);
}

struct SetSolve {
  GridFunction u;
  double q = 0.0;
  std::size_t count = 0;
};

// Harmonic function with u = 1 on `one`, u = 0 off `support`.
SetSolve solve_on_set(const GagliardoForm& form, const CellMask& one, const std::vector<std::uint8_t>& support,
                      const std::vector<double>& warm) {
  const Grid& g = form.grid();
  GridFunction u0(g);
  SetSolve s;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (one[i]) {
      u0.values[i] = 1.0;
      u0.fixed[i] = 1;
    } else if (!support[i]) {
      u0.values[i] = 0.0;
      u0.fixed[i] = 1;
    } else {
      u0.values[i] = std::clamp(warm[i], 0.0, 1.0);
    }
    if (support[i] || one[i]) ++s.count;
  }
  s.u = solve_harmonic(form, u0, 1e-10).u;
  s.q = form.energy(s.u);
  return s;
}

}  // namespace

double measure_weight(double lambda, const Grid& grid) { return 0.25 * kPi * lambda * lambda * grid.cell_volume(); }

Grid square_grid(int dim, Vec2 center, double half_width, double h) {
  const int n = std::max(1, static_cast<int>(std::lround(2.0 * half_width / h)));
  return Grid::centered(dim, center, n, h);
}

FreeBoundaryResult minimize_exterior(const ExteriorProblem& problem) {
  if (!(problem.lambda > 0.0)) throw Error("invalid lambda", "lambda must be positive");
  if (problem.K.dim() != problem.grid.dim) throw Error("dimension mismatch", "K and grid");
  if (!(problem.tau > 0.0 && problem.tau < 1.0)) throw Error("invalid tau");
  const Grid& g = problem.grid;
  const GagliardoForm form(g, problem.form);
  const double mu = measure_weight(problem.lambda, g);

  FreeBoundaryResult res;
  res.pinned = rasterize(problem.K, g);
  if (res.pinned.empty()) throw Error("empty K", "K does not cover any cell centre");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (res.pinned[i] && in_outer_layer(g, i)) throw Error("K touches box", "K must lie strictly inside the box");
  }

  // Start from the harmonic function of K in the box (the lambda = 0 state).
  GridFunction start(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (res.pinned[i]) {
      start.values[i] = 1.0;
      start.fixed[i] = 1;
    }
  }
  start = solve_harmonic(form, start, 1e-8).u;

  const std::vector<std::uint8_t> counted(g.size(), 1);
  RelaxedResult relaxed = minimize_relaxed(form, start, counted, mu, Penalized::Positive, problem.relaxed);
  res.stages = relaxed.stages;
  res.relaxed_u = relaxed.u;
  res.relaxed_energy =
      relaxed_energy(form, relaxed.u, start.fixed, counted, mu, Penalized::Positive, problem.relaxed.eps_schedule.back());

  // Exact set step: compare {u > tau} with {u > 0}, both re-solved harmonically.
  std::vector<std::uint8_t> positive(g.size()), thresholded(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    positive[i] = relaxed.u[i] > 0.0 || res.pinned[i];
    thresholded[i] = relaxed.u[i] > problem.tau || res.pinned[i];
  }
  const SetSolve base = solve_on_set(form, res.pinned, positive, relaxed.u);
  const SetSolve trial = solve_on_set(form, res.pinned, thresholded, relaxed.u);
  const double e_base = base.q + mu * static_cast<double>(base.count);
  const double e_trial = trial.q + mu * static_cast<double>(trial.count);
  res.set_step_accepted = e_trial <= e_base + 1e-8;
  const SetSolve& chosen = res.set_step_accepted ? trial : base;
  const std::vector<std::uint8_t>& support = res.set_step_accepted ? thresholded : positive;

  res.u = chosen.u;
  res.omega = CellMask(g);
  for (std::size_t i = 0; i < g.size(); ++i) res.omega.cells[i] = support[i];
  res.energies.gagliardo = chosen.q;
  res.energies.measure = mu * static_cast<double>(chosen.count);
  res.energies.total = res.energies.gagliardo + res.energies.measure;

  const auto tails = form.tails();
  for (std::size_t i = 0; i < g.size(); ++i) {
    res.tail_energy += tails[i] * res.u.values[i] * res.u.values[i];
    if (res.omega[i] && in_outer_layer(g, i)) res.touches_box = true;
  }
  res.box_fill = static_cast<double>(res.omega.count()) / static_cast<double>(g.size());
  return res;
}

BoundaryTrace extract_boundary(const CellMask& set, Vec2 center, int directions, const GridFunction* u,
                               ProfileSide side, double base, double angle_offset) {
  const Grid& g = set.grid;
  if (g.dim != 2) throw Error("unsupported dimension", "boundary tracing is planar");
  if (directions < 3) throw Error("invalid direction count");
  if (set.empty()) throw Error("empty mask");
  const double step = g.h / 8.0;
  const Vec2 lo = g.lo, hi = g.hi();

  auto marked = [&](Vec2 p) {
    const auto c = g.locate(p);
    return c && set[*c];
  };
  auto profile = [&](Vec2 p) {
    const double v = interpolate(g, u->values, p) - base;
    return v * v;
  };

  BoundaryTrace tr;
  tr.center = center;
  for (int k = 0; k < directions; ++k) {
    const double theta = angle_offset + 2.0 * kPi * k / directions;
    const Vec2 dir = unit_direction(theta);
    // Distance to the box edge along the ray.
    double r_max = std::numeric_limits<double>::infinity();
    if (dir.x > 0) r_max = std::min(r_max, (hi.x - center.x) / dir.x);
    if (dir.x < 0) r_max = std::min(r_max, (lo.x - center.x) / dir.x);
    if (dir.y > 0) r_max = std::min(r_max, (hi.y - center.y) / dir.y);
    if (dir.y < 0) r_max = std::min(r_max, (lo.y - center.y) / dir.y);
    if (!marked(center)) throw Error("use mask boundary", "centre is not in the set");

    double last_in = 0.0, first_out = -1.0;
    for (double r = 0.0; r < r_max; r += step) {
      if (marked(center + dir * r)) {
        // Re-entry after a gap of a cell or more means the set is not
        // starshaped about the centre; shorter gaps are raster corners.
        if (first_out >= 0.0 && r - first_out >= g.h) {
          throw Error("use mask boundary", "ray re-enters the set");
        }
        last_in = r;
        first_out = -1.0;
      } else if (first_out < 0.0) {
        first_out = r;
      }
    }
    double radius = last_in + 0.5 * step;
    if (u != nullptr) {
      // Two samples on the profile side of the crossing.
      const double sgn = side == ProfileSide::Inside ? -1.0 : 1.0;
      const double ra = radius + sgn * 0.5 * g.h, rb = radius + sgn * 1.5 * g.h;
      const double fa = profile(center + dir * ra), fb = profile(center + dir * rb);
      if (fb != fa && ra > 0.0 && rb > 0.0) {
        const double root = ra - fa * (rb - ra) / (fb - fa);
        if (std::isfinite(root)) radius = std::clamp(root, radius - g.h, radius + g.h);
      }
    }
    tr.theta.push_back(theta);
    tr.radius.push_back(radius);
    tr.points.push_back(center + dir * radius);
  }
  // Interior normal of a counterclockwise polyline: the tangent turned left.
  const int m = directions;
  for (int k = 0; k < m; ++k) {
    const Vec2 t = tr.points[(k + 1) % m] - tr.points[(k + m - 1) % m];
    const Vec2 n{-t.y, t.x};
    const double len = norm(n);
    tr.normals.push_back(len > 0.0 ? n * (1.0 / len) : -unit_direction(tr.theta[k]));
  }
  return tr;
}

std::vector<Vec2> mask_boundary_points(const CellMask& set) {
  const Grid& g = set.grid;
  std::vector<Vec2> pts;
  auto at = [&](int ix, int iy) {
    if (ix < 0 || iy < 0 || ix >= g.nx || iy >= g.ny) return false;
    return set[g.index(ix, iy)];
  };
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!at(ix, iy)) continue;
      const Vec2 c = g.center(ix, iy);
      if (!at(ix + 1, iy)) pts.push_back(c + Vec2{0.5 * g.h, 0});
      if (!at(ix - 1, iy)) pts.push_back(c - Vec2{0.5 * g.h, 0});
      if (g.dim == 2) {
        if (!at(ix, iy + 1)) pts.push_back(c + Vec2{0, 0.5 * g.h});
        if (!at(ix, iy - 1)) pts.push_back(c - Vec2{0, 0.5 * g.h});
      }
    }
  }
  return pts;
}

RateEstimate sqrt_rate(const GridFunction& u, Vec2 point, Vec2 normal, double t_min, double t_max, double base,
                       const CellMask* obstacle, int samples) {
  const Grid& g = u.grid;
  if (samples < 8) throw Error("invalid window", "need at least 8 samples");
  if (t_min < 2.0 * g.h * (1.0 - 1e-9)) throw Error("invalid window", "t_min must be at least 2h");
  if (!(t_max > t_min)) throw Error("invalid window", "t_max must exceed t_min");
  const double len = norm(normal);
  if (!(len > 0.0)) throw Error("invalid normal");
  const Vec2 nu = normal * (1.0 / len);
  double sft = 0.0, stt = 0.0;
  std::vector<double> ts(samples), fs(samples);
  for (int k = 0; k < samples; ++k) {
    const double t = t_min + (t_max - t_min) * k / (samples - 1);
    const Vec2 p = point + nu * t;
    const auto cell = g.locate(p);
    if (!cell) throw Error("window collision", "sample leaves the box");
    if (obstacle && (*obstacle)[*cell]) throw Error("window collision", "sample enters the obstacle");
    const double f = std::abs(interpolate(g, u.values, p) - base);
    ts[k] = t;
    fs[k] = f;
    sft += f * std::sqrt(t);
    stt += t;
  }
  RateEstimate est;
  est.samples = samples;
  est.lambda_hat = sft / stt;
  double rss = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double e = fs[k] - est.lambda_hat * std::sqrt(ts[k]);
    rss += e * e;
  }
  const double scale = std::abs(est.lambda_hat) * std::sqrt(t_max);
  est.residual = scale > 0.0 ? std::sqrt(rss / samples) / scale : std::sqrt(rss / samples);
  return est;
}

double distance_to_mask(const CellMask& mask, Vec2 p) {
  const Grid& g = mask.grid;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!mask[i]) continue;
    const Vec2 c = g.center(i);
    const double dx = std::max(0.0, std::abs(p.x - c.x) - 0.5 * g.h);
    const double dy = g.dim == 1 ? 0.0 : std::max(0.0, std::abs(p.y - c.y) - 0.5 * g.h);
    best = std::min(best, std::hypot(dx, dy));
  }
  return best;
}

DirectionalRates exterior_rates(const FreeBoundaryResult& result, Vec2 center, int directions) {
  DirectionalRates out;
  out.trace = extract_boundary(result.omega, center, directions, &result.u, ProfileSide::Inside, 0.0);
  const double h = result.u.grid.h;
  double sum = 0.0;
  int used = 0;
  for (int k = 0; k < directions; ++k) {
    const Vec2 p = out.trace.points[k];
    const double t_max = 0.5 * distance_to_mask(result.pinned, p);
    RateEstimate est;
    est.lambda_hat = std::numeric_limits<double>::quiet_NaN();
    est.residual = std::numeric_limits<double>::infinity();
    if (t_max > 2.0 * h) {
      est = sqrt_rate(result.u, p, out.trace.normals[k], 2.0 * h, t_max, 0.0, &result.pinned);
      sum += est.lambda_hat;
      ++used;
    }
    out.rates.push_back(est);
  }
  out.mean = used > 0 ? sum / used : std::numeric_limits<double>::quiet_NaN();
  return out;
}

CellMask dilate(const CellMask& mask) {
  const Grid& g = mask.grid;
  CellMask out(g);
  const int ry = g.dim == 1 ? 0 : 1;
  for (int iy = 0; iy < g.ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!mask[g.index(ix, iy)]) continue;
      for (int dy = -ry; dy <= ry; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int jx = ix + dx, jy = iy + dy;
          if (jx >= 0 && jy >= 0 && jx < g.nx && jy < g.ny) out.cells[g.index(jx, jy)] = 1;
        }
      }
    }
  }
  return out;
}

MonotonicityReport check_uniqueness_monotonicity(const ExteriorProblem& small, const ExteriorProblem& big) {
  if (!(small.grid == big.grid)) throw Error("grid mismatch", "both problems must share a grid");
  const CellMask ks = rasterize(small.K, small.grid), kb = rasterize(big.K, big.grid);
  if (!ks.subset_of(kb)) throw Error("not nested", "K_small must lie inside K_big");
  MonotonicityReport rep;
  rep.small = minimize_exterior(small);
  rep.big = minimize_exterior(big);
  const Grid& g = small.grid;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double v = rep.small.u.values[i] - rep.big.u.values[i];
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_cell = i;
    }
  }
  const CellMask layer = dilate(rep.big.omega);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (rep.small.omega[i] && !layer[i]) ++rep.omega_violations;
  }
  rep.ok = rep.max_violation <= 1e-6 && rep.omega_violations == 0;
  return rep;
}

std::vector<bool> check_starshaped_levels(const FreeBoundaryResult& result, const Ball& center_ball,
                                          const std::vector<double>& levels) {
  if (!is_starshaped(result.pinned, center_ball)) throw Error("hypothesis violated", "K is not starshaped");
  std::vector<bool> out;
  const Grid& g = result.u.grid;
  for (double level : levels) {
    if (!(level >= 0.0 && level < 1.0)) throw Error("invalid level");
    CellMask m(g);
    for (std::size_t i = 0; i < g.size(); ++i) m.cells[i] = result.u.values[i] > level;
    out.push_back(is_starshaped(m, center_ball));
  }
  return out;
}

}  // namespace fracberno
