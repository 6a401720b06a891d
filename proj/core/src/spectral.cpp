#include "fracberno/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracberno/error.hpp"
#include "fracberno/interior.hpp"
#include "fracberno/kernels.hpp"
#include "fracberno/parallel.hpp"

namespace fracberno {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Vec2 centroid(const Polygon& K) {
  double a = 0.0;
  Vec2 c{};
  const std::size_t n = K.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 p = K.vertices[i], q = K.vertices[(i + 1) % n];
    const double w = cross(p, q);
    a += w;
    c = c + (p + q) * w;
  }
  return std::abs(a) > 0.0 ? c * (1.0 / (3.0 * a)) : K.vertices[0];
}

// First crossing of the ray c + t dir with the polygon boundary; returns the
// point and the outward normal of the edge hit.
std::pair<Vec2, Vec2> ray_exit(const Polygon& K, Vec2 c, Vec2 dir) {
  const std::size_t n = K.vertices.size();
  double best = std::numeric_limits<double>::infinity();
  Vec2 normal{};
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = K.vertices[i], b = K.vertices[(i + 1) % n];
    const Vec2 e = b - a;
    const double den = cross(dir, e);
    if (std::abs(den) < 1e-300) continue;
    const double t = cross(a - c, e) / den;
    const double s = cross(a - c, dir) / den;
    if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12 && t < best) {
      best = t;
      normal = Vec2{e.y, -e.x} * (1.0 / norm(e));
    }
  }
  if (!std::isfinite(best)) throw Error("invalid K", "ray does not leave K");
  return {c + dir * best, normal};
}

bool is_admissible(double metric, double lambda, double tol) { return metric <= lambda * (1.0 + tol); }

}  // namespace

SubsolutionState evaluate_subsolution(const CylinderGrid& cg, const Polygon& K, const AdmissibilityOptions& options,
                                      const std::vector<double>* warm) {
  SubsolutionState st;
  st.K = K;
  st.solution = solve_cylinder(cg, K, warm);
  st.wall_distance = distance_to_wall(cg.domain(), K);
  const Grid& g = cg.cross_section();
  const double h = g.h;

  st.sup_ratio = 0.0;
  for (std::size_t c = 0; c < cg.cells(); ++c) {
    const std::size_t i = cg.grid_index(c);
    if (st.solution.K_mask[i]) continue;
    const Vec2 x = g.center(i);
    const double delta = distance_to_convex(K, x);
    if (delta < options.exclusion * h) continue;
    const double ratio = (1.0 - st.solution.trace[i]) / std::sqrt(delta);
    if (ratio > st.sup_ratio) {
      st.sup_ratio = ratio;
      st.argmax = x;
    }
  }

  GridFunction trace(g);
  trace.values = st.solution.trace;
  const Vec2 c = centroid(K);
  st.sup_rate = 0.0;
  for (int m = 0; m < options.rate_directions; ++m) {
    const double theta = 2.0 * kPi * m / options.rate_directions;
    const auto [p, nu] = ray_exit(K, c, unit_direction(theta));
    const double wall = distance_to_domain_boundary(cg.domain(), p);
    const double t_max = std::min(std::max(0.5 * wall, 4.0 * h), wall - h);
    RateEstimate est{kNaN, std::numeric_limits<double>::infinity(), 0};
    if (t_max >= 3.0 * h) {
      est = sqrt_rate(trace, p, nu, 2.0 * h, t_max, 1.0, &st.solution.K_mask);
      st.sup_rate = std::max(st.sup_rate, est.lambda_hat);
    }
    st.rate_theta.push_back(theta);
    st.rates.push_back(est);
  }
  st.metric = options.use_rates ? std::max(st.sup_ratio, st.sup_rate) : st.sup_ratio;
  return st;
}

Admissibility admissibility(const SubsolutionState& state, double lambda, const AdmissibilityOptions& options) {
  return {is_admissible(state.metric, lambda, options.tol), state.sup_ratio, state.argmax};
}

bool satisfies_distance_bound(const SubsolutionState& state, double lambda, double h) {
  return state.wall_distance >= 1.0 / (lambda * lambda) - 2.0 * h;
}

SupportPolygon SupportPolygon::from_polygon(const Polygon& K, int directions) {
  if (directions < 3) throw Error("invalid direction count");
  SupportPolygon s;
  s.support.assign(directions, -std::numeric_limits<double>::infinity());
  for (int m = 0; m < directions; ++m) {
    for (const Vec2& v : K.vertices) s.support[m] = std::max(s.support[m], dot(v, s.normal(m)));
  }
  return s;
}

Vec2 SupportPolygon::normal(int m) const { return unit_direction(2.0 * kPi * m / directions()); }

Polygon SupportPolygon::polygon() const {
  double big = 1.0;
  for (double s : support) big = std::max(big, 4.0 * std::abs(s));
  std::vector<Vec2> poly{{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (int m = 0; m < directions(); ++m) {
    const Vec2 n = normal(m);
    const double s = support[m];
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Vec2 a = poly[i], b = poly[(i + 1) % poly.size()];
      const double fa = dot(a, n) - s, fb = dot(b, n) - s;
      if (fa <= 0.0) out.push_back(a);
      if ((fa < 0.0) != (fb < 0.0) && fa != fb) out.push_back(a + (b - a) * (fa / (fa - fb)));
    }
    poly = std::move(out);
    if (poly.empty()) throw Error("invalid K", "empty support polygon");
  }
  return convex_hull(poly);
}

void SupportPolygon::include(Vec2 p) {
  for (int m = 0; m < directions(); ++m) support[m] = std::max(support[m], dot(p, normal(m)));
}

void SupportPolygon::dilate(double delta) {
  for (double& s : support) s += delta;
}

ClosureResult convex_closure(const CylinderGrid& cg, const std::vector<Polygon>& inputs, double lambda,
                             const AdmissibilityOptions& options) {
  if (inputs.empty()) throw Error("invalid input", "no sets to close");
  std::vector<Vec2> pts;
  for (const auto& K : inputs) pts.insert(pts.end(), K.vertices.begin(), K.vertices.end());
  const Polygon hull = convex_hull(pts);
  if (distance_to_wall(cg.domain(), hull) < 2.0 * cg.options().h) throw Error("margin", "hull leaves the D margin");
  ClosureResult res;
  res.state = evaluate_subsolution(cg, hull, options);
  res.admissible = is_admissible(res.state.metric, lambda, options.tol);
  res.violation = res.state.metric > lambda * (1.0 + 2.0 * options.tol);
  return res;
}

Polygon ball_polygon(const Ball& b, int sides) { return DomainSpec::ball(b.center, b.radius).outline(sides); }

BeurlingRun beurling_grow(const DomainSpec& D, double lambda, const BeurlingOptions& options) {
  if (!(lambda > 0.0)) throw Error("invalid lambda");
  const CylinderGrid cg(D, options.cylinder);
  const double h = options.cylinder.h;
  const Ball inc = inscribed_ball(D);
  const int M = options.support_directions;
  BeurlingRun run;

  auto try_eval = [&](const Polygon& K, const std::vector<double>* warm) -> std::optional<SubsolutionState> {
    try {
      return evaluate_subsolution(cg, K, options.admissibility, warm);
    } catch (const Error& e) {
      if (e.code() == "margin" || e.code() == "empty K") return std::nullopt;
      throw;
    }
  };

  std::optional<SubsolutionState> current;
  SupportPolygon S;
  if (options.K0) {
    S = SupportPolygon::from_polygon(*options.K0, M);
    current = try_eval(S.polygon(), nullptr);
    ++run.solves;
    if (!current || !is_admissible(current->metric, lambda, options.admissibility.tol)) {
      throw Error("no seed", "K0 is not admissible");
    }
  } else {
    // Profile seed B_{r/2} first, then centred balls scanning down from the wall margin.
    {
      const SupportPolygon trial = SupportPolygon::from_polygon(ball_polygon({inc.center, 0.5 * inc.radius}, M), M);
      auto st = try_eval(trial.polygon(), nullptr);
      ++run.solves;
      if (st && is_admissible(st->metric, lambda, options.admissibility.tol)) {
        S = trial;
        current = std::move(st);
      }
    }
    const double r_max = (inc.radius - 2.0 * h) * std::cos(kPi / M);
    for (double f = 1.0; f > 0.05 && !current; f -= 0.05) {
      const SupportPolygon trial = SupportPolygon::from_polygon(ball_polygon({inc.center, f * r_max}, M), M);
      auto st = try_eval(trial.polygon(), nullptr);
      ++run.solves;
      if (st && is_admissible(st->metric, lambda, options.admissibility.tol)) {
        S = trial;
        current = std::move(st);
      }
    }
    if (!current) throw Error("no seed", "no admissible centred ball");
  }
  run.iterates.push_back(current->K);
  run.metrics.push_back(current->metric);

  double delta = options.delta0.value_or(inc.radius / 8.0);
  const int P = options.push_directions;
  for (int sweep = 0; sweep < options.max_sweeps && delta >= 0.5 * h; ++sweep) {
    // Trial 0 is the uniform dilation, trials 1..P push supporting points.
    std::vector<SupportPolygon> trials(P + 1, S);
    trials[0].dilate(delta);
    const Polygon Kc = current->K;
    for (int m = 0; m < P; ++m) {
      const Vec2 xi = unit_direction(2.0 * kPi * m / P);
      double top = -std::numeric_limits<double>::infinity();
      for (const Vec2& v : Kc.vertices) top = std::max(top, dot(v, xi));
      Vec2 p{};
      int count = 0;
      for (const Vec2& v : Kc.vertices) {
        if (dot(v, xi) >= top - 1e-12 * (1.0 + std::abs(top))) {
          p = p + v;
          ++count;
        }
      }
      p = p * (1.0 / count);
      trials[m + 1].include(p + xi * delta);
    }
    std::vector<std::optional<SubsolutionState>> results(P + 1);
    const std::vector<double>& warm = current->solution.v;
    parallel_for(P + 1, [&](std::size_t t) { results[t] = try_eval(trials[t].polygon(), &warm); });
    run.solves += P + 1;
    auto ok = [&](std::size_t t) {
      return results[t] && is_admissible(results[t]->metric, lambda, options.admissibility.tol);
    };

    std::optional<SupportPolygon> next;
    std::optional<SubsolutionState> next_state;
    if (ok(0)) {
      next = trials[0];
      next_state = std::move(results[0]);
    } else {
      std::vector<std::size_t> accepted;
      for (int m = 1; m <= P; ++m) {
        if (ok(m)) accepted.push_back(m);
      }
      if (accepted.empty()) {
        delta *= 0.5;
        continue;
      }
      if (accepted.size() > 1) {
        SupportPolygon merged = S;
        for (std::size_t t : accepted) {
          for (int j = 0; j < M; ++j) merged.support[j] = std::max(merged.support[j], trials[t].support[j]);
        }
        auto st = try_eval(merged.polygon(), &warm);
        ++run.solves;
        if (st && is_admissible(st->metric, lambda, options.admissibility.tol)) {
          next = merged;
          next_state = std::move(st);
        }
      }
      if (!next) {
        std::size_t best = accepted.front();
        for (std::size_t t : accepted) {
          if (results[t]->metric < results[best]->metric) best = t;
        }
        next = trials[best];
        next_state = std::move(results[best]);
      }
    }
    S = *next;
    current = std::move(next_state);
    run.iterates.push_back(current->K);
    run.metrics.push_back(current->metric);
  }

  for (std::size_t k = 0; k + 1 < run.iterates.size(); ++k) {
    for (const Vec2& v : run.iterates[k].vertices) {
      if (distance_to_convex(run.iterates[k + 1], v) > 1e-10) run.nested = false;
    }
  }
  AdmissibilityOptions cert = options.admissibility;
  cert.rate_directions = 64;
  run.final_state = evaluate_subsolution(cg, current->K, cert, &current->solution.v);
  ++run.solves;
  run.rate_theta = run.final_state.rate_theta;
  run.rates = run.final_state.rates;
  return run;
}

LambdaSEstimate lambda_s(const DomainSpec& D, const LambdaSOptions& options) {
  if (D.dim() != 2) throw Error("unsupported dimension");
  if (!D.is_convex()) throw Error("nonconvex");
  const CylinderGrid cg(D, options.cylinder);
  const double h = options.cylinder.h;
  const Ball inc = inscribed_ball(D);
  LambdaSEstimate est;
  est.h = h;

  std::vector<std::pair<std::string, Polygon>> menu;
  for (double f : options.ball_fractions) {
    menu.emplace_back("ball " + std::to_string(f), ball_polygon({inc.center, f * inc.radius}));
  }
  menu.emplace_back("profile", ball_polygon({inc.center, 0.5 * inc.radius}));
  if (!std::holds_alternative<Ball>(D.shape())) {
    const Polygon outline = D.outline(256);
    for (double f : options.homothetic_fractions) {
      Polygon K = outline;
      for (Vec2& v : K.vertices) v = inc.center + (v - inc.center) * f;
      menu.emplace_back("homothet " + std::to_string(f), convex_hull(K.vertices));
    }
  }
  for (auto& [name, K] : menu) {
    SeedResult seed;
    seed.name = name;
    seed.K = K;
    try {
      const SubsolutionState st = evaluate_subsolution(cg, K, options.admissibility);
      seed.metric = st.metric;
      seed.wall_distance = st.wall_distance;
    } catch (const Error& e) {
      if (e.code() != "margin" && e.code() != "empty K") throw;
      seed.metric = std::numeric_limits<double>::infinity();
      seed.wall_distance = distance_to_wall(D, K);
    }
    est.seeds.push_back(std::move(seed));
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < est.seeds.size(); ++k) {
    if (est.seeds[k].metric < best) {
      best = est.seeds[k].metric;
      est.best_seed = k;
    }
  }
  const double tol_adm = options.admissibility.tol;
  auto admissible = [&](double lambda) { return is_admissible(best, lambda, tol_adm); };

  double hi = kernel_constants(2).c_tilde / std::sqrt(inc.radius) * 1.05;
  if (!admissible(hi)) {
    throw Error("resolution too coarse", "upper bracket " + std::to_string(hi) + " inadmissible, best seed metric " +
                                             std::to_string(best));
  }
  double lo = 0.5 / std::sqrt(inc.radius);
  while (admissible(lo)) lo *= 0.5;
  while (hi - lo > options.tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? hi : lo) = mid;
  }
  est.lambda_lo = lo;
  est.lambda_hi = hi;
  est.estimate = 0.5 * (lo + hi);
  return est;
}

BMReport bm_verify(const DomainSpec& D0, const DomainSpec& D1, const std::vector<double>& s_grid,
                   const LambdaSOptions& options) {
  BMReport rep;
  const LambdaSEstimate e0 = lambda_s(D0, options);
  const LambdaSEstimate e1 = lambda_s(D1, options);
  rep.lambda0 = e0.estimate;
  rep.lambda1 = e1.estimate;
  rep.slack = 2.0 * options.tol + 0.05;
  const Polygon K0 = e0.seeds[e0.best_seed].K, K1 = e1.seeds[e1.best_seed].K;
  rep.ok = true;
  for (double s : s_grid) {
    BMEntry entry;
    entry.s = s;
    const DomainSpec Ds = minkowski_combine(D0, D1, s);
    entry.lambda_s = lambda_s(Ds, options).estimate;
    entry.rhs = 1.0 / std::sqrt((1.0 - s) / (rep.lambda0 * rep.lambda0) + s / (rep.lambda1 * rep.lambda1));
    entry.inequality_ok = entry.lambda_s <= entry.rhs * (1.0 + rep.slack);

    const DomainSpec Ks = minkowski_combine(DomainSpec::polygon(K0.vertices), DomainSpec::polygon(K1.vertices), s);
    const CylinderGrid cg(Ds, options.cylinder);
    const SubsolutionState st = evaluate_subsolution(cg, Ks.outline(), options.admissibility);
    entry.transfer_metric = st.metric;
    entry.transfer_wall = st.wall_distance;
    entry.transfer_lambda = std::max(e0.lambda_hi, e1.lambda_hi);
    entry.transfer_ok = is_admissible(st.metric, entry.transfer_lambda, options.admissibility.tol);
    rep.ok = rep.ok && entry.inequality_ok && entry.transfer_ok;
    rep.entries.push_back(entry);
  }
  return rep;
}

UrysohnReport urysohn_verify(const DomainSpec& D, const LambdaSOptions& options) {
  UrysohnReport rep;
  rep.mean_width = mean_width(D);
  const Ball inc = inscribed_ball(D);
  const DomainSpec B = DomainSpec::ball(inc.center, 0.5 * rep.mean_width);
  rep.lambda_D = lambda_s(D, options).estimate;
  rep.lambda_B = lambda_s(B, options).estimate;
  rep.ok = rep.lambda_D >= 0.95 * rep.lambda_B;
  return rep;
}

}  // namespace fracberno
