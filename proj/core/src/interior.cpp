#include "fracberno/interior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

constexpr double kPi = std::numbers::pi;

struct Plateau {
  CellMask mask;
  double q = 0.0;
  double threshold = 0.0;  // sqrt(4 Q_P / (pi h^d |P|))
};

}  // namespace

Grid interior_grid(const DomainSpec& D, double h) {
  const Box bb = D.bounding_box();
  const Vec2 c = (bb.lo + bb.hi) * 0.5;
  const double half = 0.5 * std::max(bb.hi.x - bb.lo.x, D.dim() == 1 ? 0.0 : bb.hi.y - bb.lo.y);
  const int n = static_cast<int>(std::ceil(2.0 * half / h - 1e-9)) + 2;
  return Grid::centered(D.dim(), c, n, h);
}

double distance_to_domain_boundary(const DomainSpec& D, Vec2 p) {
  if (const auto* b = std::get_if<Ball>(&D.shape())) {
    const double r = D.dim() == 1 ? std::abs(p.x - b->center.x) : norm(p - b->center);
    return std::abs(b->radius - r);
  }
  if (const auto* b = std::get_if<Box>(&D.shape())) {
    if (D.dim() == 1) return std::min(std::abs(p.x - b->lo.x), std::abs(b->hi.x - p.x));
  }
  return distance_to_boundary(D.outline(), p);
}

InteriorResult minimize_interior(const InteriorProblem& problem) {
  if (!(problem.lambda > 0.0)) throw Error("invalid lambda", "lambda must be positive");
  if (!(problem.sigma > 0.0 && problem.sigma < 1.0)) throw Error("invalid sigma");
  const Grid& g = problem.grid;
  if (problem.D.dim() != g.dim) throw Error("dimension mismatch", "D and grid");
  const GagliardoForm form(g, problem.form);
  const double mu = measure_weight(problem.lambda, g);

  InteriorResult res;
  res.domain = rasterize(problem.D, g);
  if (res.domain.empty()) throw Error("empty D", "D does not cover any cell centre");
  const std::size_t n = g.size();
  res.trivial_energy = mu * static_cast<double>(res.domain.count());

  GridFunction start(g);
  for (std::size_t i = 0; i < n; ++i) start.fixed[i] = res.domain[i] ? 0 : 1;
  if (problem.seed) {
    const double core = 0.5 * inradius(problem.D);
    GridFunction seed = start;
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (res.domain[i] && distance_to_domain_boundary(problem.D, g.center(i)) > core) {
        seed.values[i] = 1.0;
        seed.fixed[i] = 1;
        any = true;
      }
    }
    if (any) {
      const GridFunction harmonic = solve_harmonic(form, seed, 1e-8).u;
      start.values = harmonic.values;
    }
  }

  const std::vector<std::uint8_t> counted(res.domain.cells);
  const RelaxedResult relaxed = minimize_relaxed(form, start, counted, mu, Penalized::BelowOne, problem.relaxed);
  res.stages = relaxed.stages;
  res.relaxed_u = relaxed.u;
  res.relaxed_energy = relaxed_energy(form, relaxed.u, start.fixed, counted, mu, Penalized::BelowOne,
                                      problem.relaxed.eps_schedule.back());

  res.plateau = CellMask(g);
  for (std::size_t i = 0; i < n; ++i) res.plateau.cells[i] = res.domain[i] && relaxed.u[i] >= 1.0 - problem.sigma;
  res.u = GridFunction(g);
  res.u.fixed = start.fixed;
  const std::size_t p = res.plateau.count();
  if (p == 0) {
    res.energies.gagliardo = 0.0;
  } else {
    GridFunction u0(g);
    for (std::size_t i = 0; i < n; ++i) {
      if (res.plateau[i]) {
        u0.values[i] = 1.0;
        u0.fixed[i] = 1;
      } else if (!res.domain[i]) {
        u0.fixed[i] = 1;
      } else {
        u0.values[i] = std::clamp(relaxed.u[i], 0.0, 1.0);
      }
    }
    res.u = solve_harmonic(form, u0, 1e-10).u;
    res.energies.gagliardo = form.energy(res.u);
  }
  res.plateau_energy = res.energies.gagliardo;
  res.energies.measure = mu * static_cast<double>(res.domain.count() - p);
  res.energies.total = res.energies.gagliardo + res.energies.measure;
  return res;
}

bool is_nontrivial(const InteriorResult& result) {
  if (result.plateau.empty()) return false;
  return result.energies.total < result.trivial_energy * (1.0 - 1e-6);
}

std::pair<double, double> ball_bernoulli_bounds(int d, double r) {
  if (!(r > 0.0)) throw Error("invalid radius");
  const double c = 2.0 / std::sqrt(kPi) / std::sqrt(r);
  return {c * std::pow(d, 0.25) * std::pow(3.0, -(d + 2) / 2.0), c * std::sqrt(d) * std::pow(2.0, (d + 3) / 2.0)};
}

std::pair<double, double> domain_bernoulli_bounds(int d, double measure, double inradius) {
  const double lower = 2.0 / std::sqrt(kPi) * std::pow(d, 0.25) * std::pow(kPi, 0.25) /
                       (std::pow(measure, 1.0 / (2 * d)) * std::pow(std::tgamma(0.5 * d + 1.0), 1.0 / (2 * d)) *
                        std::pow(3.0, (d + 2) / 2.0));
  const double upper = 2.0 / std::sqrt(kPi) * std::sqrt(d) * std::pow(2.0, (d + 3) / 2.0) / std::sqrt(inradius);
  return {lower, upper};
}

BernoulliEstimate bernoulli_constant(const DomainSpec& D, double h, const BernoulliOptions& options) {
  if (!(options.tol > 0.0)) throw Error("invalid tolerance");
  const Grid grid = interior_grid(D, h);
  std::pair<double, double> bracket{0.05, 20.0};
  if (options.bracket) {
    bracket = *options.bracket;
  } else if (const auto* b = std::get_if<Ball>(&D.shape())) {
    bracket = ball_bernoulli_bounds(D.dim(), b->radius);
  }
  if (!(bracket.first > 0.0 && bracket.first < bracket.second)) throw Error("bracket invalid", "need 0 < lo < hi");

  std::vector<Plateau> plateaus;
  BernoulliEstimate est;
  est.certificate = std::numeric_limits<double>::infinity();
  const double cell = grid.cell_volume();

  auto probe = [&](double lambda) {
    InteriorProblem prob;
    prob.D = D;
    prob.lambda = lambda;
    prob.grid = grid;
    prob.relaxed = options.relaxed;
    prob.sigma = options.sigma;
    const InteriorResult r = minimize_interior(prob);
    Probe pr;
    pr.lambda = lambda;
    pr.energy = r.energies.total;
    pr.trivial_energy = r.trivial_energy;
    pr.solver_nontrivial = is_nontrivial(r);
    if (pr.solver_nontrivial) {
      Plateau p;
      p.mask = r.plateau;
      p.q = r.plateau_energy;
      p.threshold = std::sqrt(4.0 * p.q / (kPi * cell * static_cast<double>(p.mask.count())));
      if (p.threshold < est.certificate) {
        est.certificate = p.threshold;
        est.plateau = p.mask;
      }
      plateaus.push_back(std::move(p));
    }
    pr.nontrivial = pr.solver_nontrivial || lambda > est.certificate;
    est.probes.push_back(pr);
    return pr.nontrivial;
  };

  double lo = bracket.first, hi = bracket.second;
  const bool lo_nontrivial = probe(lo);
  const bool hi_nontrivial = probe(hi);
  if (lo_nontrivial == hi_nontrivial || lo > est.certificate) {
    throw Error("bracket invalid", "both ends have the same classification");
  }
  while (hi - lo > options.tol * hi) {
    const double mid = std::sqrt(0.5 * (lo * lo + hi * hi));
    if (probe(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    // A certificate below a lambda already classified trivial contradicts
    // the connectedness of the nontrivial range.
    if (est.certificate < lo) {
      throw Error("bracket flip-flop", "plateau certificate " + std::to_string(est.certificate) +
                                           " below trivial probe " + std::to_string(lo));
    }
  }
  est.lambda_lo = lo;
  est.lambda_hi = hi;
  est.estimate = 0.5 * (lo + hi);
  return est;
}

ComparisonReport isoperimetric_check(const DomainSpec& D, double h, const BernoulliOptions& options) {
  if (D.dim() != 2) throw Error("unsupported dimension");
  const Box bb = D.bounding_box();
  const DomainSpec B = DomainSpec::ball((bb.lo + bb.hi) * 0.5, std::sqrt(D.measure() / kPi));
  ComparisonReport rep;
  rep.lambda_D = bernoulli_constant(D, h, options).estimate;
  rep.lambda_B = bernoulli_constant(B, h, options).estimate;
  rep.ok = rep.lambda_D >= 0.95 * rep.lambda_B;
  return rep;
}

BoundCheck inradius_bound_check(const DomainSpec& D, double estimate) {
  if (D.dim() != 2) throw Error("unsupported dimension");
  const auto [lower, upper] = domain_bernoulli_bounds(2, D.measure(), inradius(D));
  return {lower, upper, estimate <= upper * 1.05 && estimate >= lower * 0.95};
}

DirectionalRates interior_rates(const InteriorResult& result, const DomainSpec& D, Vec2 center, int directions) {
  DirectionalRates out;
  out.trace = extract_boundary(result.plateau, center, directions, &result.u, ProfileSide::Outside, 1.0);
  const double h = result.u.grid.h;
  double sum = 0.0;
  int used = 0;
  for (int k = 0; k < directions; ++k) {
    const Vec2 p = out.trace.points[k];
    const double t_max = 0.5 * distance_to_domain_boundary(D, p);
    RateEstimate est;
    est.lambda_hat = std::numeric_limits<double>::quiet_NaN();
    est.residual = std::numeric_limits<double>::infinity();
    if (t_max > 2.0 * h) {
      est = sqrt_rate(result.u, p, -out.trace.normals[k], 2.0 * h, t_max, 1.0, &result.plateau);
      sum += est.lambda_hat;
      ++used;
    }
    out.rates.push_back(est);
  }
  out.mean = used > 0 ? sum / used : std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace fracberno
