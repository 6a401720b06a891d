#include "verify/suite.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fracberno/cylinder.hpp"
#include "fracberno/error.hpp"
#include "fracberno/exterior.hpp"
#include "fracberno/gagliardo.hpp"
#include "fracberno/interior.hpp"
#include "fracberno/io.hpp"
#include "fracberno/kernels.hpp"
#include "fracberno/parallel.hpp"
#include "fracberno/spectral.hpp"

namespace fracberno::verify {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

namespace {

/// Named checks of one criterion; each carries its measured value and limit.
class Checks {
 public:
  void add(const std::string& name, bool pass, json fields) {
    fields["name"] = name;
    fields["pass"] = pass;
    items_.push_back(std::move(fields));
    if (!pass) failed_.push_back(name);
  }
  /// value <= limit
  void at_most(const std::string& name, double value, double limit) {
    add(name, value <= limit, {{"value", round12(value)}, {"limit", round12(limit)}, {"relation", "<="}});
  }
  void at_least(const std::string& name, double value, double limit) {
    add(name, value >= limit, {{"value", round12(value)}, {"limit", round12(limit)}, {"relation", ">="}});
  }
  /// |value - target| <= tol * |target|
  void relative(const std::string& name, double value, double target, double tol) {
    const double err = std::abs(value - target) / std::abs(target);
    add(name, err <= tol,
        {{"value", round12(value)}, {"target", round12(target)}, {"relative_error", round12(err)}, {"tol", tol}});
  }
  void truth(const std::string& name, bool pass, json fields = json::object()) { add(name, pass, std::move(fields)); }

  bool ok() const { return failed_.empty(); }
  const std::vector<std::string>& failed() const { return failed_; }
  json items() const { return items_; }

 private:
  json items_ = json::array();
  std::vector<std::string> failed_;
};

struct Resolution {
  double ext_h, int_h, ball_h, beurling_h, bm_h;
};

Resolution resolution(const SuiteOptions& o) {
  if (o.fast) return {1.0 / 48, 1.0 / 16, 1.0 / 24, 1.0 / 24, 1.0 / 24};
  return {1.0 / 96, 1.0 / 64, 1.0 / 48, 1.0 / 48, 1.0 / 32};
}

double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  auto one_sided = [](const std::vector<Vec2>& p, const std::vector<Vec2>& q) {
    double worst = 0.0;
    for (const Vec2& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec2& y : q) best = std::min(best, norm(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  return std::max(one_sided(a, b), one_sided(b, a));
}

bool same_bytes(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Every accepted K must keep dist(K, boundary of D) >= 1 / lambda^2 - 2h.
void distance_bound(Checks& c, const std::string& name, double wall, double lambda, double h) {
  c.at_least(name, wall, 1.0 / (lambda * lambda) - 2.0 * h);
}

// --- 1 -------------------------------------------------------------------

void constants(Checks& c, const SuiteOptions&) {
  const auto k2 = kernel_constants(2), k3 = kernel_constants(3);
  c.relative("c_tilde(2) = 6/pi", k2.c_tilde, 6.0 / kPi, 1e-4);
  c.at_most("|c_tilde(3) - 2.31|", std::abs(k3.c_tilde - 2.31), 0.01);
  c.relative("ball upper bound (2, r=1)", spectral_ball_upper_bound(2, 1.0), 6.0 / kPi, 1e-4);
  const std::vector<double> t{0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  const RateFit fit = q1_sqrt_rate(2, t);
  c.relative("q1 sqrt rate vs C0(2)", fit.C, k2.C0, 0.02);
}

// --- 2 -------------------------------------------------------------------

EnergyIdentityReport bump_identity(double h) {
  const Grid g = Grid::make(1, {-1.5, 0.0}, {1.5, 0.0}, h);
  GridFunction u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.center(i).x;
    u.values[i] = std::abs(x) < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
  }
  return energy_identity_check(u, 8.0);
}

void energy_identity(Checks& c, const SuiteOptions& o) {
  const double h = o.fast ? 1.0 / 32 : 1.0 / 64;
  const auto coarse = bump_identity(2.0 * h);
  const auto fine = bump_identity(h);
  c.at_most("relative discrepancy, doubled half-space energy", fine.discrepancy, 0.05);
  c.truth("discrepancy decreases under refinement", fine.discrepancy < coarse.discrepancy,
          {{"coarse", round12(coarse.discrepancy)}, {"fine", round12(fine.discrepancy)}});
  c.truth("diagnostic: single half-space energy", true,
          {{"form_energy", round12(fine.form_energy)},
           {"half_space_energy", round12(fine.half_space_energy)},
           {"half_space_discrepancy", round12(fine.half_space_discrepancy)},
           {"coarse_half_space_discrepancy", round12(coarse.half_space_discrepancy)}});
}

// --- 3 -------------------------------------------------------------------

void divergence(Checks& c, const SuiteOptions& o) {
  std::vector<double> spacings{1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
  if (o.fast) spacings.pop_back();
  const auto jump = radial_jump_divergence([](double r) { return r < 0.5 ? 1.0 : 0.0; }, 0.5, 1.0, 1.0, spacings);
  const auto smooth = radial_energy_sequence([](double r) { return std::exp(-8.0 * r * r); }, 1.0, spacings);
  json seq = json::array(), ctl = json::array();
  for (std::size_t k = 0; k < spacings.size(); ++k) {
    seq.push_back({round12(spacings[k]), round12(jump.energies[k])});
    ctl.push_back({round12(spacings[k]), round12(smooth.energies[k])});
  }
  c.truth("indicator energy strictly increasing", jump.strictly_increasing,
          {{"min_increment", round12(jump.min_increment)}, {"energies", seq}});
  c.at_least("indicator log-slope", jump.log_slope, 1e-12);
  const auto& e = smooth.energies;
  const double last_change = std::abs(e.back() - e[e.size() - 2]) / e.back();
  c.at_most("smooth control: relative change at the finest step", last_change, 0.02);
  c.at_most("smooth control: log-slope relative to the indicator", smooth.log_slope / jump.log_slope, 0.1);
  c.truth("smooth control energies", true, {{"energies", ctl}});
}

// --- 4, 5 ------------------------------------------------------------------

ExteriorProblem exterior_problem(double radius, double lambda, double h, double scale = 1.0) {
  ExteriorProblem p;
  p.K = DomainSpec::ball({0, 0}, radius * scale);
  p.lambda = lambda / std::sqrt(scale);
  p.grid = square_grid(2, {0, 0}, scale * 80.0 / 96.0, h * scale);
  return p;
}

std::vector<Vec2> scaled(std::vector<Vec2> pts, double s) {
  for (Vec2& p : pts) p = p * s;
  return pts;
}

void exterior(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).ext_h, lambda = 2.0;
  const ExteriorProblem p = exterior_problem(0.5, lambda, h);
  const FreeBoundaryResult r = minimize_exterior(p);
  c.truth("omega stays inside the box", !r.touches_box, {{"box_fill", round12(r.box_fill)}});

  std::vector<double> levels;
  for (int k = 1; k <= 9; ++k) levels.push_back(0.1 * k);
  const auto star = check_starshaped_levels(r, Ball{{0, 0}, 0.25}, levels);
  json flags = json::array();
  for (bool b : star) flags.push_back(b);
  c.truth("superlevel sets {u > 0.1 .. 0.9} starshaped", std::all_of(star.begin(), star.end(), [](bool b) { return b; }),
          {{"levels", flags}});

  const DirectionalRates rates = exterior_rates(r, {0, 0}, 64);
  c.relative("mean sqrt rate vs lambda", rates.mean, lambda, 0.15);
  const auto& rad = rates.trace.radius;
  const auto [lo, hi] = std::minmax_element(rad.begin(), rad.end());
  double mean_r = 0.0;
  for (double x : rad) mean_r += x / rad.size();
  c.at_most("rotational asymmetry (max - min radius) / mean", (*hi - *lo) / mean_r, 2e-2);

  const double s = 2.0;
  const FreeBoundaryResult r2 = minimize_exterior(exterior_problem(0.5, lambda, h, s));
  const double d = hausdorff(scaled(mask_boundary_points(r.omega), s), mask_boundary_points(r2.omega));
  c.at_most("homogeneity: Hausdorff(2 omega(K, l), omega(2K, l/sqrt2))", d, 2.0 * h);
}

void exterior_monotonicity(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).ext_h;
  const ExteriorProblem small = exterior_problem(0.4, 2.0, h), big = exterior_problem(0.5, 2.0, h);
  const MonotonicityReport m = check_uniqueness_monotonicity(small, big);
  c.at_most("max(u_small - u_big)", m.max_violation, 1e-6);
  c.truth("omega_small inside omega_big", m.omega_violations == 0, {{"cells_outside", m.omega_violations}});
  const FreeBoundaryResult again = minimize_exterior(small);
  c.truth("identical rerun is byte-identical", same_bytes(again.u.values, m.small.u.values) &&
                                                    same_bytes(again.relaxed_u, m.small.relaxed_u));
}

// --- 6 -------------------------------------------------------------------

void interior(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).int_h;
  const DomainSpec B1 = DomainSpec::ball({0, 0}, 1.0);
  const auto e1 = bernoulli_constant(B1, h);
  const auto [blo, bhi] = ball_bernoulli_bounds(2, 1.0);
  c.truth("Lambda(B1) inside the ball bounds", e1.estimate > blo && e1.estimate < bhi,
          {{"value", round12(e1.estimate)}, {"lower", round12(blo)}, {"upper", round12(bhi)}});

  const auto e2 = bernoulli_constant(B1.scaled(2.0), 2.0 * h);
  c.relative("homogeneity: sqrt2 Lambda(2 B1) vs Lambda(B1)", std::sqrt(2.0) * e2.estimate, e1.estimate, 0.10);

  const auto sq = bernoulli_constant(DomainSpec::box({-1.1, -1.1}, {1.1, 1.1}), h);
  c.at_least("inclusion: Lambda(B1) / Lambda(square of side 2.2)", e1.estimate / sq.estimate, 0.95);

  const double side = std::sqrt(kPi);
  const auto iso = isoperimetric_check(DomainSpec::box({-side / 2, -side / 2}, {side / 2, side / 2}), h);
  c.at_least("isoperimetric: Lambda(square) / Lambda(disk of equal area)", iso.lambda_D / iso.lambda_B, 0.95);
}

// --- 7 .. 11 ---------------------------------------------------------------

LambdaSOptions spectral_options(double h) {
  LambdaSOptions opts;
  opts.cylinder.h = h;
  return opts;
}

void admissibility_distance(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).beurling_h;
  const DomainSpec D = DomainSpec::ball({0, 0}, 1.0);
  CylinderOptions co;
  co.h = h;
  const CylinderGrid cg(D, co);
  const double lambda = 1.2 * kernel_constants(2).c_tilde;

  const Polygon violating = ball_polygon({{0, 0}, 0.9});
  const SubsolutionState bad = evaluate_subsolution(cg, violating);
  c.truth("test K violates the distance bound", !satisfies_distance_bound(bad, lambda, h),
          {{"wall_distance", round12(bad.wall_distance)}, {"bound", round12(1.0 / (lambda * lambda) - 2.0 * h)}});
  c.truth("violating K rejected", !admissibility(bad, lambda).admissible, {{"metric", round12(bad.metric)}});

  const LambdaSEstimate est = lambda_s(D, spectral_options(h));
  int accepted = 0;
  for (const SeedResult& s : est.seeds) {
    if (s.metric <= est.lambda_hi * 1.02) {
      ++accepted;
      distance_bound(c, "seed '" + s.name + "' accepted at lambda_hi", s.wall_distance, est.lambda_hi, h);
    }
  }
  c.at_least("accepted seeds", accepted, 1);

  const ClosureResult two = convex_closure(cg, {ball_polygon({{-0.2, 0}, 0.3}), ball_polygon({{0.2, 0}, 0.3})}, lambda);
  c.truth("hull of two admissible disks admissible", two.admissible, {{"metric", round12(two.state.metric)}});
  if (two.admissible) distance_bound(c, "hull of two disks", two.state.wall_distance, lambda, h);
}

void ball_bound(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).ball_h;
  const DomainSpec D = DomainSpec::ball({0, 0}, 1.0);
  const double c2 = kernel_constants(2).c_tilde;
  const LambdaSEstimate est = lambda_s(D, spectral_options(h));
  c.at_most("Lambda_S(B1) estimate", est.estimate, c2 * 1.05);

  CylinderOptions co;
  co.h = h;
  const CylinderGrid cg(D, co);
  const double lambda = 1.1 * c2;
  const SubsolutionState st = evaluate_subsolution(cg, ball_polygon({{0, 0}, 0.5}));
  c.at_most("profile seed B_1/2 metric at 1.1 c2", st.metric, lambda * 1.02);
  distance_bound(c, "profile seed distance bound", st.wall_distance, lambda, h);
  c.at_most("axial monotonicity violation", axial_monotonicity_violation(cg, st.solution), 1e-12);
}

void beurling(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).beurling_h;
  const DomainSpec D = DomainSpec::ball({0, 0}, 1.0);
  const double lambda = 1.2 * kernel_constants(2).c_tilde;
  BeurlingOptions bo;
  bo.cylinder.h = h;
  const BeurlingRun run = beurling_grow(D, lambda, bo);
  const Polygon& K = run.final_state.K;
  c.truth("final K convex", is_convex(K), {{"vertices", K.vertices.size()}});
  CylinderOptions co;
  co.h = h;
  const CylinderGrid cg(D, co);
  c.truth("final K raster convex", is_convex_mask(run.final_state.solution.K_mask));
  c.truth("iterates nested", run.nested, {{"iterates", run.iterates.size()}});
  int in_band = 0, total = 0;
  for (const auto& r : run.rates) {
    ++total;
    if (r.lambda_hat >= 0.85 * lambda && r.lambda_hat <= 1.05 * lambda) ++in_band;
  }
  c.at_least("fraction of directions with rate in [0.85, 1.05] lambda", double(in_band) / std::max(total, 1), 0.9);
  double worst_wall = std::numeric_limits<double>::infinity();
  for (const Polygon& Kn : run.iterates) worst_wall = std::min(worst_wall, distance_to_wall(D, Kn));
  distance_bound(c, "all iterates satisfy the distance bound", worst_wall, lambda, h);
  Vec2 mean{};
  for (const Vec2& v : K.vertices) mean = mean + v * (1.0 / K.vertices.size());
  c.at_most("final K centred", norm(mean), 2.0 * h);
}

void brunn_minkowski(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).bm_h;
  const LambdaSOptions opts = spectral_options(h);
  const DomainSpec B1 = DomainSpec::ball({0, 0}, 1.0);
  const DomainSpec Q = DomainSpec::box({-0.5, -0.5}, {0.5, 0.5});
  const BMReport rep = bm_verify(B1, Q, {0.25, 0.5, 0.75}, opts);
  for (const BMEntry& e : rep.entries) {
    const std::string s = format_number(e.s);
    c.at_most("s=" + s + ": Lambda_S(D_s) / rhs", e.lambda_s / e.rhs, 1.0 + rep.slack);
    c.at_most("s=" + s + ": transfer metric / max lambda", e.transfer_metric / e.transfer_lambda,
              1.0 + opts.admissibility.tol);
    if (e.transfer_ok) {
      distance_bound(c, "s=" + s + ": transferred K distance bound", e.transfer_wall, e.transfer_lambda, h);
    }
  }
  const BMReport eq = bm_verify(B1, B1, {0.5}, opts);
  c.relative("equality case D0 = D1 = B1", eq.entries[0].lambda_s, eq.entries[0].rhs, rep.slack);
}

void urysohn(Checks& c, const SuiteOptions& o) {
  const double h = resolution(o).bm_h;
  const UrysohnReport rep = urysohn_verify(DomainSpec::box({-0.5, -0.5}, {0.5, 0.5}), spectral_options(h));
  c.relative("mean width of the unit square", rep.mean_width, 4.0 / kPi, 1e-3);
  c.at_least("Lambda_S(square) / Lambda_S(disk of equal mean width)", rep.lambda_D / rep.lambda_B, 0.95);
}

// --- 12 ------------------------------------------------------------------

void numerics(Checks& c, const SuiteOptions&) {
  // Finite differences of the quadratic form are exact up to rounding.
  const Grid g = Grid::make(2, {0, 0}, {1, 1}, 1.0 / 16);
  const GagliardoForm form(g);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<double> u(g.size()), grad(g.size());
  for (double& x : u) x = uni(rng);
  form.gradient(u, grad);
  double worst = 0.0, gmax = 0.0;
  for (std::size_t i : {std::size_t{0}, g.size() / 3, g.size() / 2, g.size() - 1}) {
    const double step = 1e-4;
    auto up = u, dn = u;
    up[i] += step;
    dn[i] -= step;
    const double fd = (form.energy(up) - form.energy(dn)) / (2.0 * step);
    worst = std::max(worst, std::abs(fd - grad[i]));
    gmax = std::max(gmax, std::abs(grad[i]));
  }
  c.at_most("gradient vs central difference (relative)", worst / gmax, 1e-6);

  boost::math::quadrature::exp_sinh<double> half_line;
  double mass_err = 0.0;
  for (double y : {0.1, 1.0, 10.0}) {
    const double m1 = 2.0 * half_line.integrate([&](double x) { return poisson_kernel(1, {x, 0.0}, y); });
    const double m2 = half_line.integrate([&](double r) { return 2.0 * kPi * r * poisson_kernel(2, {r, 0.0}, y); });
    mass_err = std::max({mass_err, std::abs(m1 - 1.0), std::abs(m2 - 1.0)});
  }
  c.at_most("Poisson kernel unit mass error (d = 1, 2)", mass_err, 1e-6);

  GridFunction u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 x = g.center(i);
    if (norm(x - Vec2{0.5, 0.5}) < 0.2) {
      u0.values[i] = 1.0;
      u0.fixed[i] = 1;
    }
  }
  const HarmonicSolve hs = solve_harmonic(form, u0, 1e-8);
  c.at_most("harmonic solve residual", hs.residual, 1e-8);

  CylinderOptions co;
  co.h = 1.0 / 24;
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), co);
  const Polygon K = ball_polygon({{0, 0}, 0.4});
  const CylinderSolution s1 = solve_cylinder(cg, K), s2 = solve_cylinder(cg, K);
  c.at_most("cylinder solve residual", s1.residual, co.tol);
  c.truth("cylinder solve deterministic", same_bytes(s1.v, s2.v));

  const ExteriorProblem p = exterior_problem(0.5, 2.0, 1.0 / 32);
  const FreeBoundaryResult r1 = minimize_exterior(p), r2 = minimize_exterior(p);
  double stage_res = 0.0;
  for (const StageTrace& st : r1.stages) {
    if (st.stop == "tolerance") stage_res = std::max(stage_res, st.residual);
  }
  c.at_most("relaxed stage residuals at tolerance stops", stage_res, p.relaxed.tol);
  c.truth("exterior solve deterministic", same_bytes(r1.u.values, r2.u.values) &&
                                              same_bytes(r1.relaxed_u, r2.relaxed_u),
          {{"threads", thread_count()}});
}

using Body = void (*)(Checks&, const SuiteOptions&);

struct Entry {
  CriterionInfo info;
  Body body;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list{
      {{1, "constants", 60}, constants},
      {{2, "energy identity", 120}, energy_identity},
      {{3, "jump divergence", 300}, divergence},
      {{4, "exterior problem", 1200}, exterior},
      {{5, "exterior monotonicity", 900}, exterior_monotonicity},
      {{6, "interior Bernoulli constant", 3600}, interior},
      {{7, "spectral distance bound", 300}, admissibility_distance},
      {{8, "spectral ball bound", 1200}, ball_bound},
      {{9, "Beurling run", 1800}, beurling},
      {{10, "Brunn-Minkowski", 5400}, brunn_minkowski},
      {{11, "Urysohn", 2400}, urysohn},
      {{12, "cross-module numerics", 300}, numerics},
  };
  return list;
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> infos = [] {
    std::vector<CriterionInfo> v;
    for (const auto& e : entries()) v.push_back(e.info);
    return v;
  }();
  return infos;
}

std::vector<std::string> suite_names() {
  return {"all", "constants", "energy", "divergence", "exterior", "interior", "spectral", "bm", "urysohn", "numerics"};
}

std::vector<int> suite_members(const std::string& suite) {
  if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  if (suite == "constants") return {1};
  if (suite == "energy") return {2};
  if (suite == "divergence") return {3};
  if (suite == "exterior") return {4, 5};
  if (suite == "interior") return {6};
  if (suite == "spectral") return {7, 8, 9};
  if (suite == "bm") return {10};
  if (suite == "urysohn") return {11};
  if (suite == "numerics") return {12};
  throw std::invalid_argument("unknown suite '" + suite + "'");
}

CriterionResult run_criterion(int id, const SuiteOptions& options) {
  const auto& list = entries();
  const auto it = std::find_if(list.begin(), list.end(), [&](const Entry& e) { return e.info.id == id; });
  if (it == list.end()) throw std::invalid_argument("unknown criterion " + std::to_string(id));
  CriterionResult res;
  res.info = it->info;
  const auto t0 = std::chrono::steady_clock::now();
  Checks checks;
  try {
    it->body(checks, options);
    res.passed = checks.ok();
    std::ostringstream s;
    if (res.passed) {
      s << checks.items().size() << " checks passed";
    } else {
      s << "failed:";
      for (const auto& f : checks.failed()) s << " [" << f << "]";
    }
    res.summary = s.str();
  } catch (const std::exception& e) {
    res.passed = false;
    res.infrastructure_error = true;
    res.summary = std::string("error: ") + e.what();
  }
  res.checks = checks.items();
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::string result_line(const CriterionResult& r) {
  char buf[96];
  std::snprintf(buf, sizeof buf, " (%.1f s, budget %.0f s)", r.seconds, r.info.budget_seconds);
  return std::string(r.passed ? "[PASS] " : "[FAIL] ") + std::to_string(r.info.id) + " " + r.info.name + ": " +
         r.summary + buf;
}

json report_json(const std::vector<CriterionResult>& results, const SuiteOptions& options) {
  json out = {{"schema", "fracberno.verify/1"}, {"fast", options.fast}, {"threads", thread_count()}};
  json list = json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    list.push_back({{"id", r.info.id},
                    {"name", r.info.name},
                    {"passed", r.passed},
                    {"infrastructure_error", r.infrastructure_error},
                    {"summary", r.summary},
                    {"checks", r.checks},
                    {"timing", {{"seconds", round12(r.seconds)}, {"budget_seconds", r.info.budget_seconds}}}});
  }
  out["criteria"] = list;
  out["passed"] = all;
  return out;
}

}  // namespace fracberno::verify
