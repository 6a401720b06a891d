#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <set>

#include "cli/config.hpp"
#include "fracberno/error.hpp"
#include "fracberno/exterior.hpp"
#include "fracberno/interior.hpp"
#include "fracberno/io.hpp"
#include "fracberno/kernels.hpp"
#include "fracberno/parallel.hpp"
#include "fracberno/spectral.hpp"
#include "verify/suite.hpp"

namespace fracberno::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

json num(double x) { return std::isfinite(x) ? json(round12(x)) : json(nullptr); }

// Error codes that describe bad input rather than a broken run.
bool is_input_error(const std::string& code) {
  static const std::set<std::string> codes{
      "invalid domain", "h must divide box", "K touches box", "grid too large", "unsupported dimension",
      "dimension mismatch", "nonconvex", "margin", "empty K", "empty D", "center-outside", "hypothesis violated",
      "inside unit ball", "sample inside the ball", "out of range", "no seed", "resolution too coarse"};
  return codes.count(code) || code.rfind("invalid", 0) == 0;
}

fs::path prepare_out(const std::string& dir) {
  const fs::path out = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (!fs::is_directory(out)) throw ConfigError("--out", "cannot create directory " + out.string());
  return out;
}

void emit(const fs::path& file, const json& j) {
  write_text(file, j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
}

json header(const std::string& command) { return {{"command", command}, {"version", kVersion}, {"threads", thread_count()}}; }

json stages_json(const std::vector<StageTrace>& stages) {
  json a = json::array();
  for (const auto& s : stages) {
    a.push_back({{"eps", num(s.eps)},
                 {"iterations", s.iterations},
                 {"energy_start", num(s.energy_start)},
                 {"energy_end", num(s.energy_end)},
                 {"residual", num(s.residual)},
                 {"stop", s.stop}});
  }
  return a;
}

json energies_json(const Energies& e) {
  return {{"gagliardo", num(e.gagliardo)}, {"measure", num(e.measure)}, {"total", num(e.total)}};
}

void write_rates(const fs::path& file, const DirectionalRates& r) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < r.rates.size(); ++k) {
    rows.push_back({r.trace.theta[k], r.trace.radius[k], r.rates[k].lambda_hat, r.rates[k].residual});
  }
  write_csv(file, {"theta", "r", "lambda_hat", "residual"}, rows);
}

Vec2 domain_center(const DomainSpec& D) {
  const Box b = D.bounding_box();
  return (b.lo + b.hi) * 0.5;
}

int constants_cmd(int d) {
  const KernelConstants k = kernel_constants(d);
  const json j = {{"d", d}, {"A_d", num(k.A_d)}, {"C0", num(k.C0)}, {"c_tilde", num(k.c_tilde)}, {"I_e1", num(k.I_e1)}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int solve_exterior_cmd(const RunConfig& c, const fs::path& out) {
  if (c.problem != "exterior") throw ConfigError("problem", "solve-exterior needs an exterior config");
  const auto t0 = std::chrono::steady_clock::now();
  ExteriorProblem p;
  p.K = c.domain;
  p.lambda = c.lambda;
  const Box b = exterior_box(c);
  p.grid = Grid::make(c.domain.dim(), b.lo, b.hi, c.h);
  p.relaxed = c.relaxed;
  p.tau = c.tau;
  const FreeBoundaryResult r = minimize_exterior(p);
  write_grid_function(out / "u.csv", r.u.grid, r.u.values);
  write_mask(out / "omega.csv", r.omega);
  json rates = nullptr;
  if (p.grid.dim == 2) {
    const DirectionalRates dr = exterior_rates(r, domain_center(c.domain), c.directions);
    write_rates(out / "boundary.csv", dr);
    rates = {{"mean", num(dr.mean)}, {"directions", dr.rates.size()}};
  }
  json j = header("solve-exterior");
  j["config"] = c.to_json();
  j["energies"] = energies_json(r.energies);
  j["relaxed_energy"] = num(r.relaxed_energy);
  j["set_step"] = r.set_step_accepted ? "accepted" : "set-step rejected";
  j["stages"] = stages_json(r.stages);
  j["diagnostics"] = {{"tail_energy", num(r.tail_energy)},
                      {"box_fill", num(r.box_fill)},
                      {"touches_box", r.touches_box},
                      {"omega_cells", r.omega.count()},
                      {"rates", rates}};
  j["timing_seconds"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  emit(out / "report.json", j);
  return 0;
}

int solve_interior_cmd(const RunConfig& c, const fs::path& out) {
  if (c.problem != "interior") throw ConfigError("problem", "solve-interior needs an interior config");
  const auto t0 = std::chrono::steady_clock::now();
  InteriorProblem p;
  p.D = c.domain;
  p.lambda = c.lambda;
  p.grid = interior_grid(c.domain, c.h);
  p.relaxed = c.relaxed;
  p.sigma = c.sigma;
  p.seed = c.seed;
  const InteriorResult r = minimize_interior(p);
  write_grid_function(out / "u.csv", r.u.grid, r.u.values);
  write_mask(out / "plateau.csv", r.plateau);
  json j = header("solve-interior");
  j["config"] = c.to_json();
  j["energies"] = energies_json(r.energies);
  j["trivial_energy"] = num(r.trivial_energy);
  j["relaxed_energy"] = num(r.relaxed_energy);
  j["nontrivial"] = is_nontrivial(r);
  j["plateau_cells"] = r.plateau.count();
  j["stages"] = stages_json(r.stages);
  if (!r.plateau.empty() && p.grid.dim == 2) {
    try {
      const DirectionalRates dr = interior_rates(r, c.domain, domain_center(c.domain), c.directions);
      write_rates(out / "boundary.csv", dr);
      j["rates_mean"] = num(dr.mean);
    } catch (const Error& e) {
      j["rates_error"] = e.what();
    }
  }
  j["timing_seconds"] = num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  emit(out / "report.json", j);
  return 0;
}

int bernoulli_cmd(const std::string& domain_file, double tol, double h, const fs::path& out) {
  const DomainSpec D = load_domain(domain_file);
  BernoulliOptions o;
  o.tol = tol;
  const BernoulliEstimate e = bernoulli_constant(D, h, o);
  std::vector<std::vector<double>> rows;
  for (const Probe& p : e.probes) rows.push_back({p.lambda, p.energy, p.trivial_energy, p.nontrivial ? 1.0 : 0.0});
  write_csv(out / "probes.csv", {"lambda", "energy", "trivial_energy", "nontrivial"}, rows);
  json j = header("bernoulli-constant");
  j["domain"] = json::parse(domain_to_json(D));
  j["h"] = num(h);
  j["tol"] = tol;
  j["lambda_lo"] = num(e.lambda_lo);
  j["lambda_hi"] = num(e.lambda_hi);
  j["estimate"] = num(e.estimate);
  j["certificate"] = num(e.certificate);
  if (D.dim() == 2) {
    const BoundCheck b = inradius_bound_check(D, e.estimate);
    j["bounds"] = {{"lower", num(b.lower)}, {"upper", num(b.upper)}, {"ok", b.ok}};
  }
  emit(out / "estimate.json", j);
  return 0;
}

LambdaSOptions spectral_options(double h, double tol) {
  LambdaSOptions o;
  o.cylinder.h = h;
  o.tol = tol;
  return o;
}

int spectral_solve_cmd(const std::string& domain_file, double lambda, double h, const fs::path& out) {
  if (!(lambda > 0.0)) throw ConfigError("--lambda", "must be positive");
  const DomainSpec D = load_domain(domain_file);
  BeurlingOptions o;
  o.cylinder.h = h;
  const BeurlingRun run = beurling_grow(D, lambda, o);
  write_text(out / "khat.json", polygon_to_json(run.final_state.K) + "\n");
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < run.rates.size(); ++k) {
    rows.push_back({run.rate_theta[k], run.rates[k].lambda_hat, run.rates[k].residual});
  }
  write_csv(out / "rates.csv", {"theta", "lambda_hat", "residual"}, rows);
  json metrics = json::array();
  for (double m : run.metrics) metrics.push_back(num(m));
  json j = header("spectral-solve");
  j["domain"] = json::parse(domain_to_json(D));
  j["lambda"] = num(lambda);
  j["h"] = num(h);
  j["iterates"] = run.iterates.size();
  j["metrics"] = metrics;
  j["solves"] = run.solves;
  j["nested"] = run.nested;
  j["final"] = {{"sup_ratio", num(run.final_state.sup_ratio)},
                {"sup_rate", num(run.final_state.sup_rate)},
                {"metric", num(run.final_state.metric)},
                {"wall_distance", num(run.final_state.wall_distance)},
                {"area", num(std::abs(signed_area(run.final_state.K)))},
                {"convex", is_convex(run.final_state.K)}};
  emit(out / "report.json", j);
  return 0;
}

json estimate_json(const LambdaSEstimate& e) {
  json seeds = json::array();
  for (const auto& s : e.seeds) {
    seeds.push_back({{"name", s.name}, {"metric", num(s.metric)}, {"wall_distance", num(s.wall_distance)}});
  }
  return {{"lambda_lo", num(e.lambda_lo)}, {"lambda_hi", num(e.lambda_hi)}, {"estimate", num(e.estimate)},
          {"h", num(e.h)},           {"seeds", seeds},                  {"best_seed", e.seeds[e.best_seed].name}};
}

int lambda_s_cmd(const std::string& domain_file, double tol, double h, const fs::path& out) {
  const DomainSpec D = load_domain(domain_file);
  json j = header("lambda-s");
  j["domain"] = json::parse(domain_to_json(D));
  j["tol"] = tol;
  j["result"] = estimate_json(lambda_s(D, spectral_options(h, tol)));
  emit(out / "lambda_s.json", j);
  return 0;
}

std::vector<double> parse_s_list(const std::string& text) {
  std::vector<double> s;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || v < 0.0 || v > 1.0) throw std::invalid_argument(item);
      s.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("--s", "expected comma-separated values in [0, 1], got '" + item + "'");
    }
  }
  if (s.empty()) throw ConfigError("--s", "empty list");
  return s;
}

int bm_cmd(const std::string& d0_file, const std::string& d1_file, const std::string& s_text, double h, double tol,
           const fs::path& out) {
  const DomainSpec D0 = load_domain(d0_file), D1 = load_domain(d1_file);
  const std::vector<double> s = parse_s_list(s_text);
  const BMReport r = bm_verify(D0, D1, s, spectral_options(h, tol));
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"s", num(e.s)},
                       {"lambda_s", num(e.lambda_s)},
                       {"rhs", num(e.rhs)},
                       {"inequality_ok", e.inequality_ok},
                       {"transfer_metric", num(e.transfer_metric)},
                       {"transfer_lambda", num(e.transfer_lambda)},
                       {"transfer_ok", e.transfer_ok}});
  }
  json j = header("bm-verify");
  j["lambda0"] = num(r.lambda0);
  j["lambda1"] = num(r.lambda1);
  j["slack"] = num(r.slack);
  j["entries"] = entries;
  j["ok"] = r.ok;
  emit(out / "bm_report.json", j);
  return r.ok ? 0 : 1;
}

int urysohn_cmd(const std::string& domain_file, double h, double tol, const fs::path& out) {
  const DomainSpec D = load_domain(domain_file);
  const UrysohnReport r = urysohn_verify(D, spectral_options(h, tol));
  json j = header("urysohn-verify");
  j["domain"] = json::parse(domain_to_json(D));
  j["mean_width"] = num(r.mean_width);
  j["lambda_D"] = num(r.lambda_D);
  j["lambda_B"] = num(r.lambda_B);
  j["slack"] = 0.05;
  j["ok"] = r.ok;
  emit(out / "urysohn_report.json", j);
  return r.ok ? 0 : 1;
}

int verify_cmd(const std::string& suite, bool fast, const fs::path& out) {
  std::vector<int> ids;
  try {
    ids = verify::suite_members(suite);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--suite", e.what());
  }
  verify::SuiteOptions opts;
  opts.fast = fast;
  std::vector<verify::CriterionResult> results;
  bool infra = false, ok = true;
  for (int id : ids) {
    results.push_back(verify::run_criterion(id, opts));
    std::cout << verify::result_line(results.back()) << std::endl;
    infra = infra || results.back().infrastructure_error;
    ok = ok && results.back().passed;
  }
  write_text(out / "verify_report.json", verify::report_json(results, opts).dump(2) + "\n");
  if (infra) return static_cast<int>(ExitCode::Infrastructure);
  return ok ? 0 : static_cast<int>(ExitCode::CriterionFailure);
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"fracberno: Bernoulli free boundaries for the half Laplacian"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (overrides FRACBERNO_THREADS)")->check(CLI::PositiveNumber);

  int d = 2;
  auto* constants = app.add_subcommand("constants", "Kernel and profile constants");
  constants->add_option("--d", d, "Dimension")->check(CLI::Range(1, 10));

  std::string config, out, domain, d0, d1, s_list = "0.25,0.5,0.75", suite = "all";
  double lambda = 0.0, tol = 0.0, h = 0.0;
  bool fast = false;

  auto* ext = app.add_subcommand("solve-exterior", "Exterior free-boundary problem");
  ext->add_option("--config", config)->required();
  ext->add_option("--out", out, "Output directory");

  auto* inte = app.add_subcommand("solve-interior", "Interior free-boundary problem");
  inte->add_option("--config", config)->required();
  inte->add_option("--out", out, "Output directory");

  auto* bern = app.add_subcommand("bernoulli-constant", "Bisection for the interior Bernoulli constant");
  bern->add_option("--domain", domain)->required();
  bern->add_option("--tol", tol, "Relative bracket width")->default_val(0.02);
  bern->add_option("--h", h, "Grid spacing")->default_val(1.0 / 32);
  bern->add_option("--out", out, "Output directory");

  auto* spec = app.add_subcommand("spectral-solve", "Beurling growth for the spectral problem");
  spec->add_option("--domain", domain)->required();
  spec->add_option("--lambda", lambda)->required();
  spec->add_option("--h", h, "Cross-section spacing")->default_val(1.0 / 32);
  spec->add_option("--out", out, "Output directory");

  auto* ls = app.add_subcommand("lambda-s", "Spectral Bernoulli constant");
  ls->add_option("--domain", domain)->required();
  ls->add_option("--tol", tol, "Relative bracket width")->default_val(0.05);
  ls->add_option("--h", h, "Cross-section spacing")->default_val(1.0 / 32);
  ls->add_option("--out", out, "Output directory");

  auto* bm = app.add_subcommand("bm-verify", "Brunn-Minkowski inequality for Lambda_S");
  bm->add_option("--d0", d0)->required();
  bm->add_option("--d1", d1)->required();
  bm->add_option("--s", s_list, "Comma-separated fractions");
  bm->add_option("--h", h, "Cross-section spacing")->default_val(1.0 / 32);
  bm->add_option("--tol", tol, "Relative bracket width")->default_val(0.05);
  bm->add_option("--out", out, "Output directory");

  auto* ury = app.add_subcommand("urysohn-verify", "Urysohn inequality for Lambda_S");
  ury->add_option("--domain", domain)->required();
  ury->add_option("--h", h, "Cross-section spacing")->default_val(1.0 / 32);
  ury->add_option("--tol", tol, "Relative bracket width")->default_val(0.05);
  ury->add_option("--out", out, "Output directory");

  auto* ver = app.add_subcommand("verify", "Acceptance suite");
  ver->add_option("--suite", suite, "Suite name")->default_val("all");
  ver->add_flag("--fast", fast, "Reduced grids");
  ver->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::ConfigError);
  }

  try {
    if (threads > 0) set_thread_count(threads);
    for (auto* sub : {bern, spec, ls, bm, ury}) {
      if (sub->parsed() && !(h > 0.0)) throw ConfigError("--h", "must be positive");
      if (sub->parsed() && sub != spec && !(tol > 0.0)) throw ConfigError("--tol", "must be positive");
    }
    if (constants->parsed()) return constants_cmd(d);
    if (ext->parsed() || inte->parsed()) {
      const RunConfig c = parse_config(config);
      if (c.threads > 0 && threads == 0) set_thread_count(c.threads);
      const fs::path dir = prepare_out(out);
      return ext->parsed() ? solve_exterior_cmd(c, dir) : solve_interior_cmd(c, dir);
    }
    if (ver->parsed()) {
      verify::suite_members(suite);  // reject unknown names before touching the disk
      return verify_cmd(suite, fast, prepare_out(out));
    }
    const fs::path dir = prepare_out(out);
    for (const std::string* f : {&domain, &d0, &d1}) {
      if (!f->empty() && !fs::exists(*f)) throw Error("io", "missing file " + *f);
    }
    if (bern->parsed()) return bernoulli_cmd(domain, tol, h, dir);
    if (spec->parsed()) return spectral_solve_cmd(domain, lambda, h, dir);
    if (ls->parsed()) return lambda_s_cmd(domain, tol, h, dir);
    if (bm->parsed()) return bm_cmd(d0, d1, s_list, h, tol, dir);
    if (ury->parsed()) return urysohn_cmd(domain, h, tol, dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::ConfigError);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::ConfigError);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(is_input_error(e.code()) ? ExitCode::ConfigError : ExitCode::Infrastructure);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Infrastructure);
  }
  return static_cast<int>(ExitCode::Infrastructure);
}

}  // namespace fracberno::cli
