#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "fracberno/exterior.hpp"
#include "fracberno/gagliardo.hpp"
#include "fracberno/relaxed.hpp"
#include "fracberno/spectral.hpp"

using namespace fracberno;

namespace {

std::vector<double> bump(const Grid& g) {
  std::vector<double> u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = std::exp(-4.0 * dot(g.center(i), g.center(i)));
  return u;
}

void BM_FormAssembly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::centered(2, {0, 0}, n, 2.0 / n);
  for (auto _ : state) benchmark::DoNotOptimize(GagliardoForm(g));
}
BENCHMARK(BM_FormAssembly)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_EnergyAndGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Grid g = Grid::centered(2, {0, 0}, n, 2.0 / n);
  const GagliardoForm form(g);
  const auto u = bump(g);
  std::vector<double> grad(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(form.energy_and_gradient(u, grad));
  state.SetComplexityN(static_cast<long>(g.size()));
}
BENCHMARK(BM_EnergyAndGradient)->Arg(32)->Arg(64)->Arg(128)->Arg(160)->Unit(benchmark::kMillisecond);

void BM_RelaxedStage(benchmark::State& state) {
  const Grid g = square_grid(2, {0, 0}, 1.0, 1.0 / 24);
  const GagliardoForm form(g);
  GridFunction start(g);
  const CellMask K = rasterize(DomainSpec::ball({0, 0}, 0.4), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (K[i]) {
      start.values[i] = 1.0;
      start.fixed[i] = 1;
    }
  }
  std::vector<std::uint8_t> counted(g.size(), 1);
  RelaxedOptions opts;
  opts.eps_schedule = {0.05};
  opts.max_iterations = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        minimize_relaxed(form, start, counted, measure_weight(2.0, g), Penalized::Positive, opts));
  }
}
BENCHMARK(BM_RelaxedStage)->Unit(benchmark::kMillisecond);

void BM_CylinderSolve(benchmark::State& state) {
  CylinderOptions o;
  o.h = 1.0 / static_cast<double>(state.range(0));
  const CylinderGrid cg(DomainSpec::ball({0, 0}, 1.0), o);
  const Polygon K = ball_polygon({{0, 0}, 0.5});
  for (auto _ : state) benchmark::DoNotOptimize(solve_cylinder(cg, K));
}
BENCHMARK(BM_CylinderSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
