#include "fracberno/relaxed.hpp"

#include <algorithm>
#include <cmath>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

struct Objective {
  const GagliardoForm& form;
  std::span<const std::uint8_t> fixed;
  std::span<const std::uint8_t> counted;
  double mu;
  Penalized kind;
  double eps;

  double penalty_arg(double u) const { return kind == Penalized::Positive ? u : 1.0 - u; }

  // Value and gradient. The kinks of H_eps take the one-sided slope that
  // points into the admissible box: 1/eps on [0, eps).
  double eval(std::span<const double> u, std::span<double> g) const {
    double f = form.energy_and_gradient(u, g);
    const double sign = kind == Penalized::Positive ? 1.0 : -1.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (fixed[i]) {
        g[i] = 0.0;
        continue;
      }
      if (!counted[i]) continue;
      const double s = penalty_arg(u[i]);
      f += mu * relaxed_step(s, eps);
      if (s >= 0.0 && s < eps) g[i] += sign * mu / eps;
    }
    return f;
  }
};

// Projected step scaled by the diagonal of Q, so the residual is measured in
// units of u rather than of the (h-dependent) gradient.
double projected_residual(const GagliardoForm& form, std::span<const double> u, std::span<const double> g,
                          std::span<const std::uint8_t> fixed) {
  double r = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (fixed[i]) continue;
    const double p = std::clamp(u[i] - g[i] / form.diagonal(i), 0.0, 1.0);
    r = std::max(r, std::abs(p - u[i]));
  }
  return r;
}

}  // namespace

double relaxed_step(double s, double eps) { return std::clamp(s / eps, 0.0, 1.0); }

double relaxed_energy(const GagliardoForm& form, std::span<const double> u, std::span<const std::uint8_t> fixed,
                      std::span<const std::uint8_t> counted, double mu, Penalized kind, double eps) {
  std::vector<double> g(u.size());
  return Objective{form, fixed, counted, mu, kind, eps}.eval(u, g);
}

RelaxedResult minimize_relaxed(const GagliardoForm& form, const GridFunction& start,
                               std::span<const std::uint8_t> counted, double mu, Penalized kind,
                               const RelaxedOptions& options) {
  if (!(start.grid == form.grid())) throw Error("grid mismatch");
  if (options.eps_schedule.empty()) throw Error("invalid schedule", "empty continuation schedule");
  for (std::size_t k = 0; k < options.eps_schedule.size(); ++k) {
    const double e = options.eps_schedule[k];
    if (!(e >= 1e-4) || (k > 0 && !(e < options.eps_schedule[k - 1]))) {
      throw Error("invalid schedule", "eps must decrease strictly and stay >= 1e-4");
    }
  }
  const std::size_t n = start.grid.size();
  RelaxedResult out;
  out.u = start.values;
  for (std::size_t i = 0; i < n; ++i) {
    if (!start.is_fixed(i)) out.u[i] = std::clamp(out.u[i], 0.0, 1.0);
  }
  std::vector<double>& u = out.u;
  std::vector<double> g(n), u_new(n), g_new(n);

  for (double eps : options.eps_schedule) {
    const Objective obj{form, start.fixed, counted, mu, kind, eps};
    StageTrace trace;
    trace.eps = eps;
    double f = obj.eval(u, g);
    trace.energy_start = f;
    double step = 1.0;
    {
      // Initial step from the diagonal of the quadratic part.
      double dmax = 0.0;
      for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, form.diagonal(i));
      step = dmax > 0.0 ? 0.5 / dmax : 1.0;
    }
    double f_mark = f;
    trace.stop = "iteration cap";
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      trace.residual = projected_residual(form, u, g, start.fixed);
      if (trace.residual <= options.tol) {
        trace.stop = "tolerance";
        break;
      }
      double f_new = 0.0;
      double alpha = step;
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        double decrease = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          u_new[i] = start.is_fixed(i) ? u[i] : std::clamp(u[i] - alpha * g[i], 0.0, 1.0);
          decrease += g[i] * (u[i] - u_new[i]);
        }
        f_new = obj.eval(u_new, g_new);
        if (f_new <= f - 1e-4 * decrease) {
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        trace.stop = "stagnation";
        break;
      }
      // Barzilai-Borwein step from the accepted move.
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double s = u_new[i] - u[i];
        ss += s * s;
        sy += s * (g_new[i] - g[i]);
      }
      step = sy > 0.0 ? std::clamp(ss / sy, 1e-12, 1e12) : 2.0 * alpha;
      u.swap(u_new);
      g.swap(g_new);
      f = f_new;
      if ((it + 1) % 50 == 0) {
        if (f_mark - f <= options.stagnation * std::max(1.0, std::abs(f))) {
          trace.stop = "stagnation";
          ++it;
          break;
        }
        f_mark = f;
      }
    }
    trace.iterations = it;
    trace.energy_end = f;
    trace.residual = projected_residual(form, u, g, start.fixed);
    if (trace.energy_end > trace.energy_start * (1.0 + 1e-6) + 1e-300) {
      throw Error("continuation failed", "stage energy increased");
    }
    out.stages.push_back(trace);
  }
  return out;
}

}  // namespace fracberno
