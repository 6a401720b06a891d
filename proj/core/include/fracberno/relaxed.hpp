#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracberno/gagliardo.hpp"

namespace fracberno {

struct RelaxedOptions {
  std::vector<double> eps_schedule{0.2, 0.1, 0.05, 0.02, 0.01};
  /// Stage stops when max |u - P(u - g / diag)| <= tol, diag the diagonal of Q.
  double tol = 1e-6;
  int max_iterations = 4000;
  /// Stage stops when the relative energy drop over 50 iterations is below this.
  double stagnation = 1e-12;
};

/// Which quantity the measure penalty acts on: H_eps(u) counts {u > 0},
/// H_eps(1 - u) counts {u < 1}.
enum class Penalized { Positive, BelowOne };

struct StageTrace {
  double eps = 0.0;
  int iterations = 0;
  double energy_start = 0.0;
  double energy_end = 0.0;
  double residual = 0.0;
  std::string stop;  ///< "tolerance", "stagnation" or "iteration cap"
};

struct RelaxedResult {
  std::vector<double> u;
  std::vector<StageTrace> stages;
};

/// H_eps(s) = clamp(s / eps, 0, 1).
double relaxed_step(double s, double eps);

/// Relaxed energy Q(u) + mu sum_{i in counted, free} H_eps(s_i).
double relaxed_energy(const GagliardoForm& form, std::span<const double> u, std::span<const std::uint8_t> fixed,
                      std::span<const std::uint8_t> counted, double mu, Penalized kind, double eps);

/// Continuation over eps with a projected Barzilai-Borwein gradient method on
/// [0, 1]^free and monotone backtracking. Pinned cells keep their values.
RelaxedResult minimize_relaxed(const GagliardoForm& form, const GridFunction& start,
                               std::span<const std::uint8_t> counted, double mu, Penalized kind,
                               const RelaxedOptions& options);

}  // namespace fracberno
