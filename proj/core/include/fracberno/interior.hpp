#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fracberno/exterior.hpp"

namespace fracberno {

struct InteriorProblem {
  DomainSpec D = DomainSpec::ball({0, 0}, 1.0);
  double lambda = 1.0;
  Grid grid;
  RelaxedOptions relaxed;
  /// Cells with u >= 1 - sigma form the plateau {u = 1}.
  double sigma = 0.02;
  /// Start from the inner-core plateau; without it the descent starts at 0.
  bool seed = true;
  FormOptions form;
};

struct InteriorResult {
  GridFunction u;                 ///< exact step: harmonic with u = 1 on the plateau
  std::vector<double> relaxed_u;
  CellMask domain;                ///< D cells
  CellMask plateau;
  Energies energies;              ///< exact energy of `u`
  double plateau_energy = 0.0;    ///< Q of the plateau potential (0 if empty)
  double trivial_energy = 0.0;    ///< (pi/4) lambda^2 |D|
  double relaxed_energy = 0.0;
  std::vector<StageTrace> stages;
};

/// Grid with one spare cell around the bounding box of D.
Grid interior_grid(const DomainSpec& D, double h);

/// Distance from p to the boundary of D.
double distance_to_domain_boundary(const DomainSpec& D, Vec2 p);

InteriorResult minimize_interior(const InteriorProblem& problem);

/// Exact energy below the trivial one by more than 1e-6 relative, and a
/// nonempty plateau.
bool is_nontrivial(const InteriorResult& result);

struct Probe {
  double lambda = 0.0;
  double energy = 0.0;
  double trivial_energy = 0.0;
  bool nontrivial = false;
  bool solver_nontrivial = false;  ///< classification from this probe's own minimizer
};

struct BernoulliOptions {
  std::optional<std::pair<double, double>> bracket;
  double tol = 0.02;
  RelaxedOptions relaxed;
  double sigma = 0.02;
};

struct BernoulliEstimate {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double estimate = 0.0;
  std::vector<Probe> probes;
  CellMask plateau;            ///< plateau of the best certificate
  double certificate = 0.0;    ///< min over plateaus P of sqrt(4 Q_P / (pi h^d |P|))
};

/// Explicit lower and upper bounds for Lambda(B_r) in dimension d.
std::pair<double, double> ball_bernoulli_bounds(int d, double r);
/// Measure-based lower and inradius-based upper bound for Lambda(D).
std::pair<double, double> domain_bernoulli_bounds(int d, double measure, double inradius);

/// Bisection over lambda^2 until hi - lo <= tol hi. A lambda is nontrivial if
/// its own minimizer is, or if a plateau P found by any earlier probe has
/// Q_P < (pi/4) lambda^2 h^d |P| (that P beats the zero state).
BernoulliEstimate bernoulli_constant(const DomainSpec& D, double h, const BernoulliOptions& options = {});

struct ComparisonReport {
  double lambda_D = 0.0;
  double lambda_B = 0.0;
  bool ok = false;
};

/// Lambda(D) >= 0.95 Lambda(B) for the ball B with |B| = |D|, both on spacing h.
ComparisonReport isoperimetric_check(const DomainSpec& D, double h, const BernoulliOptions& options = {});

struct BoundCheck {
  double lower = 0.0;
  double upper = 0.0;
  bool ok = false;
};

/// estimate within [0.95 lower, 1.05 upper] of domain_bernoulli_bounds.
BoundCheck inradius_bound_check(const DomainSpec& D, double estimate);

/// sqrt rates of 1 - u along the exterior normal of the plateau.
DirectionalRates interior_rates(const InteriorResult& result, const DomainSpec& D, Vec2 center, int directions = 64);

}  // namespace fracberno
