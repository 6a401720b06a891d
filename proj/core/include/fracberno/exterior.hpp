#pragma once

#include <optional>
#include <vector>

#include "fracberno/gagliardo.hpp"
#include "fracberno/geometry.hpp"
#include "fracberno/relaxed.hpp"

namespace fracberno {

/// (pi / 4) lambda^2 h^d, the weight of one cell in the measure term.
double measure_weight(double lambda, const Grid& grid);

struct ExteriorProblem {
  DomainSpec K = DomainSpec::ball({0, 0}, 0.5);
  double lambda = 2.0;
  Grid grid;
  RelaxedOptions relaxed;
  /// Positivity cutoff of the final set step.
  double tau = 0.01;
  FormOptions form;
};

struct Energies {
  double gagliardo = 0.0;
  double measure = 0.0;
  double total = 0.0;
};

struct FreeBoundaryResult {
  GridFunction u;                  ///< after the exact set step
  std::vector<double> relaxed_u;   ///< end of continuation
  CellMask pinned;                 ///< K (exterior) or the plateau (interior)
  CellMask omega;                  ///< {u > 0} (exterior) or the plateau (interior)
  Energies energies;               ///< exact energy of `u`
  double relaxed_energy = 0.0;
  bool set_step_accepted = true;
  std::vector<StageTrace> stages;
  double tail_energy = 0.0;        ///< sum t_i u_i^2, the exterior interaction
  double box_fill = 0.0;           ///< |omega| / |box|
  bool touches_box = false;        ///< omega reaches the outermost cell layer
};

/// Centred square grid of the given half width (rounded to whole cells).
Grid square_grid(int dim, Vec2 center, double half_width, double h);

FreeBoundaryResult minimize_exterior(const ExteriorProblem& problem);

/// Where the sqrt profile lives relative to the traced set: inside for the
/// positivity set of the exterior problem, outside for a plateau {u = 1}.
enum class ProfileSide { Inside, Outside };

struct BoundaryTrace {
  Vec2 center;
  std::vector<double> theta;
  std::vector<double> radius;
  std::vector<Vec2> points;
  std::vector<Vec2> normals;  ///< unit normals pointing into the traced set
};

/// Radial boundary of a set starshaped about `center`, along M equispaced
/// rays theta_k = offset + 2 pi k / M, sampled at h / 8. With a field the
/// crossing is refined by extrapolating the square of the profile (|u - base|^2
/// is linear in the distance for a sqrt profile) from the two cells beside it.
/// Throws "use mask boundary" if a ray leaves the set and re-enters it.
BoundaryTrace extract_boundary(const CellMask& set, Vec2 center, int directions, const GridFunction* u = nullptr,
                               ProfileSide side = ProfileSide::Inside, double base = 0.0, double angle_offset = 0.0);

/// Fallback for sets that are not starshaped: midpoints of the cell faces
/// separating marked from unmarked cells, in no particular order.
std::vector<Vec2> mask_boundary_points(const CellMask& set);

struct RateEstimate {
  double lambda_hat = 0.0;
  double residual = 0.0;  ///< rms misfit relative to lambda_hat sqrt(t_max)
  int samples = 0;
};

/// Least-squares fit |u(p + t nu) - base| ~ lambda_hat sqrt(t) over `samples`
/// equispaced t in [t_min, t_max]; needs t_min >= 2h. Samples outside the box
/// or inside `obstacle` throw "window collision".
RateEstimate sqrt_rate(const GridFunction& u, Vec2 point, Vec2 normal, double t_min, double t_max, double base = 0.0,
                       const CellMask* obstacle = nullptr, int samples = 12);

/// Distance from p to the nearest marked cell (its square, not its centre).
double distance_to_mask(const CellMask& mask, Vec2 p);

struct DirectionalRates {
  BoundaryTrace trace;
  std::vector<RateEstimate> rates;
  double mean = 0.0;
};

/// Per-direction sqrt rates at the free boundary of an exterior result.
DirectionalRates exterior_rates(const FreeBoundaryResult& result, Vec2 center, int directions = 64);

struct MonotonicityReport {
  bool ok = true;
  double max_violation = 0.0;       ///< max (u_small - u_big)
  std::size_t worst_cell = 0;
  std::size_t omega_violations = 0; ///< cells of omega_small outside omega_big and its one-cell layer
  FreeBoundaryResult small;
  FreeBoundaryResult big;
};

/// Runs both problems (same grid and lambda) and checks the comparison
/// principle u_big >= u_small - 1e-6 together with omega nesting.
MonotonicityReport check_uniqueness_monotonicity(const ExteriorProblem& small, const ExteriorProblem& big);

/// geometry::is_starshaped of {u > level} for every level. Throws
/// "hypothesis violated" if the pinned set is not starshaped about the ball.
std::vector<bool> check_starshaped_levels(const FreeBoundaryResult& result, const Ball& center_ball,
                                          const std::vector<double>& levels);

/// One-cell dilation (8-neighbourhood in d = 2).
CellMask dilate(const CellMask& mask);

}  // namespace fracberno
