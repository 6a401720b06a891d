#pragma once

#include <span>
#include <vector>

#include "fracberno/geometry.hpp"

namespace fracberno {

struct CylinderOptions {
  double h = 1.0 / 48.0;
  /// Truncation height Y = height_factor * diam(D).
  double height_factor = 2.0;
  /// Unknown levels y_0 = 0 < ... < y_{levels-1} < y_levels = Y.
  int levels = 48;
  /// Levels spaced h before geometric grading starts.
  int fine_levels = 8;
  /// CG stops when ||r||_2 <= tol ||b||_2.
  double tol = 1e-9;
  int max_iterations = 20000;
};

/// Half cylinder D x [0, Y] for the harmonic extension with even symmetry in
/// y: cross-section cells of D on a uniform grid, graded levels in y.
class CylinderGrid {
 public:
  CylinderGrid(const DomainSpec& D, const CylinderOptions& options);

  const DomainSpec& domain() const { return D_; }
  const CylinderOptions& options() const { return options_; }
  const Grid& cross_section() const { return grid_; }
  const CellMask& domain_mask() const { return mask_; }
  /// y_0 .. y_levels; the last entry is the Dirichlet cap Y.
  std::span<const double> heights() const { return y_; }
  double height() const { return y_.back(); }
  int levels() const { return options_.levels; }
  std::size_t cells() const { return cells_.size(); }
  /// Grid index of the c-th domain cell.
  std::size_t grid_index(std::size_t c) const { return cells_[c]; }
  /// Domain-cell number of a grid cell, or -1 off D.
  long compressed(std::size_t i) const { return compressed_[i]; }
  /// Neighbour in direction k (0:+x, 1:-x, 2:+y, 3:-y), -1 across the wall.
  long neighbor(std::size_t c, int k) const { return neighbors_[4 * c + k]; }
  /// 1 / theta for a wall neighbour (Shortley-Weller), 1 otherwise.
  double wall_factor(std::size_t c, int k) const { return factors_[4 * c + k]; }

 private:
  DomainSpec D_;
  CylinderOptions options_;
  Grid grid_;
  CellMask mask_;
  std::vector<double> y_;
  std::vector<std::size_t> cells_;
  std::vector<long> compressed_;
  std::vector<long> neighbors_;
  std::vector<double> factors_;
};

struct CylinderSolution {
  std::vector<double> v;      ///< level-major: v[k * cells + c]
  std::vector<double> trace;  ///< v(., 0) on the cross-section grid (1 on K, 0 off D)
  CellMask K_mask;
  int iterations = 0;
  double residual = 0.0;      ///< ||r||_2 / ||b||_2 at exit
};

/// Minimum over the vertices of K of the distance to the boundary of D
/// (exact for convex D and convex K, since that distance is concave on D).
double distance_to_wall(const DomainSpec& D, const Polygon& K);

/// Harmonic v on the half cylinder: v = 1 on K x {0}, v = 0 on the wall and at
/// y = Y, Neumann on (D \ K) x {0}. Cells of K are those whose centre lies in
/// K; the trace-plane edges that cross the boundary of K and the edges that
/// cross the wall are shortened to the crossing (Shortley-Weller). Solved by
/// conjugate gradient with a y-line tridiagonal preconditioner.
/// Throws "margin" if K is closer than 2h to the wall.
CylinderSolution solve_cylinder(const CylinderGrid& grid, const Polygon& K, const std::vector<double>* warm = nullptr);

/// max over columns and levels of v(k+1) - v(k) (positive part).
double axial_monotonicity_violation(const CylinderGrid& grid, const CylinderSolution& sol);

}  // namespace fracberno
