#pragma once

#include <optional>
#include <vector>

#include "fracberno/cylinder.hpp"
#include "fracberno/exterior.hpp"

namespace fracberno {

struct AdmissibilityOptions {
  double tol = 0.02;
  /// Trace cells closer than exclusion * h to K are left to the rate fits.
  double exclusion = 0.5;
  /// Include the normal sqrt-rate fits in the sup.
  bool use_rates = true;
  int rate_directions = 32;
};

/// A candidate K with its cylinder potential and the lambda-independent
/// quantities that decide admissibility.
struct SubsolutionState {
  Polygon K;
  CylinderSolution solution;
  double sup_ratio = 0.0;         ///< sup (1 - v(x,0)) / delta_K(x)^{1/2}, delta_K >= exclusion h
  Vec2 argmax;
  double sup_rate = 0.0;          ///< max of the normal rate fits
  std::vector<double> rate_theta;
  std::vector<RateEstimate> rates;
  double wall_distance = 0.0;     ///< dist(K, boundary of D)

  /// max(sup_ratio, sup_rate) (or sup_ratio alone without rate fits).
  double metric = 0.0;
};

/// Solves the cylinder problem for K and evaluates the ratio field.
SubsolutionState evaluate_subsolution(const CylinderGrid& grid, const Polygon& K,
                                      const AdmissibilityOptions& options = {},
                                      const std::vector<double>* warm = nullptr);

struct Admissibility {
  bool admissible = false;
  double sup_ratio = 0.0;
  Vec2 argmax;
};

/// admissible iff metric <= lambda (1 + tol).
Admissibility admissibility(const SubsolutionState& state, double lambda, const AdmissibilityOptions& options = {});

/// dist(K, boundary of D) >= 1 / lambda^2 - 2h.
bool satisfies_distance_bound(const SubsolutionState& state, double lambda, double h);

/// Convex polygon with outward facet normals at M fixed angles 2 pi m / M;
/// growth only raises support values, so successive sets are nested.
struct SupportPolygon {
  std::vector<double> support;

  static SupportPolygon from_polygon(const Polygon& K, int directions);
  int directions() const { return static_cast<int>(support.size()); }
  Vec2 normal(int m) const;
  Polygon polygon() const;
  /// Adds a point: support_m = max(support_m, <p, xi_m>).
  void include(Vec2 p);
  void dilate(double delta);
};

struct ClosureResult {
  SubsolutionState state;
  bool admissible = false;
  /// Inputs admissible but the hull fails beyond 2 tol: a discretization
  /// violation of the hull lemma, reported rather than hidden.
  bool violation = false;
};

/// Convex hull of the union of the inputs, re-solved and re-checked.
ClosureResult convex_closure(const CylinderGrid& grid, const std::vector<Polygon>& inputs, double lambda,
                             const AdmissibilityOptions& options = {});

struct BeurlingOptions {
  CylinderOptions cylinder;
  AdmissibilityOptions admissibility;
  int push_directions = 32;
  int support_directions = 64;
  /// Initial step; default inradius / 8.
  std::optional<double> delta0;
  std::optional<Polygon> K0;
  int max_sweeps = 400;
};

struct BeurlingRun {
  std::vector<Polygon> iterates;
  std::vector<double> metrics;
  SubsolutionState final_state;
  std::vector<double> rate_theta;
  std::vector<RateEstimate> rates;  ///< certificate on the final set
  int solves = 0;
  bool nested = true;
};

/// Beurling growth inside the admissible class F(D, lambda).
BeurlingRun beurling_grow(const DomainSpec& D, double lambda, const BeurlingOptions& options = {});

/// Regular polygon circumscribing the ball.
Polygon ball_polygon(const Ball& b, int sides = 64);

struct SeedResult {
  std::string name;
  Polygon K;
  double metric = 0.0;
  double wall_distance = 0.0;
};

struct LambdaSOptions {
  CylinderOptions cylinder;
  AdmissibilityOptions admissibility;
  double tol = 0.05;
  std::vector<double> ball_fractions{0.2, 0.4, 0.6, 0.8};
  /// Homothetic copies of D about the incentre at these fractions.
  std::vector<double> homothetic_fractions{};
};

struct LambdaSEstimate {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double estimate = 0.0;
  std::vector<SeedResult> seeds;
  std::size_t best_seed = 0;
  double h = 0.0;
};

/// Bisection on lambda with a finite seed menu (centred balls, the profile
/// seed B_{r/2}, optional homothets). The upper end c_2 / sqrt(r) * 1.05 must
/// be admissible, else "resolution too coarse".
LambdaSEstimate lambda_s(const DomainSpec& D, const LambdaSOptions& options = {});

struct BMEntry {
  double s = 0.0;
  double lambda_s = 0.0;
  double rhs = 0.0;
  bool inequality_ok = false;
  double transfer_metric = 0.0;
  double transfer_lambda = 0.0;
  double transfer_wall = 0.0;  ///< dist of the transferred K to the boundary of D_s
  bool transfer_ok = false;
};

struct BMReport {
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  double slack = 0.0;
  std::vector<BMEntry> entries;
  bool ok = false;
};

BMReport bm_verify(const DomainSpec& D0, const DomainSpec& D1, const std::vector<double>& s_grid,
                   const LambdaSOptions& options = {});

struct UrysohnReport {
  double lambda_D = 0.0;
  double lambda_B = 0.0;
  double mean_width = 0.0;
  bool ok = false;
};

UrysohnReport urysohn_verify(const DomainSpec& D, const LambdaSOptions& options = {});

}  // namespace fracberno
