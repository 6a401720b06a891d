#pragma once

#include <string>
#include <variant>
#include <vector>

#include "fracberno/grid.hpp"

namespace fracberno {

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

struct Box {
  Vec2 lo;
  Vec2 hi;
};

/// Simple polygon, vertices in counterclockwise order.
struct Polygon {
  std::vector<Vec2> vertices;
};

/// Star-shaped planar set {center + r (cos t, sin t) : r < rho(t)} with rho
/// sampled at M equispaced angles 2 pi k / M and interpolated linearly.
struct StarShaped {
  Vec2 center;
  std::vector<double> rho;

  double radius_at(double theta) const;
};

/// Geometric description of K or D. Balls and boxes exist in d = 1 (intervals)
/// and d = 2; polygons and star-shaped sets are planar.
class DomainSpec {
 public:
  using Shape = std::variant<Ball, Box, Polygon, StarShaped>;

  static DomainSpec ball(Vec2 center, double radius, int dim = 2);
  static DomainSpec box(Vec2 lo, Vec2 hi, int dim = 2);
  static DomainSpec polygon(std::vector<Vec2> vertices);
  static DomainSpec star(Vec2 center, std::vector<double> rho);

  int dim() const { return dim_; }
  const Shape& shape() const { return shape_; }
  std::string kind() const;

  /// Membership of the open set.
  bool contains(Vec2 p) const;
  /// The dilate s * D about the origin.
  DomainSpec scaled(double s) const;
  DomainSpec translated(Vec2 offset) const;
  Box bounding_box() const;
  /// Lebesgue measure (length in d = 1, area in d = 2).
  double measure() const;
  double diameter() const;
  /// Support function sup_{x in D} <x, direction>.
  double support(Vec2 direction) const;
  bool is_convex() const;
  /// Polygonal outline: circumscribed regular `samples`-gon for a ball, the
  /// corners of a box, the vertices of a polygon, sampled boundary of a star.
  Polygon outline(int samples = 720) const;

 private:
  DomainSpec(Shape shape, int dim) : shape_(std::move(shape)), dim_(dim) {}

  Shape shape_;
  int dim_ = 2;
};

struct SupportFunction {
  int directions = 0;
  std::vector<double> samples;  ///< h(xi_k), xi_k = (cos 2 pi k / M, sin 2 pi k / M)

  Vec2 direction(int k) const { return unit_direction(2.0 * 3.14159265358979323846 * k / directions); }
};

double signed_area(const Polygon& poly);
double perimeter(const Polygon& poly);
bool is_convex(const Polygon& poly);
bool is_simple(const Polygon& poly);
/// Counterclockwise convex hull with collinear points removed.
Polygon convex_hull(std::vector<Vec2> points);
/// Distance from p to the polygon's boundary.
double distance_to_boundary(const Polygon& poly, Vec2 p);
/// Euclidean distance from p to a convex polygon (zero inside).
double distance_to_convex(const Polygon& poly, Vec2 p);
bool point_in_polygon(const Polygon& poly, Vec2 p);

/// Cells whose centre lies in the domain.
CellMask rasterize(const DomainSpec& domain, const Grid& grid);

/// Star-shapedness of a cell set with respect to every point of a fixed
/// 5^d lattice inside `center_ball`. Segments are sampled at h/2; a sample is
/// accepted when a marked cell centre lies within one cell spacing of it.
/// Throws "center-outside" when the lattice is not covered by the mask.
bool is_starshaped(const CellMask& mask, const Ball& center_ball);

/// True when every cell centre inside the convex hull of the marked centres,
/// farther than h from the hull boundary, is marked. Throws on an empty mask.
bool is_convex_mask(const CellMask& mask);

SupportFunction sample_support(const DomainSpec& domain, int directions = 720);

/// (1 - s) d0 + s d1 as an exact polygon Minkowski sum of the outlines.
/// Throws "nonconvex" for nonconvex input.
DomainSpec minkowski_combine(const DomainSpec& d0, const DomainSpec& d1, double s);

/// Planar mean width (1/pi) * integral of h_D over the circle, trapezoid rule.
double mean_width(const DomainSpec& domain, int directions = 720);

/// Exact for balls and boxes; for polygon and star domains a grid search of
/// the distance to the boundary refined by pattern search (a lower bound).
double inradius(const DomainSpec& domain);
/// Centre and radius of the (approximate) largest inscribed ball.
Ball inscribed_ball(const DomainSpec& domain);

}  // namespace fracberno
