#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fracberno {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit_direction(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Uniform cell-centred grid on an axis-aligned box in d = 1 or 2.
/// In d = 1 only the x axis is used and ny == 1.
struct Grid {
  int dim = 2;
  Vec2 lo;
  int nx = 0;
  int ny = 1;
  double h = 0.0;

  /// Builds the grid covering [lo, hi]; throws "h must divide box" if the
  /// side lengths are not integer multiples of h.
  static Grid make(int dim, Vec2 lo, Vec2 hi, double h);
  /// Square (or interval) box centred at `center` with n cells per axis.
  static Grid centered(int dim, Vec2 center, int n, double h);

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
  int ix(std::size_t i) const { return static_cast<int>(i % nx); }
  int iy(std::size_t i) const { return static_cast<int>(i / nx); }
  Vec2 center(int ix, int iy) const {
    return {lo.x + (ix + 0.5) * h, dim == 1 ? 0.0 : lo.y + (iy + 0.5) * h};
  }
  Vec2 center(std::size_t i) const { return center(ix(i), iy(i)); }
  Vec2 hi() const { return {lo.x + nx * h, dim == 1 ? lo.y : lo.y + ny * h}; }
  double cell_volume() const { return dim == 1 ? h : h * h; }
  /// Cell whose closed square contains p, if p lies in the box.
  std::optional<std::size_t> locate(Vec2 p) const;

  bool operator==(const Grid&) const = default;
};

/// Boolean field over the cells of a grid.
struct CellMask {
  Grid grid;
  std::vector<std::uint8_t> cells;

  CellMask() = default;
  explicit CellMask(const Grid& g) : grid(g), cells(g.size(), 0) {}

  bool operator[](std::size_t i) const { return cells[i] != 0; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  /// True when every cell of `this` is also set in `other`.
  bool subset_of(const CellMask& other) const;
};

/// Values on the cells of a grid plus the mask of pinned (Dirichlet) cells.
/// Off the box the field is zero.
struct GridFunction {
  Grid grid;
  std::vector<double> values;
  std::vector<std::uint8_t> fixed;

  GridFunction() = default;
  explicit GridFunction(const Grid& g) : grid(g), values(g.size(), 0.0), fixed(g.size(), 0) {}

  bool is_fixed(std::size_t i) const { return fixed[i] != 0; }
};

/// Bilinear (linear in d = 1) interpolation of cell-centred data; the field is
/// taken to vanish at the centres of the ghost cells around the box.
double interpolate(const Grid& grid, std::span<const double> values, Vec2 p);

}  // namespace fracberno
