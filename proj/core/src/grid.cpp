#include "fracberno/grid.hpp"

#include <algorithm>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

int cells_along(double length, double h) {
  const double ratio = length / h;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw Error("h must divide box", "side " + std::to_string(length) + " / h " + std::to_string(h));
  }
  return static_cast<int>(rounded);
}

}  // namespace

Grid Grid::make(int dim, Vec2 lo, Vec2 hi, double h) {
  if (dim != 1 && dim != 2) throw Error("unsupported dimension", std::to_string(dim));
  if (!(h > 0.0)) throw Error("invalid spacing");
  Grid g;
  g.dim = dim;
  g.lo = lo;
  g.h = h;
  g.nx = cells_along(hi.x - lo.x, h);
  g.ny = dim == 1 ? 1 : cells_along(hi.y - lo.y, h);
  if (dim == 1) g.lo.y = 0.0;
  return g;
}

Grid Grid::centered(int dim, Vec2 center, int n, double h) {
  if (n < 1) throw Error("invalid cell count");
  const double half = 0.5 * n * h;
  Grid g;
  g.dim = dim;
  g.h = h;
  g.nx = n;
  g.ny = dim == 1 ? 1 : n;
  g.lo = {center.x - half, dim == 1 ? 0.0 : center.y - half};
  return g;
}

std::optional<std::size_t> Grid::locate(Vec2 p) const {
  const double fx = (p.x - lo.x) / h;
  if (fx < 0.0 || fx > nx) return std::nullopt;
  const int cx = std::min(static_cast<int>(fx), nx - 1);
  if (dim == 1) return index(cx, 0);
  const double fy = (p.y - lo.y) / h;
  if (fy < 0.0 || fy > ny) return std::nullopt;
  const int cy = std::min(static_cast<int>(fy), ny - 1);
  return index(cx, cy);
}

std::size_t CellMask::count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](auto c) { return c != 0; }));
}

bool CellMask::subset_of(const CellMask& other) const {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i] && !other.cells[i]) return false;
  }
  return true;
}

double interpolate(const Grid& grid, std::span<const double> values, Vec2 p) {
  auto sample = [&](int ix, int iy) {
    if (ix < 0 || ix >= grid.nx || iy < 0 || iy >= grid.ny) return 0.0;
    return values[grid.index(ix, iy)];
  };
  const double fx = (p.x - grid.lo.x) / grid.h - 0.5;
  const int x0 = static_cast<int>(std::floor(fx));
  const double ax = fx - x0;
  if (grid.dim == 1) return (1.0 - ax) * sample(x0, 0) + ax * sample(x0 + 1, 0);
  const double fy = (p.y - grid.lo.y) / grid.h - 0.5;
  const int y0 = static_cast<int>(std::floor(fy));
  const double ay = fy - y0;
  return (1.0 - ax) * (1.0 - ay) * sample(x0, y0) + ax * (1.0 - ay) * sample(x0 + 1, y0) +
         (1.0 - ax) * ay * sample(x0, y0 + 1) + ax * ay * sample(x0 + 1, y0 + 1);
}

}  // namespace fracberno
