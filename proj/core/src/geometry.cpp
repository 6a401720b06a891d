#include "fracberno/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracberno/error.hpp"

namespace fracberno {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

std::vector<Vec2> star_points(const StarShaped& s, int per_sample) {
  const int m = static_cast<int>(s.rho.size()) * per_sample;
  std::vector<Vec2> pts;
  pts.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double t = 2.0 * kPi * k / m;
    pts.push_back(s.center + unit_direction(t) * s.radius_at(t));
  }
  return pts;
}

Polygon circumscribed_ngon(const Ball& b, int samples) {
  // Edge normals at 2 pi k / M touch the circle, so the support function is
  // exact in those directions.
  Polygon poly;
  poly.vertices.reserve(samples);
  const double r = b.radius / std::cos(kPi / samples);
  for (int k = 0; k < samples; ++k) {
    poly.vertices.push_back(b.center + unit_direction(2.0 * kPi * (k + 0.5) / samples) * r);
  }
  return poly;
}

std::vector<Vec2> remove_collinear(const std::vector<Vec2>& v) {
  if (v.size() < 3) return v;
  std::vector<Vec2> out;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 prev = v[(i + n - 1) % n], cur = v[i], next = v[(i + 1) % n];
    const double scale = std::max(norm(cur - prev) * norm(next - cur), 1e-300);
    if (std::abs(cross(cur - prev, next - cur)) > 1e-14 * scale) out.push_back(cur);
  }
  return out;
}

}  // namespace

double StarShaped::radius_at(double theta) const {
  const int m = static_cast<int>(rho.size());
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  const double f = t / (2.0 * kPi) * m;
  const int k = static_cast<int>(std::floor(f)) % m;
  const double a = f - std::floor(f);
  return (1.0 - a) * rho[k] + a * rho[(k + 1) % m];
}

DomainSpec DomainSpec::ball(Vec2 center, double radius, int dim) {
  if (!(radius > 0.0)) throw Error("invalid domain", "ball radius must be positive");
  if (dim != 1 && dim != 2) throw Error("invalid domain", "dimension must be 1 or 2");
  if (dim == 1) center.y = 0.0;
  return DomainSpec(Ball{center, radius}, dim);
}

DomainSpec DomainSpec::box(Vec2 lo, Vec2 hi, int dim) {
  if (dim != 1 && dim != 2) throw Error("invalid domain", "dimension must be 1 or 2");
  if (!(lo.x < hi.x) || (dim == 2 && !(lo.y < hi.y))) throw Error("invalid domain", "box needs lo < hi");
  if (dim == 1) lo.y = hi.y = 0.0;
  return DomainSpec(Box{lo, hi}, dim);
}

DomainSpec DomainSpec::polygon(std::vector<Vec2> vertices) {
  Polygon poly{std::move(vertices)};
  if (poly.vertices.size() < 3) throw Error("invalid domain", "polygon needs at least 3 vertices");
  if (!(signed_area(poly) > 0.0)) throw Error("invalid domain", "polygon vertices must be counterclockwise");
  if (!is_simple(poly)) throw Error("invalid domain", "polygon must be simple");
  return DomainSpec(std::move(poly), 2);
}

DomainSpec DomainSpec::star(Vec2 center, std::vector<double> rho) {
  if (rho.size() < 3) throw Error("invalid domain", "star profile needs at least 3 samples");
  for (double r : rho) {
    if (!(r > 0.0)) throw Error("invalid domain", "star radius must be positive");
  }
  return DomainSpec(StarShaped{center, std::move(rho)}, 2);
}

std::string DomainSpec::kind() const {
  return std::visit(Overloaded{[](const Ball&) { return std::string("ball"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Polygon&) { return std::string("polygon"); },
                               [](const StarShaped&) { return std::string("star"); }},
                    shape_);
}

bool DomainSpec::contains(Vec2 p) const {
  return std::visit(
      Overloaded{[&](const Ball& b) {
                   const Vec2 d = p - b.center;
                   return dim_ == 1 ? std::abs(d.x) < b.radius : dot(d, d) < b.radius * b.radius;
                 },
                 [&](const Box& b) {
                   const bool in_x = p.x > b.lo.x && p.x < b.hi.x;
                   return dim_ == 1 ? in_x : in_x && p.y > b.lo.y && p.y < b.hi.y;
                 },
                 [&](const Polygon& poly) { return point_in_polygon(poly, p); },
                 [&](const StarShaped& s) {
                   const Vec2 d = p - s.center;
                   const double r = norm(d);
                   if (r == 0.0) return true;
                   return r < s.radius_at(std::atan2(d.y, d.x));
                 }},
      shape_);
}

DomainSpec DomainSpec::scaled(double s) const {
  if (!(s > 0.0)) throw Error("invalid domain", "scale must be positive");
  return std::visit(Overloaded{[&](const Ball& b) { return DomainSpec(Ball{b.center * s, b.radius * s}, dim_); },
                               [&](const Box& b) { return DomainSpec(Box{b.lo * s, b.hi * s}, dim_); },
                               [&](const Polygon& poly) {
                                 Polygon out = poly;
                                 for (auto& v : out.vertices) v = v * s;
                                 return DomainSpec(std::move(out), 2);
                               },
                               [&](const StarShaped& st) {
                                 StarShaped out{st.center * s, st.rho};
                                 for (auto& r : out.rho) r *= s;
                                 return DomainSpec(std::move(out), 2);
                               }},
                    shape_);
}

DomainSpec DomainSpec::translated(Vec2 offset) const {
  if (dim_ == 1) offset.y = 0.0;
  return std::visit(Overloaded{[&](const Ball& b) { return DomainSpec(Ball{b.center + offset, b.radius}, dim_); },
                               [&](const Box& b) { return DomainSpec(Box{b.lo + offset, b.hi + offset}, dim_); },
                               [&](const Polygon& poly) {
                                 Polygon out = poly;
                                 for (auto& v : out.vertices) v = v + offset;
                                 return DomainSpec(std::move(out), 2);
                               },
                               [&](const StarShaped& st) {
                                 return DomainSpec(StarShaped{st.center + offset, st.rho}, 2);
                               }},
                    shape_);
}

Box DomainSpec::bounding_box() const {
  return std::visit(Overloaded{[&](const Ball& b) {
                                 const Vec2 r{b.radius, dim_ == 1 ? 0.0 : b.radius};
                                 return Box{b.center - r, b.center + r};
                               },
                               [](const Box& b) { return b; },
                               [](const Polygon& poly) {
                                 Box bb{poly.vertices[0], poly.vertices[0]};
                                 for (auto v : poly.vertices) {
                                   bb.lo = {std::min(bb.lo.x, v.x), std::min(bb.lo.y, v.y)};
                                   bb.hi = {std::max(bb.hi.x, v.x), std::max(bb.hi.y, v.y)};
                                 }
                                 return bb;
                               },
                               [](const StarShaped& s) {
                                 const double r = *std::max_element(s.rho.begin(), s.rho.end());
                                 return Box{s.center - Vec2{r, r}, s.center + Vec2{r, r}};
                               }},
                    shape_);
}

double DomainSpec::measure() const {
  return std::visit(Overloaded{[&](const Ball& b) { return dim_ == 1 ? 2.0 * b.radius : kPi * b.radius * b.radius; },
                               [&](const Box& b) {
                                 const double w = b.hi.x - b.lo.x;
                                 return dim_ == 1 ? w : w * (b.hi.y - b.lo.y);
                               },
                               [](const Polygon& poly) { return signed_area(poly); },
                               [](const StarShaped& s) {
                                 // Area of the piecewise-linear-in-angle profile, by fine sampling.
                                 const int m = static_cast<int>(s.rho.size()) * 64;
                                 double area = 0.0;
                                 for (int k = 0; k < m; ++k) {
                                   const double r = s.radius_at(2.0 * kPi * (k + 0.5) / m);
                                   area += 0.5 * r * r * (2.0 * kPi / m);
                                 }
                                 return area;
                               }},
                    shape_);
}

double DomainSpec::diameter() const {
  if (const auto* b = std::get_if<Ball>(&shape_)) return 2.0 * b->radius;
  if (const auto* b = std::get_if<Box>(&shape_)) return norm(b->hi - b->lo);
  const Polygon poly = outline();
  double d = 0.0;
  for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < poly.vertices.size(); ++j) {
      d = std::max(d, norm(poly.vertices[i] - poly.vertices[j]));
    }
  }
  return d;
}

double DomainSpec::support(Vec2 direction) const {
  return std::visit(Overloaded{[&](const Ball& b) { return dot(b.center, direction) + b.radius * norm(direction); },
                               [&](const Box& b) {
                                 return std::max(b.lo.x * direction.x, b.hi.x * direction.x) +
                                        std::max(b.lo.y * direction.y, b.hi.y * direction.y);
                               },
                               [&](const Polygon& poly) {
                                 double best = -std::numeric_limits<double>::infinity();
                                 for (auto v : poly.vertices) best = std::max(best, dot(v, direction));
                                 return best;
                               },
                               [&](const StarShaped& s) {
                                 double best = -std::numeric_limits<double>::infinity();
                                 for (auto v : star_points(s, 16)) best = std::max(best, dot(v, direction));
                                 return best;
                               }},
                    shape_);
}

bool DomainSpec::is_convex() const {
  return std::visit(Overloaded{[](const Ball&) { return true; }, [](const Box&) { return true; },
                               [](const Polygon& poly) { return fracberno::is_convex(poly); },
                               [](const StarShaped& s) {
                                 Polygon poly{star_points(s, 4)};
                                 return fracberno::is_convex(poly);
                               }},
                    shape_);
}

Polygon DomainSpec::outline(int samples) const {
  if (dim_ != 2) throw Error("invalid domain", "outline needs a planar domain");
  return std::visit(Overloaded{[&](const Ball& b) { return circumscribed_ngon(b, samples); },
                               [](const Box& b) {
                                 return Polygon{{b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}}};
                               },
                               [](const Polygon& poly) { return poly; },
                               [&](const StarShaped& s) {
                                 const int per = std::max(1, samples / static_cast<int>(s.rho.size()));
                                 return Polygon{star_points(s, per)};
                               }},
                    shape_);
}

double signed_area(const Polygon& poly) {
  double a = 0.0;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly.vertices[i], poly.vertices[(i + 1) % n]);
  return 0.5 * a;
}

double perimeter(const Polygon& poly) {
  double p = 0.0;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) p += norm(poly.vertices[(i + 1) % n] - poly.vertices[i]);
  return p;
}

bool is_convex(const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  if (n < 3) return false;
  const double scale = perimeter(poly);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly.vertices[i], b = poly.vertices[(i + 1) % n], c = poly.vertices[(i + 2) % n];
    if (cross(b - a, c - b) < -1e-12 * scale * scale) return false;
  }
  return signed_area(poly) > 0.0;
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(poly.vertices[i], poly.vertices[(i + 1) % n], poly.vertices[j],
                             poly.vertices[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return Polygon{pts};
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return Polygon{remove_collinear(hull)};
}

double distance_to_boundary(const Polygon& poly, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, segment_distance(p, poly.vertices[i], poly.vertices[(i + 1) % n]));
  }
  return best;
}

double distance_to_convex(const Polygon& poly, Vec2 p) {
  const std::size_t n = poly.vertices.size();
  if (n == 1) return norm(p - poly.vertices[0]);
  if (n == 2) return segment_distance(p, poly.vertices[0], poly.vertices[1]);
  bool inside = true;
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(poly.vertices[(i + 1) % n] - poly.vertices[i], p - poly.vertices[i]) < 0.0) {
      inside = false;
      break;
    }
  }
  return inside ? 0.0 : distance_to_boundary(poly, p);
}

bool point_in_polygon(const Polygon& poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.vertices.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly.vertices[i], b = poly.vertices[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

CellMask rasterize(const DomainSpec& domain, const Grid& grid) {
  if (domain.dim() != grid.dim) throw Error("dimension mismatch", "domain and grid");
  CellMask mask(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) mask.cells[i] = domain.contains(grid.center(i)) ? 1 : 0;
  return mask;
}

namespace {

// A sample point is covered when its own cell or a neighbouring cell whose
// centre lies within one spacing of it is marked.
bool covered(const CellMask& mask, Vec2 p) {
  const Grid& g = mask.grid;
  const auto cell = g.locate(p);
  if (cell && mask[*cell]) return true;
  const int cx = static_cast<int>(std::floor((p.x - g.lo.x) / g.h));
  const int cy = g.dim == 1 ? 0 : static_cast<int>(std::floor((p.y - g.lo.y) / g.h));
  const int ry = g.dim == 1 ? 0 : 1;
  for (int dy = -ry; dy <= ry; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int ix = cx + dx, iy = cy + dy;
      if (ix < 0 || iy < 0 || ix >= g.nx || iy >= g.ny) continue;
      const std::size_t j = g.index(ix, iy);
      if (mask[j] && norm(g.center(ix, iy) - p) <= g.h * (1.0 + 1e-12)) return true;
    }
  }
  return false;
}

}  // namespace

bool is_starshaped(const CellMask& mask, const Ball& center_ball) {
  if (mask.empty()) throw Error("empty mask");
  const Grid& g = mask.grid;
  std::vector<Vec2> lattice;
  if (g.dim == 1) {
    for (int i = -2; i <= 2; ++i) lattice.push_back({center_ball.center.x + 0.45 * center_ball.radius * i, 0.0});
  } else {
    const double a = 0.45 * center_ball.radius / std::sqrt(2.0);
    for (int j = -2; j <= 2; ++j) {
      for (int i = -2; i <= 2; ++i) lattice.push_back(center_ball.center + Vec2{a * i, a * j});
    }
  }
  for (auto b : lattice) {
    if (!covered(mask, b)) throw Error("center-outside", "center ball is not inside the set");
  }
  const double step = 0.5 * g.h;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!mask[i]) continue;
    const Vec2 x = g.center(i);
    for (auto b : lattice) {
      const double len = norm(x - b);
      const int n = static_cast<int>(std::ceil(len / step));
      for (int k = 1; k < n; ++k) {
        const Vec2 p = b + (x - b) * (static_cast<double>(k) / n);
        if (!covered(mask, p)) return false;
      }
    }
  }
  return true;
}

bool is_convex_mask(const CellMask& mask) {
  if (mask.empty()) throw Error("empty mask");
  const Grid& g = mask.grid;
  if (g.dim == 1) {
    std::size_t first = g.size(), last = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (mask[i]) {
        first = std::min(first, i);
        last = i;
      }
    }
    for (std::size_t i = first; i <= last; ++i) {
      if (!mask[i]) return false;
    }
    return true;
  }
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i]) pts.push_back(g.center(i));
  }
  const Polygon hull = convex_hull(pts);
  if (hull.vertices.size() < 3) return true;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mask[i]) continue;
    const Vec2 c = g.center(i);
    if (distance_to_convex(hull, c) == 0.0 && distance_to_boundary(hull, c) > g.h * (1.0 + 1e-9)) return false;
  }
  return true;
}

SupportFunction sample_support(const DomainSpec& domain, int directions) {
  if (directions < 3) throw Error("invalid direction count");
  SupportFunction sf;
  sf.directions = directions;
  sf.samples.resize(directions);
  for (int k = 0; k < directions; ++k) sf.samples[k] = domain.support(sf.direction(k));
  return sf;
}

DomainSpec minkowski_combine(const DomainSpec& d0, const DomainSpec& d1, double s) {
  if (d0.dim() != 2 || d1.dim() != 2) throw Error("invalid domain", "Minkowski combination is planar");
  if (!(s >= 0.0 && s <= 1.0)) throw Error("invalid fraction", "s must lie in [0,1]");
  if (!d0.is_convex() || !d1.is_convex()) throw Error("nonconvex");
  auto prepare = [](const DomainSpec& d, double w) {
    Polygon p = convex_hull(d.outline().vertices);
    for (auto& v : p.vertices) v = v * w;
    // Start from the lowest (then leftmost) vertex.
    auto it = std::min_element(p.vertices.begin(), p.vertices.end(),
                               [](Vec2 a, Vec2 b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
    std::rotate(p.vertices.begin(), it, p.vertices.end());
    return p;
  };
  if (s == 0.0) return DomainSpec::polygon(prepare(d0, 1.0).vertices);
  if (s == 1.0) return DomainSpec::polygon(prepare(d1, 1.0).vertices);
  const Polygon a = prepare(d0, 1.0 - s);
  const Polygon b = prepare(d1, s);
  const std::size_t na = a.vertices.size(), nb = b.vertices.size();
  std::vector<Vec2> out;
  out.reserve(na + nb);
  std::size_t i = 0, j = 0;
  while (i < na || j < nb) {
    out.push_back(a.vertices[i % na] + b.vertices[j % nb]);
    const Vec2 ea = a.vertices[(i + 1) % na] - a.vertices[i % na];
    const Vec2 eb = b.vertices[(j + 1) % nb] - b.vertices[j % nb];
    const double c = cross(ea, eb);
    if (j >= nb || (i < na && c > 0.0)) {
      ++i;
    } else if (i >= na || c < 0.0) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return DomainSpec::polygon(remove_collinear(out));
}

double mean_width(const DomainSpec& domain, int directions) {
  if (domain.dim() != 2) throw Error("invalid domain", "mean width is implemented in d = 2");
  if (!domain.is_convex()) throw Error("nonconvex");
  if (directions < 360) throw Error("invalid direction count", "need at least 360 directions");
  const SupportFunction sf = sample_support(domain, directions);
  double sum = 0.0;
  for (double v : sf.samples) sum += v;
  return 2.0 * sum / directions;
}

double inradius(const DomainSpec& domain) { return inscribed_ball(domain).radius; }

Ball inscribed_ball(const DomainSpec& domain) {
  if (const auto* b = std::get_if<Ball>(&domain.shape())) return *b;
  if (const auto* b = std::get_if<Box>(&domain.shape())) {
    const double hx = 0.5 * (b->hi.x - b->lo.x);
    return {(b->lo + b->hi) * 0.5, domain.dim() == 1 ? hx : std::min(hx, 0.5 * (b->hi.y - b->lo.y))};
  }
  const Polygon poly = domain.outline();
  auto value = [&](Vec2 p) { return domain.contains(p) ? distance_to_boundary(poly, p) : 0.0; };
  const Box bb = domain.bounding_box();
  const int n = 128;
  const double hx = (bb.hi.x - bb.lo.x) / n, hy = (bb.hi.y - bb.lo.y) / n;
  Vec2 best{};
  double best_val = -1.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{bb.lo.x + (i + 0.5) * hx, bb.lo.y + (j + 0.5) * hy};
      const double v = value(p);
      if (v > best_val) {
        best_val = v;
        best = p;
      }
    }
  }
  double step = std::max(hx, hy);
  const Vec2 moves[8] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  while (step > 1e-10 * std::max(hx, hy)) {
    bool improved = false;
    for (auto m : moves) {
      const Vec2 p = best + m * step;
      const double v = value(p);
      if (v > best_val) {
        best_val = v;
        best = p;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return {best, best_val};
}

}  // namespace fracberno
