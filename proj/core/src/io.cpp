#include "fracberno/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "fracberno/error.hpp"

namespace fracberno {

using nlohmann::json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x));
}

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw Error("invalid domain", field + ": " + why);
}

void check_keys(const json& j, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) bad(key, "unknown key");
  }
  for (const auto& key : allowed) {
    if (!j.contains(key)) bad(key, "missing");
  }
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(field, "not finite");
  return v;
}

std::pair<Vec2, int> point(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty() || j.size() > 2) bad(field, "expected [x] or [x, y]");
  const double x = number(j[0], field + "[0]");
  const double y = j.size() == 2 ? number(j[1], field + "[1]") : 0.0;
  return {{x, y}, static_cast<int>(j.size())};
}

json point_json(Vec2 p, int dim) {
  json a = json::array({round12(p.x)});
  if (dim == 2) a.push_back(round12(p.y));
  return a;
}

}  // namespace

DomainSpec parse_domain(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error("invalid domain", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) bad("(root)", "expected an object");
  if (!j.contains("kind") || !j["kind"].is_string()) bad("kind", "missing or not a string");
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "ball") {
      check_keys(j, {"kind", "center", "radius"});
      const auto [c, dim] = point(j["center"], "center");
      return DomainSpec::ball(c, number(j["radius"], "radius"), dim);
    }
    if (kind == "box") {
      check_keys(j, {"kind", "lo", "hi"});
      const auto [lo, d0] = point(j["lo"], "lo");
      const auto [hi, d1] = point(j["hi"], "hi");
      if (d0 != d1) bad("hi", "dimension differs from lo");
      return DomainSpec::box(lo, hi, d0);
    }
    if (kind == "polygon") {
      check_keys(j, {"kind", "vertices"});
      if (!j["vertices"].is_array()) bad("vertices", "expected an array");
      std::vector<Vec2> v;
      for (std::size_t k = 0; k < j["vertices"].size(); ++k) {
        const std::string f = "vertices[" + std::to_string(k) + "]";
        const auto [p, dim] = point(j["vertices"][k], f);
        if (dim != 2) bad(f, "expected [x, y]");
        v.push_back(p);
      }
      return DomainSpec::polygon(std::move(v));
    }
    if (kind == "star") {
      check_keys(j, {"kind", "center", "rho"});
      const auto [c, dim] = point(j["center"], "center");
      if (dim != 2) bad("center", "expected [x, y]");
      if (!j["rho"].is_array()) bad("rho", "expected an array");
      std::vector<double> rho;
      for (std::size_t k = 0; k < j["rho"].size(); ++k) rho.push_back(number(j["rho"][k], "rho[" + std::to_string(k) + "]"));
      return DomainSpec::star(c, std::move(rho));
    }
  } catch (const Error& e) {
    if (e.code() == "invalid domain") throw;
    throw Error("invalid domain", kind + ": " + e.what());
  }
  bad("kind", "unknown kind '" + kind + "'");
}

DomainSpec load_domain(const std::filesystem::path& path) { return parse_domain(read_text(path)); }

std::string domain_to_json(const DomainSpec& domain) {
  json j;
  const int dim = domain.dim();
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          j = {{"kind", "ball"}, {"center", point_json(s.center, dim)}, {"radius", round12(s.radius)}};
        } else if constexpr (std::is_same_v<T, Box>) {
          j = {{"kind", "box"}, {"lo", point_json(s.lo, dim)}, {"hi", point_json(s.hi, dim)}};
        } else if constexpr (std::is_same_v<T, Polygon>) {
          j = json::parse(polygon_to_json(s));
        } else {
          json rho = json::array();
          for (double r : s.rho) rho.push_back(round12(r));
          j = {{"kind", "star"}, {"center", point_json(s.center, 2)}, {"rho", rho}};
        }
      },
      domain.shape());
  return j.dump();
}

std::string polygon_to_json(const Polygon& polygon) {
  json v = json::array();
  for (const Vec2& p : polygon.vertices) v.push_back(point_json(p, 2));
  return json{{"kind", "polygon"}, {"vertices", v}}.dump();
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write " + path.string());
  out << text;
  if (!out) throw Error("io", "write failed for " + path.string());
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string text;
  for (std::size_t k = 0; k < header.size(); ++k) text += (k ? "," : "") + header[k];
  text += '\n';
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) text += (k ? "," : "") + format_number(row[k]);
    text += '\n';
  }
  write_text(path, text);
}

void write_grid_function(const std::filesystem::path& path, const Grid& grid, const std::vector<double>& values) {
  if (values.size() != grid.size()) throw Error("invalid input", "value count does not match grid");
  const json header = {{"dim", grid.dim},
                       {"lo", json::array({round12(grid.lo.x), round12(grid.lo.y)})},
                       {"nx", grid.nx},
                       {"ny", grid.ny},
                       {"h", round12(grid.h)}};
  std::string text = header.dump() + '\n';
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) text += (ix ? "," : "") + format_number(values[grid.index(ix, iy)]);
    text += '\n';
  }
  write_text(path, text);
}

void write_mask(const std::filesystem::path& path, const CellMask& mask) {
  std::vector<double> v(mask.cells.begin(), mask.cells.end());
  write_grid_function(path, mask.grid, v);
}

std::pair<Grid, std::vector<double>> read_grid_function(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) throw Error("io", "empty grid file");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error&) {
    throw Error("io", "bad grid header");
  }
  Grid g;
  g.dim = header.at("dim").get<int>();
  g.lo = {header.at("lo")[0].get<double>(), header.at("lo")[1].get<double>()};
  g.nx = header.at("nx").get<int>();
  g.ny = header.at("ny").get<int>();
  g.h = header.at("h").get<double>();
  std::vector<double> values;
  values.reserve(g.size());
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
  }
  if (values.size() != g.size()) throw Error("io", "grid value count mismatch");
  return {g, values};
}

}  // namespace fracberno
