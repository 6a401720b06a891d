#include "cli/config.hpp"

#include <cmath>
#include <set>

#include "fracberno/error.hpp"
#include "fracberno/io.hpp"

namespace fracberno::cli {

using nlohmann::json;

namespace {

double positive(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be positive");
  return v;
}

int positive_int(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "expected an integer");
  const long v = j.get<long>();
  if (v <= 0) throw ConfigError(field, "must be positive");
  return static_cast<int>(v);
}

Vec2 pair(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(field, "expected [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

DomainSpec domain(const json& j, const std::string& field) {
  try {
    return parse_domain(j.dump());
  } catch (const Error& e) {
    throw ConfigError(field, e.what());
  }
}

// Integer multiple of h within rounding.
bool divides(double length, double h) {
  const double n = length / h;
  return n >= 1.0 && std::abs(n - std::round(n)) <= 1e-9 * n;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("(root)", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("(root)", "expected an object");
  if (!j.contains("problem") || !j["problem"].is_string()) throw ConfigError("problem", "missing or not a string");

  RunConfig c;
  c.problem = j["problem"].get<std::string>();
  std::set<std::string> required, optional{"eps_schedule", "tol", "max_iterations", "directions", "threads", "verbosity"};
  std::string set_key;
  if (c.problem == "exterior") {
    set_key = "K";
    required = {"problem", "K", "lambda", "h"};
    optional.insert({"box", "tau"});
  } else if (c.problem == "interior") {
    set_key = "D";
    required = {"problem", "D", "lambda", "h"};
    optional.insert({"sigma", "seed"});
  } else {
    throw ConfigError("problem", "expected \"exterior\" or \"interior\"");
  }
  for (const auto& [key, value] : j.items()) {
    if (!required.count(key) && !optional.count(key)) throw ConfigError(key, "unknown key");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) throw ConfigError(key, "missing");
  }

  c.domain = domain(j[set_key], set_key);
  c.lambda = positive(j["lambda"], "lambda");
  c.h = positive(j["h"], "h");
  if (j.contains("box")) {
    const json& b = j["box"];
    if (!b.is_object()) throw ConfigError("box", "expected {\"lo\": [x, y], \"hi\": [x, y]}");
    for (const auto& [key, value] : b.items()) {
      if (key != "lo" && key != "hi") throw ConfigError("box." + key, "unknown key");
    }
    if (!b.contains("lo")) throw ConfigError("box.lo", "missing");
    if (!b.contains("hi")) throw ConfigError("box.hi", "missing");
    const Box box{pair(b["lo"], "box.lo"), pair(b["hi"], "box.hi")};
    if (!(box.hi.x > box.lo.x) || !(box.hi.y > box.lo.y)) throw ConfigError("box", "hi must exceed lo");
    if (!divides(box.hi.x - box.lo.x, c.h) || !divides(box.hi.y - box.lo.y, c.h)) {
      throw ConfigError("h", "h must divide the box sides");
    }
    c.box = box;
  }
  if (j.contains("eps_schedule")) {
    const json& e = j["eps_schedule"];
    if (!e.is_array() || e.empty()) throw ConfigError("eps_schedule", "expected a nonempty array");
    c.relaxed.eps_schedule.clear();
    for (std::size_t k = 0; k < e.size(); ++k) {
      c.relaxed.eps_schedule.push_back(positive(e[k], "eps_schedule[" + std::to_string(k) + "]"));
    }
  }
  if (j.contains("tol")) c.relaxed.tol = positive(j["tol"], "tol");
  if (j.contains("max_iterations")) c.relaxed.max_iterations = positive_int(j["max_iterations"], "max_iterations");
  if (j.contains("tau")) c.tau = positive(j["tau"], "tau");
  if (j.contains("sigma")) {
    c.sigma = positive(j["sigma"], "sigma");
    if (c.sigma >= 1.0) throw ConfigError("sigma", "must be below 1");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_boolean()) throw ConfigError("seed", "expected true or false");
    c.seed = j["seed"].get<bool>();
  }
  if (j.contains("directions")) c.directions = positive_int(j["directions"], "directions");
  if (j.contains("threads")) c.threads = positive_int(j["threads"], "threads");
  if (j.contains("verbosity")) {
    if (!j["verbosity"].is_number_integer() || j["verbosity"].get<int>() < 0) {
      throw ConfigError("verbosity", "expected a nonnegative integer");
    }
    c.verbosity = j["verbosity"].get<int>();
  }
  return c;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error& e) {
    throw ConfigError("(file)", e.what());
  }
  return parse_config_text(text);
}

Box exterior_box(const RunConfig& c) {
  if (c.box) return *c.box;
  const Box bb = c.domain.bounding_box();
  const Vec2 mid = (bb.lo + bb.hi) * 0.5;
  const double half = 80.0 * c.h;
  return {{mid.x - half, mid.y - half}, {mid.x + half, mid.y + half}};
}

json RunConfig::to_json() const {
  json j = {{"problem", problem},
            {problem == "exterior" ? "K" : "D", json::parse(domain_to_json(domain))},
            {"lambda", round12(lambda)},
            {"h", round12(h)},
            {"eps_schedule", relaxed.eps_schedule},
            {"tol", relaxed.tol},
            {"max_iterations", relaxed.max_iterations},
            {"directions", directions},
            {"threads", threads},
            {"verbosity", verbosity}};
  if (problem == "exterior") {
    const Box b = exterior_box(*this);
    j["box"] = {{"lo", {round12(b.lo.x), round12(b.lo.y)}}, {"hi", {round12(b.hi.x), round12(b.hi.y)}}};
    j["tau"] = tau;
  } else {
    j["sigma"] = sigma;
    j["seed"] = seed;
  }
  return j;
}

}  // namespace fracberno::cli
