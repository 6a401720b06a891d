#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

#include "fracberno/geometry.hpp"
#include "fracberno/relaxed.hpp"

namespace fracberno::cli {

/// Bad user input; maps to exit code 2. `field` is the JSON path at fault.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class ExitCode { Pass = 0, CriterionFailure = 1, ConfigError = 2, Infrastructure = 3 };

/// Configuration of solve-exterior and solve-interior.
struct RunConfig {
  std::string problem;               ///< "exterior" or "interior"
  DomainSpec domain = DomainSpec::ball({0, 0}, 0.5);  ///< K or D
  double lambda = 0.0;
  double h = 0.0;
  std::optional<Box> box;            ///< exterior only; 160 cells around K if absent
  RelaxedOptions relaxed;
  double tau = 0.01;                 ///< exterior positivity cutoff
  double sigma = 0.02;               ///< interior plateau threshold
  bool seed = true;                  ///< interior warm start
  int directions = 64;
  int threads = 0;                   ///< 0 keeps the default
  int verbosity = 0;

  /// Echo with every default filled in.
  nlohmann::json to_json() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

/// Box of the exterior problem: the configured one or the default.
Box exterior_box(const RunConfig& config);

}  // namespace fracberno::cli
