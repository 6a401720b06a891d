#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace fracberno::verify {

struct SuiteOptions {
  /// Coarser grids throughout; checks and tolerances are unchanged.
  bool fast = false;
};

struct CriterionInfo {
  int id = 0;
  std::string name;
  double budget_seconds = 0.0;
};

struct CriterionResult {
  CriterionInfo info;
  bool passed = false;
  /// Set when the run itself broke (an exception), as opposed to a failed check.
  bool infrastructure_error = false;
  std::string summary;
  nlohmann::json checks = nlohmann::json::array();
  double seconds = 0.0;
};

const std::vector<CriterionInfo>& criteria();
/// Criterion ids of a named suite; throws std::invalid_argument if unknown.
std::vector<int> suite_members(const std::string& suite);
std::vector<std::string> suite_names();

CriterionResult run_criterion(int id, const SuiteOptions& options = {});

/// One line: "[PASS] 4 exterior: ..." with the runtime and budget.
std::string result_line(const CriterionResult& result);
nlohmann::json report_json(const std::vector<CriterionResult>& results, const SuiteOptions& options);

}  // namespace fracberno::verify
