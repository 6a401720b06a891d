#include <CLI11.hpp>
#include <iostream>
#include <vector>

#include "verify/suite.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs the acceptance criteria and prints one line per criterion"};
  std::vector<int> ids;
  bool fast = false;
  app.add_option("--criterion", ids, "Criterion id (repeatable); all when omitted")->check(CLI::Range(1, 12));
  app.add_flag("--fast", fast, "Reduced grids");
  CLI11_PARSE(app, argc, argv);

  if (ids.empty()) {
    for (const auto& c : fracberno::verify::criteria()) ids.push_back(c.id);
  }
  bool failed = false, broken = false;
  for (int id : ids) {
    const auto r = fracberno::verify::run_criterion(id, {fast});
    std::cout << fracberno::verify::result_line(r) << std::endl;
    if (!r.passed) {
      std::cout << r.checks.dump(2) << std::endl;
      failed = true;
      broken = broken || r.infrastructure_error;
    }
  }
  return broken ? 3 : failed ? 1 : 0;
}
