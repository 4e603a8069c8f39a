#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tmscat {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the acceptance checks in order, writing one "PASS"/"FAIL" line per
/// check to `log` as it completes.
std::vector<CriterionResult> run_acceptance(std::ostream& log);

/// run_acceptance plus a summary line; returns 0 when every check passed.
int run_selftest(std::ostream& log);

}  // namespace tmscat
