#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace heisgeo {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfcheckOptions {
  /// Deliberately perturbs the group product inside the algebra checks;
  /// used to validate that the suite actually detects a broken group law.
  bool corrupt_group_law = false;
};

/// Runs the release-gate verification suite with fixed seeds and fixed
/// tolerances, one pass/fail line per criterion written to `log`.
std::vector<CriterionResult> run_selfcheck(std::ostream& log,
                                           const SelfcheckOptions& opts = {});

/// True iff every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace heisgeo
