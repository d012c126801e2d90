#pragma once

#include <string>
#include <vector>

namespace opint {

/// One acceptance check: a named criterion with a pass flag and a short
/// human-readable account of what was measured.
struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the full engine-level verification matrix (the same checks the
/// `selftest` CLI command reports).  Every check is deterministic.
std::vector<CheckResult> run_selftest();

}  // namespace opint
