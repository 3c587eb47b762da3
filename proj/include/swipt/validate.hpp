#pragma once

// Release gate: property and oracle checks grouped by invariant family.
// The full level runs the acceptance-scale sample sizes; quick is a smoke
// level for interactive use.

#include <cstdint>
#include <string>
#include <vector>

namespace swipt {

struct ValidationOptions {
  bool full = true;
  std::uint64_t seed = 20240611;
  int threads = 1;
  std::vector<std::string> groups;  // empty runs every group
};

struct CheckResult {
  std::string name;
  bool passed = false;
  bool counted = true;  // false for informational lines
  std::string detail;
};

struct GroupResult {
  std::string name;
  std::string summary;
  bool passed = false;
  double seconds = 0.0;
  std::vector<CheckResult> checks;
};

struct ValidationReport {
  std::vector<GroupResult> groups;
  bool passed() const;
  std::string text(bool verbose = false) const;
};

/// Group names in execution order.
std::vector<std::string> validation_groups();

ValidationReport run_validate(const ValidationOptions& options = {});

}  // namespace swipt
