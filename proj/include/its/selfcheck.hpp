#pragma once

// Fast invariant checks across all modules, used by `its selfcheck`.

#include <optional>
#include <string>
#include <vector>

namespace its {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfcheckOptions {
  /// Run only the check with this exact name.
  std::string only;
  /// Run only checks whose name starts with this prefix (e.g. "pde").
  std::string group;
  /// Beta for the PDE residual check. When 1/beta is not an integer the check
  /// becomes a negative control and passes when the residual fails to vanish.
  std::optional<double> beta;
};

std::vector<std::string> selfcheck_names();

/// Throws ConfigError when `only` names no known check.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options = {});

} // namespace its
