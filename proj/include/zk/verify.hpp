#pragma once

#include <map>
#include <string>
#include <vector>

namespace zk {

/// One row of the self-check table.
struct CheckResult {
  std::string suite;
  std::string name;
  /// The identity or property being exercised.
  std::string reference;
  double tolerance = 0.0;
  double attained = 0.0;
  bool passed = false;
};

/// Suite names accepted by run_checks, in execution order.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". `overrides` replaces the tolerance of the
/// check with the given name. Throws DomainError for an unknown suite name.
std::vector<CheckResult> run_checks(const std::string& suite, const std::map<std::string, double>& overrides = {});

}  // namespace zk
