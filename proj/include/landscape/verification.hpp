#pragma once

// The built-in verification suite: fourteen numbered checks of the solvers
// against exact values and structural inequalities.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace landscape {

struct CaseResult {
  std::string label;
  double expected = 0.0;
  double computed = 0.0;
  double error = 0.0;
  double tolerance = 0.0;
  bool ok() const { return error <= tolerance; }
};

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string group;  // multipoint, jrate, metric, rate, gradient, iota
  std::vector<CaseResult> cases;
  /// The case with the largest error relative to its tolerance.
  CaseResult worst;
  double seconds = 0.0;
  double time_limit = 0.0;  // 0 when unlimited
  bool passed = false;
  std::string detail;  // set when the criterion threw
};

struct VerifyOptions {
  /// Group name, criterion name or id; empty runs everything.
  std::string filter;
  /// Multiplies every tolerance.
  double tol_scale = 1.0;
  std::uint64_t seed = 0;
};

struct CriterionInfo {
  int id;
  std::string name;
  std::string group;
};

const std::vector<CriterionInfo>& criteria();

bool criterion_selected(const CriterionInfo& info, const std::string& filter);

CriterionResult run_criterion(int id, const VerifyOptions& options = {});

std::vector<CriterionResult> run_verification(const VerifyOptions& options = {});

/// One line per criterion.
void print_results(std::ostream& out, const std::vector<CriterionResult>& results);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace landscape
