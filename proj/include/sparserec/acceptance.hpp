#pragma once

// The acceptance suite: nine quantitative checks run by `sparserec verify`
// and by the acceptance test binary.

#include <string>
#include <vector>

#include "sparserec/experiments.hpp"

namespace sparserec {

struct AcceptanceConfig {
  double lebesgue_threshold = 3.0;   // C
  double pipeline_threshold = 6.0;   // T
  double c_emp = 2.0;
  double slope_tolerance = 0.35;
  double rate_a = 10.0;
  double rate_floor_factor = 2.0;
  double schedule_C = 30.0;
  int threads = 1;
  bool enforce_runtime = true;

  static AcceptanceConfig from(const Config& c);
  std::string dump() const;
};

struct CriterionInfo {
  int id = 0;
  std::string name;
  double budget_seconds = 0.0;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
};

std::vector<CriterionInfo> list_criteria();

/// Never throws; an exception inside a check is reported as a failure.
CriterionResult run_criterion(int id, const AcceptanceConfig& config);
std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config);

/// "[PASS] 3 womp-correctness (1.2 s): detail"
std::string format_result(const CriterionResult& result);
std::string summary_json(const std::vector<CriterionResult>& results);

}  // namespace sparserec
