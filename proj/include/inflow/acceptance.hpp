#pragma once

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

namespace inflow {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  nlohmann::json details;
};

/// Runs the acceptance criteria (all, or the subset in `only`); each
/// criterion carries its tolerance in code and fails when its wall-clock
/// budget is exceeded. Reports are written under out_dir when non-empty.
std::vector<CriterionResult> run_acceptance(const std::set<int>& only = {},
                                            const std::string& out_dir = "");

void print_results(const std::vector<CriterionResult>& results);

}  // namespace inflow
