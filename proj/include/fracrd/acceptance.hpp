#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace fracrd {

struct CriterionResult {
  std::string id;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
  double runtime_ms = 0.0;
  nlohmann::ordered_json detail;

  // {id, pass, measured, bound, runtime_ms, detail} on one line.
  std::string json_line(bool with_runtime = true) const;
};

// Criterion ids of a verify suite: mlf, gronwall, blowup, decay, pme, all.
// Throws DomainError for an unknown suite.
std::vector<std::string> suite_criteria(const std::string& suite);

// Runs one criterion (C1..C9). Throws DomainError for an unknown id.
CriterionResult run_criterion(const std::string& id);

// C10: runs the criteria twice and compares the JSON lines without runtimes.
CriterionResult run_determinism(const std::vector<CriterionResult>& first,
                                const std::vector<std::string>& ids);

} // namespace fracrd
