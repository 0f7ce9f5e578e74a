#pragma once

#include <string>
#include <vector>

namespace gaflux::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double wall_ms = 0.0;
};

struct AcceptanceOptions {
  unsigned seed = 20240808;  // drives the random multivector triples
};

// The full verification gate: every identity the toolkit is built around,
// each with its tolerance pinned in code. Criteria run independently; a
// throw inside one is recorded as its failure.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// "[PASS] 3 name: detail" per line.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace gaflux::acceptance
