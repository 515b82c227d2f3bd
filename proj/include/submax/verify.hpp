#pragma once

#include <string>
#include <vector>

namespace submax {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // measured values
  double seconds = 0.0;
};

// Named property suites: "core" (estimator and auxiliary-function laws,
// objective structure, projection properties, online causality), "numeric"
// (implementations against brute-force oracles), "experiments" (scaled
// experiment reproductions and determinism), or "all".
std::vector<CheckResult> run_suite(const std::string& suite);

// The acceptance gate: one result per criterion, in order.
std::vector<CheckResult> run_acceptance();

bool all_passed(const std::vector<CheckResult>& results);

// "PASS name  detail (x.xx s)" lines.
void print_results(const std::vector<CheckResult>& results);

}  // namespace submax
