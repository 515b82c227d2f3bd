// Acceptance gate: runs every criterion at its pinned tolerance and prints
// one pass/fail line per criterion. Nonzero exit on any failure.

#include <cstdio>

#include "submax/verify.hpp"

int main() {
  const auto results = submax::run_acceptance();
  submax::print_results(results);
  int failed = 0;
  for (const auto& r : results)
    if (!r.pass) ++failed;
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
