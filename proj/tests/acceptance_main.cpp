// Acceptance suite runner: one pass/fail line per criterion, nonzero exit on
// any failure. The same checks back the CLI's `verify-all` subcommand.
#include <cstdio>
#include <iostream>

#include "revsurf/acceptance.hpp"

int main() {
  int failed = revsurf::run_acceptance(std::cout);
  if (failed == 0)
    std::cout << "acceptance: all criteria passed\n";
  else
    std::cout << "acceptance: " << failed << " criterion(s) FAILED\n";
  return failed;
}
