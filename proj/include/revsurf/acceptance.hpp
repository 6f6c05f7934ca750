#pragma once

#include <iosfwd>

namespace revsurf {

struct AcceptanceOptions {
  double ellipsoid_b = 2.0;
  double ellipsoid_c = 1.0;
  int max_workers = 0;
};

// Run the full acceptance suite, one pass/fail line per criterion.
// Returns the number of failed criteria.
int run_acceptance(std::ostream& out, const AcceptanceOptions& opt = {});

}  // namespace revsurf
