#pragma once

#include <utility>
#include <vector>

namespace revsurf {

struct PowerLawFit {
  double exponent = 0.0;
  double constant = 0.0;           // units of the fitted quantity
  double residual = 0.0;           // max relative deviation over the window
  std::pair<double, double> window = {0.0, 0.0};
  double spread = 0.0;             // bootstrap spread of the exponent (when estimated)
};

// Fit y ~ C x^p by ordinary least squares on (log x, log y).
// Requires >= 6 strictly positive samples.
PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Log-spaced grid with the given number of points per decade (>= 2 points).
std::vector<double> log_spaced(double lo, double hi, int points_per_decade);

}  // namespace revsurf
