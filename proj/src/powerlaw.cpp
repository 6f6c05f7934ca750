#include "revsurf/powerlaw.hpp"

#include <cmath>
#include <stdexcept>

#include "revsurf/numerics.hpp"

namespace revsurf {

PowerLawFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_power_law: size mismatch");
  if (x.size() < 6) throw std::invalid_argument("fit_power_law: need at least 6 samples");
  std::vector<double> lx(x.size()), ly(y.size()), ones(x.size(), 1.0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0))
      throw std::invalid_argument("fit_power_law: samples must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  auto coef = least_squares({ones, lx}, ly);
  PowerLawFit fit;
  fit.constant = std::exp(coef[0]);
  fit.exponent = coef[1];
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double model = fit.constant * std::pow(x[i], fit.exponent);
    worst = std::max(worst, std::abs(y[i] / model - 1.0));
  }
  fit.residual = worst;
  fit.window = {x.front(), x.back()};
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, int points_per_decade) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("log_spaced: bad range");
  double decades = std::log10(hi / lo);
  int n = std::max(2, static_cast<int>(std::round(decades * points_per_decade)) + 1);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return out;
}

}  // namespace revsurf
