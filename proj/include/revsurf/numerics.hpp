#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace revsurf {

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
// Cached per n; computed once by Newton iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with an n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b, int n);

// Integrate f over [a, b], splitting panels until two refinement levels agree
// to abs_tol (composite Gauss-Legendre, panel doubling).
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int base_nodes = 32, int max_doublings = 6);

// Brent root bracketing solve: f(a) and f(b) must have opposite signs.
double brent(const std::function<double(double)>& f, double a, double b,
             double xtol = 1e-14, int max_iter = 200);

// Golden-section minimization of f on [a, b].
double golden_section_min(const std::function<double(double)>& f, double a, double b,
                          double xtol = 1e-10);

// Neumaier compensated accumulator.
class CompensatedSum {
public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Ordinary least squares for y ~ X beta (column-major design, small systems).
// Returns coefficients; normal equations with partial pivoting.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns,
                                  const std::vector<double>& y);

}  // namespace revsurf
