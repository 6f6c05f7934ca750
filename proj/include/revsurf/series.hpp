#pragma once

#include <cstddef>
#include <vector>

namespace revsurf {

// Truncated univariate power series: c[0] + c[1] x + ... + c[N] x^N.
// Arithmetic is exact on coefficients up to the (smaller) order and
// discards everything above it.
class TruncSeries1 {
public:
  TruncSeries1() = default;
  explicit TruncSeries1(std::vector<double> coeffs);
  static TruncSeries1 constant(double c, int order);
  static TruncSeries1 identity(int order);  // x

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  double operator[](int k) const { return k <= order() ? coeffs_[k] : 0.0; }
  double& at(int k) { return coeffs_[k]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  TruncSeries1 truncated(int order) const;
  double eval(double x) const;  // Horner

  friend TruncSeries1 operator+(const TruncSeries1& a, const TruncSeries1& b);
  friend TruncSeries1 operator-(const TruncSeries1& a, const TruncSeries1& b);
  friend TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b);
  TruncSeries1 scaled(double s) const;

  // g(f(x)) for f with f(0) = 0.
  TruncSeries1 compose(const TruncSeries1& inner) const;
  // 1/f, requires f(0) != 0.
  TruncSeries1 reciprocal() const;
  // sqrt(f) and 1/sqrt(f), require f(0) > 0.
  TruncSeries1 sqrt() const;
  TruncSeries1 inv_sqrt() const;
  // Compositional inverse of f with f(0) = 0, f'(0) != 0.
  TruncSeries1 reverted() const;

private:
  std::vector<double> coeffs_;  // size order+1
};

// Truncated bivariate power series: sum_{i+j<=N} a_{ij} x^i y^j,
// stored grouped by total degree.
class TruncSeries2 {
public:
  TruncSeries2() = default;
  explicit TruncSeries2(int order);
  static TruncSeries2 constant(double c, int order);

  int order() const { return order_; }
  double coeff(int i, int j) const;
  void set_coeff(int i, int j, double v);
  double eval(double x, double y) const;

  friend TruncSeries2 operator+(const TruncSeries2& a, const TruncSeries2& b);
  friend TruncSeries2 operator-(const TruncSeries2& a, const TruncSeries2& b);
  friend TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b);
  TruncSeries2 scaled(double s) const;

  // Substitute (x, y) -> (x^2, y^2); order doubles (capped at cap if >= 0).
  TruncSeries2 stretched_to_squares(int cap = -1) const;
  // outer(f) for univariate outer and f(0,0) = 0.
  TruncSeries2 apply_univariate(const TruncSeries1& outer) const;
  TruncSeries2 reciprocal() const;
  TruncSeries2 inv_sqrt() const;
  TruncSeries2 sqrt() const;

private:
  int idx(int i, int j) const { return (i + j) * (i + j + 1) / 2 + j; }
  int order_ = 0;
  std::vector<double> coeffs_;
};

// Lift a univariate series to a bivariate one in x^2 (g(x^2)) or y^2.
TruncSeries2 lift_in_x_squared(const TruncSeries1& g, int order);
TruncSeries2 lift_in_y_squared(const TruncSeries1& g, int order);

// I_j = int_0^1 u^j / sqrt(1-u^2) du via the closed recurrence
// I_0 = pi/2, I_1 = 1, I_j = (j-1)/j * I_{j-2}.
double singular_moment(int j);

// F(y) = int_0^y f(x, y)/sqrt(y^2 - x^2) dx as a series in y:
// b_k = sum_{j<=k} a_{j,k-j} I_j.
TruncSeries1 singular_integral_expansion(const TruncSeries2& f);

// f(x, y) = (g(x) - g(y))/(x - y) as a bivariate series:
// coefficient of x^i y^j is g_{i+j+1}.
TruncSeries2 divided_difference_series(const TruncSeries1& g);

class Profile;

// Bivariate series (in x = a - r, y = a - R) of the smooth factor of the
// cut-locus integrand, built from psi truncated at s^K:
//   f(x,y) = 2 m(a-y) / ( m(a-x) sqrt(m(a-x) + m(a-y)) ) * (-D(x^2,y^2))^{-1/2}
// with D the divided difference of psi. Exact through total degree 2(K-1).
TruncSeries2 phi_integrand_series(const Profile& p, int K);

// Expansion of the cut-locus angle phi in powers of w = b - nu.
// Requires alpha > 0; the attainable order is limited by the number of
// available psi Taylor coefficients (order <= #coeffs - 2).
TruncSeries1 phi_expansion(const Profile& p, int order);

}  // namespace revsurf
