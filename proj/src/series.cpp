#include "revsurf/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "revsurf/profile.hpp"

namespace revsurf {

namespace {

// Coefficients of (1 + t)^p up to the given order (generalized binomial).
TruncSeries1 binomial_series(double p, int order) {
  std::vector<double> c(order + 1);
  c[0] = 1.0;
  for (int k = 1; k <= order; ++k) c[k] = c[k - 1] * (p - (k - 1)) / k;
  return TruncSeries1(std::move(c));
}

}  // namespace

TruncSeries1::TruncSeries1(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

TruncSeries1 TruncSeries1::constant(double c, int order) {
  std::vector<double> v(order + 1, 0.0);
  v[0] = c;
  return TruncSeries1(std::move(v));
}

TruncSeries1 TruncSeries1::identity(int order) {
  std::vector<double> v(order + 1, 0.0);
  if (order >= 1) v[1] = 1.0;
  return TruncSeries1(std::move(v));
}

TruncSeries1 TruncSeries1::truncated(int order) const {
  std::vector<double> v(order + 1, 0.0);
  for (int k = 0; k <= order && k <= this->order(); ++k) v[k] = coeffs_[k];
  return TruncSeries1(std::move(v));
}

double TruncSeries1::eval(double x) const {
  double acc = 0.0;
  for (int k = order(); k >= 0; --k) acc = acc * x + coeffs_[k];
  return acc;
}

TruncSeries1 operator+(const TruncSeries1& a, const TruncSeries1& b) {
  int n = std::min(a.order(), b.order());
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = a[k] + b[k];
  return TruncSeries1(std::move(v));
}

TruncSeries1 operator-(const TruncSeries1& a, const TruncSeries1& b) {
  int n = std::min(a.order(), b.order());
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = a[k] - b[k];
  return TruncSeries1(std::move(v));
}

TruncSeries1 operator*(const TruncSeries1& a, const TruncSeries1& b) {
  int n = std::min(a.order(), b.order());
  std::vector<double> v(n + 1, 0.0);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; i + j <= n; ++j) v[i + j] += a[i] * b[j];
  return TruncSeries1(std::move(v));
}

TruncSeries1 TruncSeries1::scaled(double s) const {
  std::vector<double> v(coeffs_);
  for (double& c : v) c *= s;
  return TruncSeries1(std::move(v));
}

TruncSeries1 TruncSeries1::compose(const TruncSeries1& inner) const {
  if (inner[0] != 0.0) throw std::invalid_argument("compose: inner series must vanish at 0");
  int n = std::min(order(), inner.order());
  // Horner on series: result = c_n; result = result*inner + c_k
  TruncSeries1 result = TruncSeries1::constant(coeffs_[std::min<int>(n, order())], n);
  for (int k = n - 1; k >= 0; --k) {
    result = result * inner.truncated(n);
    result.at(0) += coeffs_[k];
  }
  return result;
}

TruncSeries1 TruncSeries1::reciprocal() const {
  if (coeffs_[0] == 0.0) throw std::invalid_argument("reciprocal: zero constant term");
  double c0 = coeffs_[0];
  TruncSeries1 g = scaled(1.0 / c0);
  g.at(0) = 0.0;  // g = f/c0 - 1
  return binomial_series(-1.0, order()).compose(g).scaled(1.0 / c0);
}

TruncSeries1 TruncSeries1::sqrt() const {
  if (coeffs_[0] <= 0.0) throw std::invalid_argument("sqrt: constant term must be positive");
  double c0 = coeffs_[0];
  TruncSeries1 g = scaled(1.0 / c0);
  g.at(0) = 0.0;
  return binomial_series(0.5, order()).compose(g).scaled(std::sqrt(c0));
}

TruncSeries1 TruncSeries1::inv_sqrt() const {
  if (coeffs_[0] <= 0.0) throw std::invalid_argument("inv_sqrt: constant term must be positive");
  double c0 = coeffs_[0];
  TruncSeries1 g = scaled(1.0 / c0);
  g.at(0) = 0.0;
  return binomial_series(-0.5, order()).compose(g).scaled(1.0 / std::sqrt(c0));
}

TruncSeries1 TruncSeries1::reverted() const {
  if (coeffs_[0] != 0.0) throw std::invalid_argument("reverted: series must vanish at 0");
  if (order() < 1 || coeffs_[1] == 0.0)
    throw std::invalid_argument("reverted: vanishing first-order coefficient");
  const int n = order();
  // u(w) by coefficient recurrence: match w = f(u(w)) degree by degree.
  TruncSeries1 u = TruncSeries1::constant(0.0, n);
  u.at(1) = 1.0 / coeffs_[1];
  for (int k = 2; k <= n; ++k) {
    // residual of w - f(u) at degree k with current u (degrees < k known)
    double rk = compose(u)[k];
    u.at(k) = -rk / coeffs_[1];
  }
  return u;
}

TruncSeries2::TruncSeries2(int order)
    : order_(order), coeffs_((order + 1) * (order + 2) / 2, 0.0) {}

TruncSeries2 TruncSeries2::constant(double c, int order) {
  TruncSeries2 s(order);
  s.coeffs_[0] = c;
  return s;
}

double TruncSeries2::coeff(int i, int j) const {
  if (i < 0 || j < 0 || i + j > order_) return 0.0;
  return coeffs_[idx(i, j)];
}

void TruncSeries2::set_coeff(int i, int j, double v) {
  if (i < 0 || j < 0 || i + j > order_) throw std::out_of_range("TruncSeries2::set_coeff");
  coeffs_[idx(i, j)] = v;
}

double TruncSeries2::eval(double x, double y) const {
  double acc = 0.0;
  for (int d = order_; d >= 0; --d)
    for (int j = 0; j <= d; ++j) acc += coeff(d - j, j) * std::pow(x, d - j) * std::pow(y, j);
  return acc;
}

TruncSeries2 operator+(const TruncSeries2& a, const TruncSeries2& b) {
  int n = std::min(a.order(), b.order());
  TruncSeries2 r(n);
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) r.set_coeff(d - j, j, a.coeff(d - j, j) + b.coeff(d - j, j));
  return r;
}

TruncSeries2 operator-(const TruncSeries2& a, const TruncSeries2& b) {
  int n = std::min(a.order(), b.order());
  TruncSeries2 r(n);
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) r.set_coeff(d - j, j, a.coeff(d - j, j) - b.coeff(d - j, j));
  return r;
}

TruncSeries2 operator*(const TruncSeries2& a, const TruncSeries2& b) {
  int n = std::min(a.order(), b.order());
  TruncSeries2 r(n);
  for (int da = 0; da <= n; ++da)
    for (int ja = 0; ja <= da; ++ja) {
      double ca = a.coeff(da - ja, ja);
      if (ca == 0.0) continue;
      for (int db = 0; da + db <= n; ++db)
        for (int jb = 0; jb <= db; ++jb) {
          double cb = b.coeff(db - jb, jb);
          if (cb == 0.0) continue;
          int i = (da - ja) + (db - jb), j = ja + jb;
          r.set_coeff(i, j, r.coeff(i, j) + ca * cb);
        }
    }
  return r;
}

TruncSeries2 TruncSeries2::scaled(double s) const {
  TruncSeries2 r = *this;
  for (double& c : r.coeffs_) c *= s;
  return r;
}

TruncSeries2 TruncSeries2::stretched_to_squares(int cap) const {
  int n = cap >= 0 ? cap : 2 * order_;
  TruncSeries2 r(n);
  for (int d = 0; d <= order_; ++d)
    for (int j = 0; j <= d; ++j) {
      if (2 * d > n) continue;
      r.set_coeff(2 * (d - j), 2 * j, coeff(d - j, j));
    }
  return r;
}

TruncSeries2 TruncSeries2::apply_univariate(const TruncSeries1& outer) const {
  if (coeffs_[0] != 0.0)
    throw std::invalid_argument("apply_univariate: inner constant term must vanish");
  int n = order_;
  TruncSeries2 result = TruncSeries2::constant(outer[std::min(n, outer.order())], n);
  for (int k = std::min(n, outer.order()) - 1; k >= 0; --k) {
    result = result * (*this);
    result.set_coeff(0, 0, result.coeff(0, 0) + outer[k]);
  }
  return result;
}

TruncSeries2 TruncSeries2::reciprocal() const {
  double c0 = coeffs_[0];
  if (c0 == 0.0) throw std::invalid_argument("reciprocal: zero constant term");
  TruncSeries2 g = scaled(1.0 / c0);
  g.coeffs_[0] = 0.0;
  return g.apply_univariate(binomial_series(-1.0, order_)).scaled(1.0 / c0);
}

TruncSeries2 TruncSeries2::inv_sqrt() const {
  double c0 = coeffs_[0];
  if (c0 <= 0.0) throw std::invalid_argument("inv_sqrt: constant term must be positive");
  TruncSeries2 g = scaled(1.0 / c0);
  g.coeffs_[0] = 0.0;
  return g.apply_univariate(binomial_series(-0.5, order_)).scaled(1.0 / std::sqrt(c0));
}

TruncSeries2 TruncSeries2::sqrt() const {
  double c0 = coeffs_[0];
  if (c0 <= 0.0) throw std::invalid_argument("sqrt: constant term must be positive");
  TruncSeries2 g = scaled(1.0 / c0);
  g.coeffs_[0] = 0.0;
  return g.apply_univariate(binomial_series(0.5, order_)).scaled(std::sqrt(c0));
}

TruncSeries2 lift_in_x_squared(const TruncSeries1& g, int order) {
  TruncSeries2 r(order);
  for (int k = 0; k <= g.order() && 2 * k <= order; ++k) r.set_coeff(2 * k, 0, g[k]);
  return r;
}

TruncSeries2 lift_in_y_squared(const TruncSeries1& g, int order) {
  TruncSeries2 r(order);
  for (int k = 0; k <= g.order() && 2 * k <= order; ++k) r.set_coeff(0, 2 * k, g[k]);
  return r;
}

double singular_moment(int j) {
  if (j < 0) throw std::invalid_argument("singular_moment: negative index");
  if (j == 0) return std::numbers::pi / 2.0;
  if (j == 1) return 1.0;
  return (j - 1.0) / j * singular_moment(j - 2);
}

TruncSeries1 singular_integral_expansion(const TruncSeries2& f) {
  int n = f.order();
  std::vector<double> b(n + 1, 0.0);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= k; ++j) b[k] += f.coeff(j, k - j) * singular_moment(j);
  return TruncSeries1(std::move(b));
}

TruncSeries2 divided_difference_series(const TruncSeries1& g) {
  int n = std::max(g.order() - 1, 0);
  TruncSeries2 f(n);
  for (int k = 1; k <= g.order(); ++k)
    for (int j = 0; j <= k - 1; ++j) f.set_coeff(k - 1 - j, j, g[k]);
  return f;
}

TruncSeries2 phi_integrand_series(const Profile& p, int K) {
  const std::vector<double>& psi = p.psi_coeffs();
  if (p.alpha() <= 0.0)
    throw std::invalid_argument("phi_expansion: equator curvature not positive (alpha <= 0)");
  if (static_cast<int>(psi.size()) < K + 1)
    throw std::invalid_argument("phi_integrand_series: not enough psi coefficients");
  TruncSeries1 psi_s(std::vector<double>(psi.begin(), psi.begin() + (K + 1)));
  const int W = 2 * K;  // working total degree in (x, y) = (r_hat, R_hat)
  TruncSeries2 mx = lift_in_x_squared(psi_s, W);
  TruncSeries2 my = lift_in_y_squared(psi_s, W);
  TruncSeries2 dd = divided_difference_series(psi_s).stretched_to_squares(W);
  return my.scaled(2.0) * mx.reciprocal() * (mx + my).inv_sqrt() *
         dd.scaled(-1.0).inv_sqrt();
}

TruncSeries1 phi_expansion(const Profile& p, int order) {
  const std::vector<double>& psi = p.psi_coeffs();
  if (p.alpha() <= 0.0)
    throw std::invalid_argument("phi_expansion: equator curvature not positive (alpha <= 0)");
  if (psi.size() < 3) throw std::invalid_argument("phi_expansion: need psi to order s^2");
  // Attainable order in w = b - nu is limited by the psi coefficients.
  int max_order = static_cast<int>(psi.size()) - 2;
  int w_order = std::min(order, max_order);
  int K = w_order + 1;  // psi truncated to s^K
  TruncSeries1 psi_s(std::vector<double>(psi.begin(), psi.begin() + (K + 1)));

  // Series in y = a - R, even by (A1).
  TruncSeries1 phi_R = singular_integral_expansion(phi_integrand_series(p, K));
  std::vector<double> even(K + 1, 0.0);
  for (int k = 0; k <= K && 2 * k <= phi_R.order(); ++k) even[k] = phi_R[2 * k];
  TruncSeries1 phi_u(std::move(even));  // series in u = (a-R)^2

  // w(u) = b - psi(u); revert to u(w), then compose.
  TruncSeries1 w_of_u = psi_s.scaled(-1.0);
  w_of_u.at(0) = 0.0;
  TruncSeries1 u_of_w = w_of_u.reverted();
  return phi_u.compose(u_of_w).truncated(w_order);
}

}  // namespace revsurf
