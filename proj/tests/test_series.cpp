#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "revsurf/numerics.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/series.hpp"

using namespace revsurf;

namespace {

constexpr double kPi = std::numbers::pi;

TruncSeries1 random_series(std::mt19937& rng, int order, double c0_min = -1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(order + 1);
  for (double& v : c) v = u(rng);
  if (c0_min > 0.0) c[0] = c0_min + std::abs(c[0]) + 0.5;
  return TruncSeries1(std::move(c));
}

TruncSeries2 random_series2(std::mt19937& rng, int order) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TruncSeries2 f(order);
  for (int d = 0; d <= order; ++d)
    for (int j = 0; j <= d; ++j) f.set_coeff(d - j, j, u(rng));
  return f;
}

// Oracle for the singular integral: F(y) = int_0^{pi/2} f(y sin tau, y) dtau.
double singular_integral_oracle(const TruncSeries2& f, double y) {
  return gl_integrate([&](double tau) { return f.eval(y * std::sin(tau), y); }, 0.0, kPi / 2,
                      96);
}

}  // namespace

TEST_CASE("singular moments follow the closed recurrence") {
  CHECK(singular_moment(0) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(singular_moment(1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(singular_moment(2) == doctest::Approx(kPi / 4).epsilon(1e-15));
  CHECK(singular_moment(3) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(singular_moment(6) == doctest::Approx(15.0 * kPi / 96.0).epsilon(1e-14));
}

TEST_CASE("singular integral expansion: pinned coefficients") {
  TruncSeries2 one = TruncSeries2::constant(1.0, 4);
  CHECK(singular_integral_expansion(one)[0] == doctest::Approx(kPi / 2).epsilon(1e-15));

  TruncSeries2 x2(4);
  x2.set_coeff(2, 0, 1.0);
  CHECK(singular_integral_expansion(x2)[2] == doctest::Approx(kPi / 4).epsilon(1e-15));

  // f = a00 + a20 x^2 + a02 y^2 -> b0 = pi/2 a00, b2 = pi/2 a02 + pi/4 a20
  TruncSeries2 f(4);
  f.set_coeff(0, 0, 0.7);
  f.set_coeff(2, 0, -1.3);
  f.set_coeff(0, 2, 0.4);
  TruncSeries1 F = singular_integral_expansion(f);
  CHECK(F[0] == doctest::Approx(kPi / 2 * 0.7).epsilon(1e-15));
  CHECK(F[1] == doctest::Approx(0.0));
  CHECK(F[2] == doctest::Approx(kPi / 2 * 0.4 + kPi / 4 * (-1.3)).epsilon(1e-14));
}

TEST_CASE("singular integral expansion matches quadrature for random polynomials") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    TruncSeries2 f = random_series2(rng, 6);
    TruncSeries1 F = singular_integral_expansion(f);
    for (double y : {0.1, 0.01}) {
      double oracle = singular_integral_oracle(f, y);
      // exact for polynomial integrands, so only quadrature error remains
      CHECK(F.eval(y) == doctest::Approx(oracle).epsilon(1e-11));
    }
  }
}

TEST_CASE("divided difference series: pinned examples") {
  // g = x^2 -> (x^2-y^2)/(x-y) = x + y
  TruncSeries1 g(std::vector<double>{0.0, 0.0, 1.0});
  TruncSeries2 f = divided_difference_series(g);
  CHECK(f.coeff(1, 0) == doctest::Approx(1.0));
  CHECK(f.coeff(0, 1) == doctest::Approx(1.0));
  CHECK(f.coeff(0, 0) == doctest::Approx(0.0));

  // psi with coefficients (b, -alpha, beta): dd = -alpha + beta (x + y)
  TruncSeries1 psi(std::vector<double>{2.0, -1.0, 13.0 / 12.0});
  TruncSeries2 dd = divided_difference_series(psi);
  CHECK(dd.coeff(0, 0) == doctest::Approx(-1.0));
  CHECK(dd.coeff(1, 0) == doctest::Approx(13.0 / 12.0));
  CHECK(dd.coeff(0, 1) == doctest::Approx(13.0 / 12.0));

  // constant g -> identically zero
  TruncSeries1 c = TruncSeries1::constant(4.2, 3);
  TruncSeries2 z = divided_difference_series(c);
  for (int d = 0; d <= z.order(); ++d)
    for (int j = 0; j <= d; ++j) CHECK(z.coeff(d - j, j) == doctest::Approx(0.0));
}

TEST_CASE("divided difference reproduces g(x) - g(y) when multiplied by (x - y)") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    TruncSeries1 g = random_series(rng, 7);
    int n = g.order();
    TruncSeries2 dd = divided_difference_series(g);
    // pad dd to the full order before multiplying by the degree-1 factor
    TruncSeries2 padded(n);
    for (int d = 0; d <= dd.order(); ++d)
      for (int j = 0; j <= d; ++j) padded.set_coeff(d - j, j, dd.coeff(d - j, j));
    TruncSeries2 xmy(n);
    xmy.set_coeff(1, 0, 1.0);
    xmy.set_coeff(0, 1, -1.0);
    TruncSeries2 prod = padded * xmy;
    for (int d = 0; d <= n; ++d)
      for (int j = 0; j <= d; ++j) {
        double want = 0.0;
        if (j == 0) want += g[d];
        if (j == d) want -= g[d];
        CHECK(prod.coeff(d - j, j) == doctest::Approx(want).epsilon(1e-12));
      }
  }
}

TEST_CASE("series arithmetic: associativity, sqrt, reciprocal, reversion") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    TruncSeries1 f = random_series(rng, 8, 1.0);
    TruncSeries1 g = random_series(rng, 8);
    TruncSeries1 h = random_series(rng, 8);
    TruncSeries1 lhs = (f * g) * h;
    TruncSeries1 rhs = f * (g * h);
    for (int k = 0; k <= 8; ++k) CHECK(lhs[k] == doctest::Approx(rhs[k]).epsilon(1e-12));

    TruncSeries1 s = f.sqrt();
    TruncSeries1 s2 = s * s;
    for (int k = 0; k <= 8; ++k) CHECK(s2[k] == doctest::Approx(f[k]).epsilon(1e-11));

    TruncSeries1 r = f * f.reciprocal();
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int k = 1; k <= 8; ++k) CHECK(r[k] == doctest::Approx(0.0).epsilon(1e-10));

    TruncSeries1 inv = f.inv_sqrt() * f.sqrt() * f;
    for (int k = 0; k <= 8; ++k) CHECK(inv[k] == doctest::Approx(f[k]).epsilon(1e-10));

    // compositional inverse: w(u(w)) = w
    TruncSeries1 w = random_series(rng, 8);
    w.at(0) = 0.0;
    w.at(1) = 1.0 + std::abs(w[1]);
    TruncSeries1 u = w.reverted();
    TruncSeries1 ident = w.compose(u);
    CHECK(ident[1] == doctest::Approx(1.0).epsilon(1e-11));
    for (int k = 2; k <= 8; ++k) CHECK(ident[k] == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("bivariate integrand of the phi pipeline reproduces the proof coefficients") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  double b = ell.equator_radius(), al = ell.alpha(), be = ell.beta();
  TruncSeries2 f = phi_integrand_series(ell, 2);
  double f00 = std::sqrt(2.0) / std::sqrt(b * al);
  double f20 = (5 * al * al + 2 * b * be) / (2 * std::sqrt(2.0) * std::pow(b * al, 1.5));
  double f02 = (-3 * al * al + 2 * b * be) / (2 * std::sqrt(2.0) * std::pow(b * al, 1.5));
  CHECK(f.coeff(0, 0) == doctest::Approx(f00).epsilon(1e-13));
  CHECK(f.coeff(2, 0) == doctest::Approx(f20).epsilon(1e-13));
  CHECK(f.coeff(0, 2) == doctest::Approx(f02).epsilon(1e-13));
  CHECK(f.coeff(1, 0) == doctest::Approx(0.0));
  CHECK(f.coeff(0, 1) == doctest::Approx(0.0));
  CHECK(f.coeff(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("phi expansion: sphere degenerates, ellipsoid hits the closed forms") {
  Profile sph = Profile::sphere(1.0);
  TruncSeries1 se = phi_expansion(sph, 2);
  CHECK(se[0] == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(se[1] == doctest::Approx(0.0).epsilon(1e-13));
  CHECK(se[2] == doctest::Approx(0.0).epsilon(1e-12));  // all orders vanish on the sphere

  Profile ell = Profile::ellipsoid(2.0, 1.0);
  TruncSeries1 ee = phi_expansion(ell, 2);
  CHECK(ee.order() == 1);  // quadratic needs psi to s^3, not available
  CHECK(ee[0] == doctest::Approx(kPi / 2).epsilon(1e-14));
  CHECK(ee[1] == doctest::Approx(3 * kPi / 8).epsilon(1e-14));
}

TEST_CASE("phi expansion constant is pi/sqrt(2 alpha b) for every profile") {
  for (auto [b, c] : {std::pair{2.0, 1.0}, {1.5, 1.0}, {1.2, 1.0}, {3.0, 2.0}}) {
    Profile p = Profile::ellipsoid(b, c);
    double want = kPi / std::sqrt(2.0 * p.alpha() * p.equator_radius());
    CHECK(phi_expansion(p, 1)[0] == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("phi expansion rejects profiles without positive equator curvature") {
  Profile bad = Profile::analytic([](double r) { return 1.0 + 0.0 * r; }, 1.0,
                                  {1.0, 0.5, 0.1});  // alpha = -0.5 < 0
  CHECK_THROWS_AS(phi_expansion(bad, 1), std::invalid_argument);
}
