#include <doctest.h>

#include <cmath>
#include <numbers>

#include "revsurf/geodesics.hpp"
#include "revsurf/ode.hpp"
#include "revsurf/series.hpp"

using namespace revsurf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("Clairaut constant from the launch angle") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  CHECK(clairaut_of_angle(ell, 0.0) == doctest::Approx(2.0));
  CHECK(clairaut_of_angle(ell, kPi / 3) == doctest::Approx(1.0).epsilon(1e-14));
  // b - nu = b eta^2/2 + O(eta^4)
  double eta = 1e-3;
  double b = ell.equator_radius();
  CHECK(b - clairaut_of_angle(ell, eta) ==
        doctest::Approx(b * eta * eta / 2).epsilon(1e-6));
  CHECK_THROWS_AS(clairaut_of_angle(ell, kPi / 2), std::invalid_argument);
}

TEST_CASE("turning radius") {
  Profile sph = Profile::sphere(1.0);
  CHECK(turning_radius(sph, std::sqrt(0.5)) == doctest::Approx(kPi / 4).epsilon(1e-12));
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  CHECK(turning_radius(ell, 2.0) == doctest::Approx(a));
  // (a-R)^2 = (b-nu)/alpha + ... at b-nu = 1e-4
  double R = turning_radius(ell, 2.0 - 1e-4);
  CHECK(a - R == doctest::Approx(1e-2).epsilon(1e-3));
  CHECK_THROWS_AS(turning_radius(ell, 2.5), std::invalid_argument);
  CHECK_THROWS_AS(turning_radius(ell, 0.0), std::invalid_argument);
}

TEST_CASE("phi by singular quadrature: sphere is pi, ellipsoid matches the expansion") {
  Profile sph = Profile::sphere(1.0);
  for (double nu : {0.2, 0.5, 0.9})
    CHECK(phi_quadrature(sph, nu) == doctest::Approx(kPi).epsilon(1e-8));

  Profile ell = Profile::ellipsoid(2.0, 1.0);
  // non-increasing in nu
  double prev = 1e9;
  for (int i = 1; i <= 24; ++i) {
    double nu = 2.0 * i / 25.0;
    double phi = phi_quadrature(ell, nu);
    CHECK(phi <= prev + 1e-10);
    prev = phi;
  }
  // two-term expansion at b - nu = 1e-3 (remainder budget O((b-nu)^2))
  double phi = phi_quadrature(ell, 2.0 - 1e-3);
  CHECK(phi == doctest::Approx(kPi / 2 + 3 * kPi / 8 * 1e-3).epsilon(5e-6 / (kPi / 2)));
  CHECK(std::abs(phi - (kPi / 2 + 3 * kPi / 8 * 1e-3)) < 5e-6);

  // finite-difference slope oracle for the linear coefficient
  double slope = (phi_quadrature(ell, 2.0 - 1e-2) - phi) / (1e-2 - 1e-3);
  CHECK(slope == doctest::Approx(3 * kPi / 8).epsilon(0.01));
}

TEST_CASE("geodesic integration: equator, sphere antipode, conservation laws") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double b = ell.equator_radius();

  GeodesicArc eq = integrate_geodesic(ell, 0.0, 3.0);
  for (const auto& s : eq.samples) {
    CHECK(s.r == doctest::Approx(a).epsilon(1e-10));
    CHECK(s.theta == doctest::Approx(s.t / b).epsilon(1e-10));
  }

  Profile sph = Profile::sphere(1.0);
  for (double eta : {0.2, 0.5, 1.0}) {
    GeodesicArc arc = integrate_geodesic(sph, eta, 1.2 * kPi);
    EquatorCrossing cross = first_equator_crossing(arc);
    CHECK(cross.t == doctest::Approx(kPi).epsilon(1e-8));
    CHECK(cross.theta == doctest::Approx(kPi).epsilon(1e-8));
  }

  GeodesicArc arc = integrate_geodesic(ell, 0.4, 6.0);
  for (const auto& s : arc.samples) {
    double m = ell.m(s.r);
    // Clairaut conservation and unit speed
    CHECK(m * m * s.thetadot == doctest::Approx(arc.nu).epsilon(1e-8));
    CHECK(s.rdot * s.rdot + m * m * s.thetadot * s.thetadot ==
          doctest::Approx(1.0).epsilon(1e-8));
    CHECK(s.r >= arc.turning_radius - 1e-9);
  }
}

TEST_CASE("first equator crossing cross-validates the singular quadrature") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  for (double eta : {0.05, 0.2, 0.3, 0.7, 1.0}) {
    GeodesicArc arc = integrate_geodesic(ell, eta, 12.0);
    EquatorCrossing cross = first_equator_crossing(arc);
    CHECK(cross.theta ==
          doctest::Approx(phi_quadrature(ell, 2.0 * std::cos(eta))).epsilon(1e-6 / 1.5));
  }
  // eta -> 0: crossing angle approaches theta_cut = pi/2
  GeodesicArc small = integrate_geodesic(ell, 0.01, 8.0);
  CHECK(first_equator_crossing(small).theta == doctest::Approx(kPi / 2).epsilon(1e-3));
}

TEST_CASE("Jacobi conjugate time on the equator") {
  Profile sph = Profile::sphere(1.0);
  GeodesicArc eq_s = integrate_geodesic(sph, 0.0, 4.0);
  CHECK(jacobi_conjugate_time(sph, eq_s) == doctest::Approx(kPi).epsilon(1e-7));

  Profile ell = Profile::ellipsoid(2.0, 1.0);
  GeodesicArc eq = integrate_geodesic(ell, 0.0, 4.0);
  CHECK(jacobi_conjugate_time(ell, eq) == doctest::Approx(kPi).epsilon(1e-6));
}

TEST_CASE("Jacobi field follows the constant-curvature closed form on the equator") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double b = ell.equator_radius(), al = ell.alpha();
  const double omega = std::sqrt(2.0 * al / b);
  using State5 = std::array<double, 5>;
  auto rhs = [&](double, const State5& y, State5& dy) {
    double m = ell.m(y[0]);
    dy[0] = y[1];
    dy[1] = b * b * ell.m_prime(y[0]) / (m * m * m);
    dy[2] = b / (m * m);
    dy[3] = y[4];
    dy[4] = -ell.curvature(y[0]) * y[3];
  };
  Rk45<5> solver(rhs, OdeControl{});
  State5 y{ell.pole_distance(), 0.0, 0.0, 0.0, 1.0};
  double t = 0.0;
  for (double t_next : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
    y = solver.integrate(t, y, t_next);
    t = t_next;
    CHECK(y[3] == doctest::Approx(std::sqrt(b / (2 * al)) * std::sin(omega * t)).epsilon(1e-8));
  }
}

TEST_CASE("cut structure ties the expansion constant to the Jacobi time") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  CutStructure cs = cut_structure(ell);
  CHECK(cs.theta_cut == doctest::Approx(kPi / 2).epsilon(1e-13));
  CHECK(cs.t_cut == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(std::abs(cs.t_conj - cs.t_cut) < 1e-6);
  CHECK(cs.phi_of_nu(2.0 - 1e-3) == doctest::Approx(kPi / 2 + 3 * kPi / 8 * 1e-3).epsilon(1e-5));
}

TEST_CASE("distance: equator arcs, sphere closed form, BVP cross-validation") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double b = ell.equator_radius();

  CHECK(distance(ell, {a, 0.3}, {a, 0.3}) == doctest::Approx(0.0));
  // equator is minimal up to theta_cut = pi/2
  for (double th : {0.2, 0.8, 1.2, kPi / 2})
    CHECK(distance(ell, {a, 0.0}, {a, th}) == doctest::Approx(b * th).epsilon(1e-9));

  Profile sph = Profile::sphere(1.0);
  CHECK(distance(sph, {kPi / 2, 0.0}, {kPi / 2, kPi}) == doctest::Approx(kPi));
  CHECK(distance_info(sph, {kPi / 2, 0.0}, {kPi / 2, kPi}).multiplicity >= 2);

  // generic BVP on the sphere agrees with the closed form
  DistanceOptions opt;
  for (auto [ry, thy] : {std::pair{kPi / 2 - 0.3, 0.9}, {kPi / 2 + 0.4, 1.7}, {1.0, 2.4}}) {
    double closed = distance(sph, {kPi / 2, 0.0}, {ry, thy});
    double bvp = detail::distance_bvp(sph, {kPi / 2, 0.0}, {ry, thy}, opt).length;
    CHECK(bvp == doctest::Approx(closed).epsilon(1e-9));
  }
}

TEST_CASE("distance: beyond the cut point the equator stops minimizing") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double b = ell.equator_radius();
  const double theta_cut = kPi / 2;
  double th = theta_cut + 0.05;
  double d = distance(ell, {a, 0.0}, {a, th});
  CHECK(d < b * th - 1e-6);
  // antipodal equator points connect over the poles at length 2a
  DistanceInfo anti = distance_info(ell, {a, 0.0}, {a, kPi});
  CHECK(anti.length == doctest::Approx(2 * a).epsilon(1e-9));
  CHECK(anti.multiplicity >= 2);
}

TEST_CASE("distance: triangle inequality on sampled equator/meridian triples") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  Point xs[] = {{a, 0.0}, {a, 0.7}, {a, 1.4}};
  Point zs[] = {{a - 0.4, 0.5}, {a + 0.3, 1.0}, {a - 0.2, 1.3}};
  for (const auto& x : xs)
    for (const auto& y : xs)
      for (const auto& z : zs) {
        double dxy = distance(ell, x, y);
        double dxz = distance(ell, x, z);
        double dyz = distance(ell, y, z);
        CHECK(dxy <= dxz + dyz + 1e-7);
      }
}

TEST_CASE("distance reports when no connecting geodesic is in the scanned range") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  // target close to the pole needs near-meridian launch angles outside the scan
  CHECK_THROWS_AS(distance(ell, {ell.pole_distance(), 0.0}, {0.05, 2.0}),
                  std::runtime_error);
}

TEST_CASE("hinged energy: minimum value, endpoint value, equator normal form") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double theta_cut = kPi / 2;
  HingedProbe probe = make_hinged_probe(ell, {a, 0.0}, {a, theta_cut});
  const double d = probe.d_xy;
  CHECK(d == doctest::Approx(kPi));
  CHECK(hinged_energy(ell, probe, probe.midpoint) == doctest::Approx(0.25 * d * d).epsilon(1e-12));
  CHECK(hinged_energy(ell, probe, probe.x) == doctest::Approx(0.5 * d * d).epsilon(1e-12));
  // h(alpha(s)) = d^2/4 (1 + s^2) along the equator
  const double b = ell.equator_radius();
  for (double s : {0.05, 0.1, 0.2}) {
    Point z{a, probe.midpoint.theta + s * d / (2 * b)};
    CHECK(hinged_energy(ell, probe, z) ==
          doctest::Approx(0.25 * d * d * (1 + s * s)).epsilon(1e-10));
  }
}
