#include <doctest.h>

#include <cmath>
#include <numbers>

#include "revsurf/degeneracy.hpp"
#include "revsurf/powerlaw.hpp"
#include "revsurf/series.hpp"

using namespace revsurf;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("power-law fitting basics") {
  std::vector<double> x = log_spaced(1e-3, 1e-1, 4);
  std::vector<double> y(x.size());
  for (size_t i = 0; i < x.size(); ++i) y[i] = 2.5 * std::pow(x[i], 3.0);
  PowerLawFit fit = fit_power_law(x, y);
  CHECK(fit.exponent == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.constant == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK(fit.window.first == doctest::Approx(1e-3));
  CHECK_THROWS_AS(fit_power_law({1, 2, 3}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("r_at_meridian: sphere focuses exactly, ellipsoid follows the cubic law") {
  Profile sph = Profile::sphere(1.0);
  const double a_s = sph.pole_distance();
  for (double eta : {1e-3, 1e-2, 0.05, 0.1})
    CHECK(std::abs(a_s - r_at_meridian(sph, eta, kPi)) < 1e-10);

  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double theta_cut = kPi / 2;
  // closed form (6 b beta - alpha^2) sqrt(b) pi / (16 sqrt2 alpha^{5/2}) = 3pi/4
  CHECK(cubic_law_constant(ell) == doctest::Approx(3 * kPi / 4).epsilon(1e-14));

  double d1 = a - r_at_meridian(ell, 0.05, theta_cut);
  CHECK(d1 == doctest::Approx(3 * kPi / 4 * std::pow(0.05, 3)).epsilon(3e-6 / 2.9e-4));
  double d2 = a - r_at_meridian(ell, 0.025, theta_cut);
  CHECK(d1 / d2 == doctest::Approx(8.0).epsilon(0.03));
}

TEST_CASE("r_at_meridian rejects arcs that reach the meridian before turning") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  CHECK_THROWS_AS(r_at_meridian(ell, 1.2, 0.1), std::invalid_argument);
}

TEST_CASE("cubic degeneracy fit: exponent 3, constant from the closed form") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  PowerLawFit fit = fit_cubic_degeneracy(ell, {1e-3, 1e-1});
  CHECK(fit.exponent == doctest::Approx(3.0).epsilon(0.05 / 3.0));
  CHECK(fit.constant == doctest::Approx(3 * kPi / 4).epsilon(0.03));

  // independent Richardson oracle: C(eta) = (a - r)/eta^3 = C (1 + c eta^2),
  // so (4 C(eta) - C(2 eta))/3 removes the first correction
  const double a = ell.pole_distance();
  auto C_at = [&](double eta) {
    return (a - r_at_meridian(ell, eta, kPi / 2)) / (eta * eta * eta);
  };
  double c_rich = (4.0 * C_at(0.01) - C_at(0.02)) / 3.0;
  CHECK(fit.constant == doctest::Approx(c_rich).epsilon(0.01));

  // O(eta^5) remainder: the pure-cubic residual shrinks with the window
  PowerLawFit wide = fit_cubic_degeneracy(ell, {1e-2, 1e-1});
  PowerLawFit narrow = fit_cubic_degeneracy(ell, {1e-3, 1e-2});
  CHECK(narrow.residual < wide.residual);
}

TEST_CASE("cubic fit refuses singular profiles") {
  CHECK_THROWS_AS(fit_cubic_degeneracy(Profile::sphere(1.0), {1e-3, 1e-1}),
                  singular_profile_error);
}

TEST_CASE("distance to the geodesic segment matches the meridian defect") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double theta_cut = kPi / 2;
  DistanceOptions cheap;
  cheap.scan_points = 17;

  double eta = 0.05;
  GeodesicArc arc = integrate_geodesic(ell, eta, 8.0);
  EquatorCrossing cross = first_equator_crossing(arc);
  GeodesicArc segment = integrate_geodesic(ell, eta, cross.t);  // covers [0, phi(nu)]

  // q on the arc -> essentially zero
  Point on_arc{arc.samples[arc.samples.size() / 2].r, arc.samples[arc.samples.size() / 2].theta};
  // the probe point must sit on the equator for the distance solver; use the
  // launch point instead
  CHECK(distance_to_segment(ell, Point{a, 0.0}, segment, 24, cheap) < 1e-8);
  (void)on_arc;

  double law = 3 * kPi / 4 * std::pow(eta, 3);
  double dseg = distance_to_segment(ell, Point{a, theta_cut}, segment, 32, cheap);
  CHECK(dseg == doctest::Approx(law).epsilon(0.05));
  // agreement with a - r_at_meridian (meridians are minimal)
  double defect = a - r_at_meridian(ell, eta, theta_cut);
  CHECK(dseg == doctest::Approx(defect).epsilon(0.03));

  // cubic scaling eta -> eta/2
  GeodesicArc arc2 = integrate_geodesic(ell, eta / 2, 8.0);
  GeodesicArc seg2 = integrate_geodesic(ell, eta / 2, first_equator_crossing(arc2).t);
  double dseg2 = distance_to_segment(ell, Point{a, theta_cut}, seg2, 32, cheap);
  CHECK(dseg / dseg2 == doctest::Approx(8.0).epsilon(0.05));
}

TEST_CASE("hinged energy probes: s^2 along the geodesic, s^4 transverse") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double theta_cut = kPi / 2;
  Point x{a, 0.0}, y{a, theta_cut};

  HingedFitResult along = hinged_quartic_order(ell, x, y, ProbeDirection::AlongGeodesic);
  CHECK(along.fit.exponent == doctest::Approx(2.0).epsilon(0.02 / 2.0));
  CHECK(along.fit.constant == doctest::Approx(kPi * kPi / 4).epsilon(0.01));
  CHECK(along.h_at_midpoint == doctest::Approx(kPi * kPi / 4).epsilon(1e-10));

  HingedFitResult trans = hinged_quartic_order(ell, x, y, ProbeDirection::Transverse);
  CHECK(trans.fit.exponent == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  // constant has no closed form; window halving keeps it within ~35%
  HingedFitOptions half;
  half.s_window = {0.01, 0.1};
  HingedFitResult trans_half = hinged_quartic_order(ell, x, y, ProbeDirection::Transverse, half);
  CHECK(trans_half.fit.constant / trans.fit.constant > 0.65);
  CHECK(trans_half.fit.constant / trans.fit.constant < 1.55);
}

TEST_CASE("sphere transverse probe is flat (infinite order, m2 = infinity)") {
  Profile sph = Profile::sphere(1.0);
  Point x{kPi / 2, 0.0}, y{kPi / 2, kPi};
  HingedFitResult flat = hinged_quartic_order(sph, x, y, ProbeDirection::Transverse);
  CHECK(flat.max_abs_variation < 1e-10);
}

TEST_CASE("no tested reparametrization beats the cubic order (Gauss lemma route)") {
  Profile ell = Profile::ellipsoid(2.0, 1.0);
  const double a = ell.pole_distance();
  const double theta_cut = kPi / 2;
  const double t_cut = kPi;
  Point target{a, theta_cut};
  std::vector<double> svals = log_spaced(0.02, 0.1, 8);
  DistanceOptions cheap;
  cheap.scan_points = 17;
  for (double q : {-1.0, 0.0, 1.0, 2.0}) {
    std::vector<double> dvals(svals.size());
    for (size_t i = 0; i < svals.size(); ++i) {
      double s = svals[i];
      double ts = t_cut + q * s * s;
      GeodesicArc arc = integrate_geodesic(ell, s, ts);
      Point endpoint{arc.samples.back().r, arc.samples.back().theta};
      dvals[i] = distance(ell, target, endpoint, cheap);
    }
    PowerLawFit fit = fit_power_law(svals, dvals);
    CHECK(fit.exponent <= 3.05);
    CHECK(fit.exponent >= 1.9);  // sanity: the family stays a genuine variation
  }
}
