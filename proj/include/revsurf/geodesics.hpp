#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "revsurf/ode.hpp"
#include "revsurf/profile.hpp"

namespace revsurf {

struct Point {
  double r = 0.0;
  double theta = 0.0;
};

struct GeodesicSample {
  double t, r, theta, rdot, thetadot;
};

// Clairaut geodesic launched from the equator point (a, 0):
// r(0) = a, rdot(0) = -sin(eta), theta(0) = 0, nu = b cos(eta).
struct GeodesicArc {
  explicit GeodesicArc(Profile p) : profile(std::move(p)) {}
  Profile profile;
  double nu = 0.0;
  double eta = 0.0;
  double turning_radius = 0.0;  // R, with m(R) = nu
  std::vector<GeodesicSample> samples;
  double t_end = 0.0;
};

double clairaut_of_angle(const Profile& p, double eta);
double turning_radius(const Profile& p, double nu);

// phi(nu) = 2 int_R^a nu dr / (m sqrt(m^2 - nu^2)); the endpoint singularity
// is removed by r = R + (a-R) sin^2 tau.
double phi_quadrature(const Profile& p, double nu, double abs_tol = 1e-9);

GeodesicArc integrate_geodesic(const Profile& p, double eta, double t_end,
                               const OdeControl& control = {});

struct EquatorCrossing {
  double t = 0.0;
  double theta = 0.0;
};
// First return of the arc to the equator (after the turning point).
EquatorCrossing first_equator_crossing(const GeodesicArc& arc);

// First positive zero of the Jacobi field u'' + K(gamma(t)) u = 0,
// u(0) = 0, u'(0) = 1 along the arc.
double jacobi_conjugate_time(const Profile& p, const GeodesicArc& arc);

struct CutStructure {
  double theta_cut = 0.0;
  double t_cut = 0.0;
  double t_conj = 0.0;
  std::function<double(double)> phi_of_nu;
};
CutStructure cut_structure(const Profile& p);

struct DistanceOptions {
  double ode_rtol = 1e-12;
  double ode_atol = 1e-13;
  int scan_points = 33;
  double chi_max = 1.45;     // minimum launch-angle scan half-range; widened
                             // automatically for nearly-meridian targets
  double tie_tol = 1e-7;     // lengths this close count as tied minimizers
};

struct DistanceInfo {
  double length = 0.0;
  int multiplicity = 1;  // number of distinct minimizing branches found
};

// Riemannian distance, x restricted to the equator. Shooting over the launch
// angle with both initial rdot signs and both theta directions; sphere
// profiles use the closed-form great-circle distance.
double distance(const Profile& p, Point x, Point y, const DistanceOptions& opt = {});
DistanceInfo distance_info(const Profile& p, Point x, Point y, const DistanceOptions& opt = {});

namespace detail {
// Generic shooting solver, exposed so tests can cross-validate it on profiles
// that normally take a closed-form path.
DistanceInfo distance_bvp(const Profile& p, Point x, Point y, const DistanceOptions& opt);
}  // namespace detail

struct HingedProbe {
  Point x, y;
  Point midpoint;   // z0
  double d_xy = 0.0;
};

// Probe for h_{x,y}; x and y on the equator with |theta_y - theta_x| within
// the minimal range of the equator arc, so z0 is the equator midpoint.
HingedProbe make_hinged_probe(const Profile& p, Point x, Point y);

// h_{x,y}(z) = 1/2 d(x,z)^2 + 1/2 d(y,z)^2
double hinged_energy(const Profile& p, const HingedProbe& probe, Point z);

}  // namespace revsurf
