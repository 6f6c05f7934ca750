#pragma once

#include <utility>
#include <vector>

#include "revsurf/geodesics.hpp"
#include "revsurf/powerlaw.hpp"
#include "revsurf/profile.hpp"

namespace revsurf {

// Radius where the geodesic with launch angle eta first meets the meridian
// theta = theta_target (after its turning point; checked).
double r_at_meridian(const Profile& p, double eta, double theta_target);

struct CubicFitOptions {
  int points_per_decade = 8;
  double theta_target = -1.0;  // < 0: use theta_cut
};

// Fit a - r_at_meridian(eta, theta_cut) ~ C eta^p over a log-spaced eta window.
// Expected: p = 3, C = (6 b beta - alpha^2) sqrt(b) pi / (16 sqrt(2) alpha^{5/2}).
PowerLawFit fit_cubic_degeneracy(const Profile& p, std::pair<double, double> eta_window,
                                 int n_samples = 0, const CubicFitOptions& opt = {});

// Closed-form constant of the cubic law for a given profile.
double cubic_law_constant(const Profile& p);

// Distance from q to the geodesic segment arc([0, t_end]): dense scan plus
// golden-section refinement.
double distance_to_segment(const Profile& p, Point q, const GeodesicArc& arc,
                           int scan_samples = 48, const DistanceOptions& dopt = {});

enum class ProbeDirection { AlongGeodesic, Transverse };

struct HingedFitOptions {
  // probe parameter window: displacement along the probe is s * d(x,y)/2
  std::pair<double, double> s_window = {0.02, 0.2};
  int points_per_decade = 8;
};

struct HingedFitResult {
  PowerLawFit fit;
  double h_at_midpoint = 0.0;
  double max_abs_variation = 0.0;  // max |h(s) - h(z0)| over the window
  std::vector<std::pair<double, double>> samples;  // (s, h - h0)
};

// Order of vanishing of h_{x,y} - min along the equator (AlongGeodesic) or
// along the meridian through the midpoint (Transverse). The probe parameter
// is normalized so the displacement from the midpoint is s d(x,y)/2.
HingedFitResult hinged_quartic_order(const Profile& p, Point x, Point y,
                                     ProbeDirection direction,
                                     const HingedFitOptions& opt = {});

}  // namespace revsurf
