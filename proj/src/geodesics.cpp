#include "revsurf/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revsurf/numerics.hpp"
#include "revsurf/series.hpp"

namespace revsurf {

namespace {

constexpr double kPi = std::numbers::pi;

using State3 = std::array<double, 3>;  // r, rdot, theta
using State5 = std::array<double, 5>;  // r, rdot, theta, u, udot

// Second-order Clairaut system: rddot = nu^2 m'(r)/m^3, thetadot = nu/m^2.
// Passes smoothly through the turning point, unlike the square-root form.
Rk45<3>::Rhs geodesic_rhs(const Profile& p, double nu) {
  return [p, nu](double, const State3& y, State3& dy) {
    double m = p.m(y[0]);
    double m3 = m * m * m;
    dy[0] = y[1];
    dy[1] = nu * nu * p.m_prime(y[0]) / m3;
    dy[2] = nu / (m * m);
  };
}

double wrap_angle(double th) {
  th = std::fmod(th, 2.0 * kPi);
  if (th < 0) th += 2.0 * kPi;
  return th;  // [0, 2pi)
}

}  // namespace

double clairaut_of_angle(const Profile& p, double eta) {
  if (!(eta >= 0.0 && eta < kPi / 2))
    throw std::invalid_argument("clairaut_of_angle: eta outside [0, pi/2)");
  return p.equator_radius() * std::cos(eta);
}

double turning_radius(const Profile& p, double nu) {
  const double a = p.pole_distance();
  const double b = p.equator_radius();
  if (!(nu > 0.0 && nu <= b)) throw std::invalid_argument("turning_radius: nu outside (0, b]");
  if (nu == b) return a;
  double lo = 1e-12 * a, hi = a;
  return brent([&](double r) { return p.m(r) - nu; }, lo, hi, 1e-13 * a);
}

double phi_quadrature(const Profile& p, double nu, double abs_tol) {
  const double b = p.equator_radius();
  const double a = p.pole_distance();
  if (!(nu > 0.0 && nu < b)) throw std::invalid_argument("phi_quadrature: nu outside (0, b)");
  const double R = turning_radius(p, nu);
  const double y = a - R;
  auto integrand = [&](double tau) {
    double st = std::sin(tau), ct = std::cos(tau);
    double s2 = st * st;
    double r = R + y * s2;
    double m = p.m(r);
    double q = (m - nu) / s2;  // analytic and positive on (0, pi/2]
    return 4.0 * nu * y * ct / (m * std::sqrt(q * (m + nu)));
  };
  return integrate_adaptive(integrand, 0.0, kPi / 2, abs_tol / 2, 48, 5);
}

GeodesicArc integrate_geodesic(const Profile& p, double eta, double t_end,
                               const OdeControl& control) {
  if (!(eta >= 0.0 && eta < kPi / 2))
    throw std::invalid_argument("integrate_geodesic: eta outside [0, pi/2)");
  if (!(t_end > 0.0)) throw std::invalid_argument("integrate_geodesic: t_end must be positive");
  GeodesicArc arc{p};
  arc.eta = eta;
  arc.nu = clairaut_of_angle(p, eta);
  arc.turning_radius = turning_radius(p, arc.nu);
  arc.t_end = t_end;
  Rk45<3> solver(geodesic_rhs(p, arc.nu), control);
  const double nu = arc.nu;
  solver.integrate(0.0, {p.pole_distance(), -std::sin(eta), 0.0}, t_end,
                   [&](double t, const State3& y) {
                     double m = p.m(y[0]);
                     arc.samples.push_back({t, y[0], y[2], y[1], nu / (m * m)});
                   });
  return arc;
}

EquatorCrossing first_equator_crossing(const GeodesicArc& arc) {
  if (!(arc.eta > 0.0))
    throw std::invalid_argument("first_equator_crossing: arc must be launched with eta > 0");
  const Profile& p = arc.profile;
  const double a = p.pole_distance();
  Rk45<3> solver(geodesic_rhs(p, arc.nu), OdeControl{});
  State3 y_event;
  double t = locate_event<3>(
      solver, 0.0, {a, -std::sin(arc.eta), 0.0}, arc.t_end,
      [a](double, const State3& y) { return y[0] - a; }, y_event,
      /*t_skip=*/0.0, /*ttol=*/1e-11);
  return {t, y_event[2]};
}

double jacobi_conjugate_time(const Profile& p, const GeodesicArc& arc) {
  const double nu = arc.nu;
  auto rhs = [&p, nu](double, const State5& y, State5& dy) {
    double m = p.m(y[0]);
    double m3 = m * m * m;
    dy[0] = y[1];
    dy[1] = nu * nu * p.m_prime(y[0]) / m3;
    dy[2] = nu / (m * m);
    dy[3] = y[4];
    dy[4] = -p.curvature(y[0]) * y[3];
  };
  Rk45<5> solver(rhs, OdeControl{});
  State5 y_event;
  double t = locate_event<5>(
      solver, 0.0, {p.pole_distance(), -std::sin(arc.eta), 0.0, 0.0, 1.0}, arc.t_end,
      [](double, const State5& y) { return y[3]; }, y_event,
      /*t_skip=*/1e-6, /*ttol=*/1e-11);
  return t;
}

CutStructure cut_structure(const Profile& p) {
  CutStructure cs;
  TruncSeries1 exp_series = phi_expansion(p, 1);
  cs.theta_cut = exp_series[0];
  cs.t_cut = p.equator_radius() * cs.theta_cut;
  GeodesicArc equator{p};
  equator.eta = 0.0;
  equator.nu = p.equator_radius();
  equator.turning_radius = p.pole_distance();
  equator.t_end = 2.5 * cs.t_cut;
  cs.t_conj = jacobi_conjugate_time(p, equator);
  cs.phi_of_nu = [p](double nu) { return phi_quadrature(p, nu); };
  return cs;
}

namespace detail {

namespace {

// Time and radius of the first crossing of the meridian theta = dtheta by the
// geodesic with launch angle chi (signed: chi > 0 dips toward the near pole).
// Returns nullopt when no crossing happens before t_max.
struct MeridianHit {
  double t;
  double r;
};

std::optional<MeridianHit> meridian_hit(const Profile& p, double chi, double dtheta,
                                        double t_cap, const DistanceOptions& opt) {
  const double b = p.equator_radius();
  const double a = p.pole_distance();
  double nu = b * std::cos(chi);
  OdeControl ctl;
  ctl.rtol = opt.ode_rtol;
  ctl.atol = opt.ode_atol;
  Rk45<3> solver(geodesic_rhs(p, nu), ctl);
  // theta advances at rate nu/m^2 >= nu/b^2, so the crossing happens by
  // dtheta b^2/nu; crossings beyond t_cap cannot beat the running best.
  double t_max = std::min(dtheta * b * b / nu * 1.05 + 2.0 * a, t_cap);
  State3 y_event;
  try {
    double t = locate_event<3>(
        solver, 0.0, {a, -std::sin(chi), 0.0}, t_max,
        [dtheta](double, const State3& y) { return y[2] - dtheta; }, y_event,
        /*t_skip=*/0.0, /*ttol=*/1e-12);
    return MeridianHit{t, y_event[0]};
  } catch (const std::runtime_error&) {
    return std::nullopt;
  }
}

}  // namespace

DistanceInfo distance_bvp(const Profile& p, Point x, Point y, const DistanceOptions& opt) {
  const double a = p.pole_distance();
  const double b = p.equator_radius();
  if (std::abs(x.r - a) > 1e-12 * a)
    throw std::invalid_argument("distance: x must lie on the equator");
  if (!(y.r > 0.0 && y.r < 2.0 * a))
    throw std::invalid_argument("distance: y must be off the poles");

  double dth = wrap_angle(y.theta - x.theta);
  if (dth > kPi) dth = 2.0 * kPi - dth;  // mirror symmetry in theta

  std::vector<double> candidates;

  const bool y_on_equator = std::abs(y.r - a) <= 1e-12 * a;
  if (y_on_equator && dth == 0.0) return {0.0, 1};

  // same-meridian target: the meridian arc is minimizing (cut locus of x is
  // on the equator, so meridian geodesics minimize until their equator return)
  if (dth <= 1e-12) candidates.push_back(std::abs(y.r - a));
  // antipodal meridian: over either pole
  if (std::abs(dth - kPi) <= 1e-12) {
    candidates.push_back(a + std::min(y.r, 2.0 * a - y.r));
    candidates.push_back(3.0 * a - std::min(y.r, 2.0 * a - y.r));
  }
  if (y_on_equator) {
    candidates.push_back(b * dth);
    candidates.push_back(b * (2.0 * kPi - dth));
  }

  // Any path along the equator plus y's meridian bounds the distance; no
  // meridian crossing later than that (plus slack) can be minimal.
  const double dr_gap = std::abs(y.r - a);
  const double path_bound = b * dth + dr_gap;
  const double t_cap = 1.25 * path_bound + 1e-3 * (1.0 + b);

  // Shooting families: both theta directions (angles dth and 2pi - dth), both
  // rdot signs (chi sign). chi = 0 (pure equator) is covered by the analytic
  // equator candidate above. Nearly-meridian targets (b dth << dr_gap) push
  // the connecting launch angle toward pi/2; widen the scan accordingly.
  double chi_hi = std::max(opt.chi_max, kPi / 2 - 0.5 * std::atan2(b * dth, dr_gap));
  chi_hi = std::min(chi_hi, kPi / 2 - 1e-8);
  std::vector<double> ways = {dth};
  if (dth > 1e-12 && 2.0 * kPi - dth > dth + 1e-12) ways.push_back(2.0 * kPi - dth);
  for (double way : ways) {
    if (way <= 1e-12) continue;
    const int n = opt.scan_points;
    std::vector<double> chis(n), resid(n);
    std::vector<bool> ok(n, false);
    for (int i = 0; i < n; ++i) {
      double chi = -chi_hi + 2.0 * chi_hi * i / (n - 1);
      if (std::abs(chi) < 1e-4) chi = (chi >= 0 ? 1e-4 : -1e-4);
      chis[i] = chi;
      auto hit = meridian_hit(p, chi, way, t_cap, opt);
      if (hit) {
        resid[i] = hit->r - y.r;
        ok[i] = true;
      }
    }
    for (int i = 0; i + 1 < n; ++i) {
      if (!ok[i] || !ok[i + 1]) continue;
      if (resid[i] == 0.0 || (resid[i] < 0) == (resid[i + 1] < 0)) continue;
      double chi_root = brent(
          [&](double chi) {
            auto hit = meridian_hit(p, chi, way, t_cap, opt);
            return hit ? hit->r - y.r : resid[i];
          },
          chis[i], chis[i + 1], 1e-13);
      auto hit = meridian_hit(p, chi_root, way, t_cap, opt);
      if (hit) candidates.push_back(hit->t);
    }
  }

  if (candidates.empty())
    throw std::runtime_error("distance: no connecting geodesic found in the scanned range");
  double best = *std::min_element(candidates.begin(), candidates.end());
  // ties from distinct branches are reported via multiplicity
  int mult = 0;
  for (double c : candidates)
    if (c <= best + opt.tie_tol) ++mult;
  return {best, std::max(mult, 1)};
}

}  // namespace detail

DistanceInfo distance_info(const Profile& p, Point x, Point y, const DistanceOptions& opt) {
  if (p.kind() == ProfileKind::Sphere) {
    const double rho = p.equator_radius();
    double px = x.r / rho, py = y.r / rho;  // polar angles
    double cd = std::cos(px) * std::cos(py) +
                std::sin(px) * std::sin(py) * std::cos(y.theta - x.theta);
    cd = std::clamp(cd, -1.0, 1.0);
    double d = rho * std::acos(cd);
    int mult = (std::abs(cd + 1.0) < 1e-15) ? 2 : 1;  // antipodal: a full family
    return {d, mult};
  }
  return detail::distance_bvp(p, x, y, opt);
}

double distance(const Profile& p, Point x, Point y, const DistanceOptions& opt) {
  return distance_info(p, x, y, opt).length;
}

HingedProbe make_hinged_probe(const Profile& p, Point x, Point y) {
  const double a = p.pole_distance();
  if (std::abs(x.r - a) > 1e-12 * a || std::abs(y.r - a) > 1e-12 * a)
    throw std::invalid_argument("make_hinged_probe: x and y must lie on the equator");
  HingedProbe probe;
  probe.x = x;
  probe.y = y;
  probe.d_xy = distance(p, x, y);
  probe.midpoint = {a, x.theta + 0.5 * (y.theta - x.theta)};
  return probe;
}

double hinged_energy(const Profile& p, const HingedProbe& probe, Point z) {
  double dx = distance(p, probe.x, z);
  double dy = distance(p, probe.y, z);
  return 0.5 * (dx * dx + dy * dy);
}

}  // namespace revsurf
