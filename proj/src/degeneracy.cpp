#include "revsurf/degeneracy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revsurf/numerics.hpp"
#include "revsurf/series.hpp"

namespace revsurf {

namespace {
constexpr double kPi = std::numbers::pi;
}

double r_at_meridian(const Profile& p, double eta, double theta_target) {
  if (!(eta > 0.0 && eta < kPi / 2))
    throw std::invalid_argument("r_at_meridian: eta outside (0, pi/2)");
  if (!(theta_target > 0.0)) throw std::invalid_argument("r_at_meridian: theta_target <= 0");
  const double a = p.pole_distance();
  const double b = p.equator_radius();
  const double nu = b * std::cos(eta);

  using State3 = std::array<double, 3>;
  auto rhs = [&p, nu](double, const State3& y, State3& dy) {
    double m = p.m(y[0]);
    dy[0] = y[1];
    dy[1] = nu * nu * p.m_prime(y[0]) / (m * m * m);
    dy[2] = nu / (m * m);
  };
  OdeControl ctl;
  ctl.rtol = 1e-11;
  ctl.atol = 1e-13;
  Rk45<3> solver(rhs, ctl);
  double t_max = theta_target * b * b / nu * 1.05 + 2.0 * a;

  // locate the meridian crossing and make sure the turning point came first
  State3 y_event;
  double t_cross = locate_event<3>(
      solver, 0.0, {a, -std::sin(eta), 0.0}, t_max,
      [theta_target](double, const State3& y) { return y[2] - theta_target; }, y_event,
      0.0, 1e-12);
  if (y_event[1] < 0.0)
    throw std::invalid_argument(
        "r_at_meridian: arc has not passed its turning point before the target meridian "
        "(eta too large for this theta_target)");
  (void)t_cross;
  return y_event[0];
}

double cubic_law_constant(const Profile& p) {
  const double b = p.equator_radius();
  const double al = p.alpha();
  return (6.0 * b * p.beta() - al * al) * std::sqrt(b) * kPi /
         (16.0 * std::sqrt(2.0) * std::pow(al, 2.5));
}

PowerLawFit fit_cubic_degeneracy(const Profile& p, std::pair<double, double> eta_window,
                                 int n_samples, const CubicFitOptions& opt) {
  if (p.is_singular())
    throw singular_profile_error(
        "fit_cubic_degeneracy: profile is singular (6 b beta = alpha^2); the cubic law "
        "degenerates");
  double theta_target = opt.theta_target;
  if (theta_target < 0.0) theta_target = phi_expansion(p, 0)[0];  // theta_cut
  std::vector<double> etas =
      n_samples > 0
          ? [&] {
              std::vector<double> g(n_samples);
              for (int i = 0; i < n_samples; ++i)
                g[i] = eta_window.first *
                       std::pow(eta_window.second / eta_window.first, double(i) / (n_samples - 1));
              return g;
            }()
          : log_spaced(eta_window.first, eta_window.second, opt.points_per_decade);
  const double a = p.pole_distance();
  std::vector<double> defect(etas.size());
  for (size_t i = 0; i < etas.size(); ++i) defect[i] = a - r_at_meridian(p, etas[i], theta_target);
  return fit_power_law(etas, defect);
}

double distance_to_segment(const Profile& p, Point q, const GeodesicArc& arc,
                           int scan_samples, const DistanceOptions& dopt) {
  if (arc.samples.size() < 2)
    throw std::invalid_argument("distance_to_segment: arc has no samples");
  const double t_end = arc.samples.back().t;
  // evaluate d(q, arc(t)) by re-integrating to t once per probe
  using State3 = std::array<double, 3>;
  auto rhs = [&](double, const State3& y, State3& dy) {
    double m = p.m(y[0]);
    dy[0] = y[1];
    dy[1] = arc.nu * arc.nu * p.m_prime(y[0]) / (m * m * m);
    dy[2] = arc.nu / (m * m);
  };
  OdeControl ctl;
  ctl.rtol = 1e-11;
  ctl.atol = 1e-13;
  Rk45<3> solver(rhs, ctl);
  auto point_at = [&](double t) -> Point {
    if (t <= 0.0) return {p.pole_distance(), 0.0};
    State3 y = solver.integrate(0.0, {p.pole_distance(), -std::sin(arc.eta), 0.0}, t);
    return {y[0], y[2]};
  };
  auto dist_at = [&](double t) {
    Point z = point_at(t);
    return distance(p, q, z, dopt);  // q sits on the equator for every caller in scope
  };
  double best_t = 0.0, best = dist_at(0.0);
  for (int i = 1; i <= scan_samples; ++i) {
    double t = t_end * i / scan_samples;
    double d = dist_at(t);
    if (d < best) {
      best = d;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - t_end / scan_samples);
  double hi = std::min(t_end, best_t + t_end / scan_samples);
  double t_star = golden_section_min(dist_at, lo, hi, 1e-10 * t_end);
  return std::min(best, dist_at(t_star));
}

HingedFitResult hinged_quartic_order(const Profile& p, Point x, Point y,
                                     ProbeDirection direction, const HingedFitOptions& opt) {
  HingedProbe probe = make_hinged_probe(p, x, y);
  const double d = probe.d_xy;
  const double h0 = hinged_energy(p, probe, probe.midpoint);
  if (std::abs(h0 - 0.25 * d * d) > 1e-6)
    throw std::runtime_error("hinged_quartic_order: h(z0) deviates from d^2/4 beyond 1e-6");

  std::vector<double> svals = log_spaced(opt.s_window.first, opt.s_window.second,
                                         opt.points_per_decade);
  HingedFitResult result;
  result.h_at_midpoint = h0;
  const double b = p.equator_radius();
  std::vector<double> deltas(svals.size());
  for (size_t i = 0; i < svals.size(); ++i) {
    double arc_shift = svals[i] * d / 2.0;  // alpha(s) = gamma(1+s)
    Point z = probe.midpoint;
    if (direction == ProbeDirection::AlongGeodesic)
      z.theta += arc_shift / b;
    else
      z.r -= arc_shift;  // along the meridian, toward the near pole
    double h = hinged_energy(p, probe, z);
    deltas[i] = h - h0;
    result.max_abs_variation = std::max(result.max_abs_variation, std::abs(deltas[i]));
    result.samples.emplace_back(svals[i], deltas[i]);
  }
  // A flat probe (sphere antipodal pair) has no power law to fit.
  bool flat = true;
  for (double v : deltas) flat = flat && std::abs(v) < 1e-14 * std::max(1.0, h0);
  if (!flat) result.fit = fit_power_law(svals, deltas);
  return result;
}

}  // namespace revsurf
