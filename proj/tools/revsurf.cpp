// revsurf: batch front-end for profiles, geodesics, cut-locus expansions,
// degeneracy fits and heat-kernel experiments on two-spheres of revolution.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "revsurf/acceptance.hpp"
#include "revsurf/degeneracy.hpp"
#include "revsurf/geodesics.hpp"
#include "revsurf/powerlaw.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/series.hpp"
#include "revsurf/spectral.hpp"

using nlohmann::json;
using namespace revsurf;

namespace {

std::ostream& open_sink(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  return file;
}

std::vector<double> make_grid(double lo, double hi, int n, bool log_spacing) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double f = n == 1 ? 0.0 : double(i) / (n - 1);
    g[i] = log_spacing ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
  }
  return g;
}

Point parse_point(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("expected point as r,theta: " + text);
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

json fit_to_json(const PowerLawFit& fit) {
  return {{"exponent", fit.exponent},
          {"constant", fit.constant},
          {"residual", fit.residual},
          {"window", {fit.window.first, fit.window.second}},
          {"spread", fit.spread}};
}

// Minimal standalone SVG line plot (one polyline, framed axes).
void write_svg(const std::string& path, const std::vector<double>& xs,
               const std::vector<double>& ys, const std::string& title) {
  if (xs.empty()) return;
  const int W = 720, H = 480, M = 56;
  double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
  for (double v : xs) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
  for (double v : ys) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double x) { return M + (W - 2 * M) * (x - xmin) / (xmax - xmin); };
  auto Y = [&](double y) { return H - M - (H - 2 * M) * (y - ymin) / (ymax - ymin); };
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open SVG output: " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='14'>" << title
      << "</text>\n";
  out << "<rect x='" << M << "' y='" << M << "' width='" << W - 2 * M << "' height='"
      << H - 2 * M << "' fill='none' stroke='black'/>\n";
  out << "<polyline fill='none' stroke='steelblue' stroke-width='1.5' points='";
  for (size_t i = 0; i < xs.size(); ++i) out << X(xs[i]) << "," << Y(ys[i]) << " ";
  out << "'/>\n</svg>\n";
}

struct CsvWriter {
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::string& line) { out_ << line << "\n"; }
  template <typename... Ts>
  void row(Ts... vals) {
    bool first = true;
    ((out_ << (first ? "" : ","), first = false, print(vals)), ...);
    out_ << "\n";
  }
  void print(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out_ << buf;
  }
  std::ostream& out_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"revsurf: geodesics, cut loci and heat kernels on two-spheres of revolution"};
  app.set_config("--config", "", "key=value config file mirroring the flags");
  app.require_subcommand(1);

  std::string profile_spec = "ellipsoid:2,1";
  app.add_option("--profile", profile_spec, "sphere:R or ellipsoid:B,C")->capture_default_str();
  std::string out_path, json_path, svg_path;
  app.add_option("--out", out_path, "CSV output path (default stdout)");
  app.add_option("--json-out", json_path, "JSON output path (default stdout)");
  app.add_option("--plot", svg_path, "optional SVG line plot");
  std::uint64_t seed = 20260809;
  app.add_option("--seed", seed, "seed for bootstrap resampling in fits");
  int workers = 0;
  app.add_option("--workers", workers,
                 "worker threads for spectral assembly (0 = hardware, capped by "
                 "REVSURF_MAX_WORKERS)");

  auto* cmd_profile = app.add_subcommand("profile", "profile data and assumption checks");
  cmd_profile->fallthrough()->configurable();
  int grid_size = 64;
  cmd_profile->add_option("--grid", grid_size, "assumption-scan grid size");

  auto* cmd_phiexp = app.add_subcommand("phi-expansion", "series expansion of phi(nu)");
  cmd_phiexp->fallthrough()->configurable();
  int order = 2;
  cmd_phiexp->add_option("--order", order, "requested order in (b - nu)");

  auto* cmd_phi = app.add_subcommand("phi", "phi(nu) by singular quadrature vs expansion");
  cmd_phi->fallthrough()->configurable();
  double nu = -1.0, b_minus_nu = -1.0;
  cmd_phi->add_option("--nu", nu, "Clairaut constant");
  cmd_phi->add_option("--b-minus-nu", b_minus_nu, "offset below the equator radius");

  auto* cmd_geo = app.add_subcommand("geodesic", "integrate a Clairaut geodesic");
  cmd_geo->fallthrough()->configurable();
  double eta = 0.3, t_end = 10.0;
  cmd_geo->add_option("--eta", eta, "launch angle from the equator direction");
  cmd_geo->add_option("--t-end", t_end, "integration time");

  auto* cmd_cut = app.add_subcommand("cutlocus", "phi(nu) table: quadrature vs expansion");
  cmd_cut->fallthrough()->configurable();
  double nu_min = 0.1, nu_max = 0.0;
  int nu_count = 25;
  cmd_cut->add_option("--nu-min", nu_min);
  cmd_cut->add_option("--nu-max", nu_max, "default: b - 1e-4");
  cmd_cut->add_option("--nu-count", nu_count);

  auto* cmd_deg = app.add_subcommand("degeneracy", "cubic / segment / hinged fits");
  cmd_deg->fallthrough()->configurable();
  std::string what = "cubic";
  cmd_deg->add_option("--what", what, "cubic | segment | hinged")
      ->check(CLI::IsMember({"cubic", "segment", "hinged"}));
  double eta_min = 1e-3, eta_max = 1e-1;
  cmd_deg->add_option("--eta-min", eta_min);
  cmd_deg->add_option("--eta-max", eta_max);

  auto* cmd_heat = app.add_subcommand("heat", "spectral heat kernel curve and exponent fit");
  cmd_heat->fallthrough()->configurable();
  std::string x_spec = "", y_spec = "";
  cmd_heat->add_option("--x", x_spec, "point r,theta (default: equator, theta 0)");
  cmd_heat->add_option("--y", y_spec, "point r,theta (default: cut-conjugate point)");
  double t_min = 0.1, t_max = 0.4;
  int t_count = 12;
  cmd_heat->add_option("--t-min", t_min);
  cmd_heat->add_option("--t-max", t_max);
  cmd_heat->add_option("--t-count", t_count);
  int n_max = 128, k_max = 128, sg = 2049;
  cmd_heat->add_option("--n-max", n_max);
  cmd_heat->add_option("--k-max", k_max);
  cmd_heat->add_option("--grid", sg);

  auto* cmd_s2 = app.add_subcommand("s2-exact", "both exact S^2 antipodal kernel forms");
  cmd_s2->fallthrough()->configurable();
  double s2_t_min = 0.05, s2_t_max = 2.0;
  int s2_t_count = 25;
  cmd_s2->add_option("--t-min", s2_t_min);
  cmd_s2->add_option("--t-max", s2_t_max);
  cmd_s2->add_option("--t-count", s2_t_count);

  auto* cmd_verify = app.add_subcommand("verify-all", "run the acceptance suite");
  cmd_verify->fallthrough()->configurable();

  CLI11_PARSE(app, argc, argv);

  try {
    std::ofstream csv_file, json_file;

    if (cmd_verify->parsed()) {
      AcceptanceOptions opt;
      opt.max_workers = workers;
      Profile p = Profile::parse(profile_spec);
      if (p.kind() == ProfileKind::Ellipsoid) {
        json pj = p.to_json();
        opt.ellipsoid_b = pj["b"].get<double>();
        opt.ellipsoid_c = pj["c"].get<double>();
      }
      // the documented fit window / gates live in the suite itself
      std::cout << "acceptance suite (profile " << profile_spec
                << "); heat fits use the documented window t in [0.1, 0.4] with an O(t) "
                   "nuisance term (double-precision cancellation floor)\n";
      int failed = run_acceptance(std::cout, opt);
      std::cout << (failed == 0 ? "all criteria passed\n"
                                : std::to_string(failed) + " criterion(s) FAILED\n");
      return failed == 0 ? 0 : 2;
    }

    Profile p = Profile::parse(profile_spec);
    const double b = p.equator_radius();
    const double a = p.pole_distance();

    if (cmd_profile->parsed()) {
      AssumptionReport rep = check_assumptions(p, grid_size);
      json j = {{"profile", p.to_json()},
                {"a", a},
                {"b", b},
                {"alpha", p.alpha()},
                {"beta", p.beta()},
                {"assumptions",
                 {{"a1_ok", rep.a1_ok},
                  {"a1_residual", rep.a1_residual},
                  {"a2_ok", rep.a2_ok},
                  {"a2_violation", rep.a2_violation},
                  {"a3_ok", rep.a3_ok},
                  {"six_b_beta_minus_alpha_sq", rep.six_b_beta_minus_alpha_sq},
                  {"k_at_equator", rep.k_at_equator}}}};
      open_sink(json_file, json_path) << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_phiexp->parsed()) {
      TruncSeries1 series = phi_expansion(p, order);
      json j = {{"constant", series[0]}, {"linear", series.order() >= 1 ? series[1] : 0.0}};
      if (series.order() >= 2) j["quadratic"] = series[2];
      j["order"] = series.order();
      open_sink(json_file, json_path) << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_phi->parsed()) {
      if (b_minus_nu > 0.0) nu = b - b_minus_nu;
      if (!(nu > 0.0 && nu < b)) throw std::runtime_error("phi: need 0 < nu < b");
      TruncSeries1 series = phi_expansion(p, 1);
      double quad = phi_quadrature(p, nu);
      double expansion = series.eval(b - nu);
      json j = {{"nu", nu},
                {"phi_quadrature", quad},
                {"phi_expansion", expansion},
                {"difference", quad - expansion}};
      open_sink(json_file, json_path) << j.dump(2) << "\n";
      return 0;
    }

    if (cmd_geo->parsed()) {
      GeodesicArc arc = integrate_geodesic(p, eta, t_end);
      CsvWriter csv(open_sink(csv_file, out_path));
      csv.header("t,r,theta,rdot,thetadot");
      std::vector<double> xs, ys;
      for (const auto& s : arc.samples) {
        csv.row(s.t, s.r, s.theta, s.rdot, s.thetadot);
        xs.push_back(s.theta);
        ys.push_back(s.r);
      }
      if (!svg_path.empty()) write_svg(svg_path, xs, ys, "geodesic r(theta)");
      return 0;
    }

    if (cmd_cut->parsed()) {
      if (nu_max <= 0.0) nu_max = b - 1e-4;
      TruncSeries1 series = phi_expansion(p, 1);
      CsvWriter csv(open_sink(csv_file, out_path));
      csv.header("nu,phi_quadrature,phi_expansion,difference");
      std::vector<double> xs, ys;
      for (double v : make_grid(nu_min, nu_max, nu_count, false)) {
        double quad = phi_quadrature(p, v);
        double expansion = series.eval(b - v);
        csv.row(v, quad, expansion, quad - expansion);
        xs.push_back(v);
        ys.push_back(quad);
      }
      if (!svg_path.empty()) write_svg(svg_path, xs, ys, "phi(nu)");
      return 0;
    }

    if (cmd_deg->parsed()) {
      json j;
      std::vector<std::pair<double, double>> samples;
      if (what == "cubic") {
        PowerLawFit fit = fit_cubic_degeneracy(p, {eta_min, eta_max});
        j = {{"what", "cubic"},
             {"fit", fit_to_json(fit)},
             {"law_constant", cubic_law_constant(p)}};
        double theta_cut = phi_expansion(p, 0)[0];
        for (double e : log_spaced(eta_min, eta_max, 8))
          samples.emplace_back(e, a - r_at_meridian(p, e, theta_cut));
      } else if (what == "segment") {
        double theta_cut = phi_expansion(p, 0)[0];
        std::vector<double> es = log_spaced(std::max(eta_min, 0.02), eta_max, 8), ds;
        for (double e : es) {
          GeodesicArc probe = integrate_geodesic(p, e, 3.0 * b * theta_cut);
          GeodesicArc segment = integrate_geodesic(p, e, first_equator_crossing(probe).t);
          double dist = distance_to_segment(p, Point{a, theta_cut}, segment, 32);
          ds.push_back(dist);
          samples.emplace_back(e, dist);
        }
        PowerLawFit fit = fit_power_law(es, ds);
        j = {{"what", "segment"},
             {"fit", fit_to_json(fit)},
             {"law_constant", cubic_law_constant(p)}};
      } else {  // hinged
        double theta_cut = phi_expansion(p, 0)[0];
        Point x{a, 0.0}, y{a, theta_cut};
        HingedFitResult along = hinged_quartic_order(p, x, y, ProbeDirection::AlongGeodesic);
        HingedFitResult trans = hinged_quartic_order(p, x, y, ProbeDirection::Transverse);
        j = {{"what", "hinged"},
             {"h_at_midpoint", along.h_at_midpoint},
             {"along", fit_to_json(along.fit)},
             {"transverse", fit_to_json(trans.fit)},
             {"transverse_flat_variation", trans.max_abs_variation}};
        samples = trans.samples;
      }
      open_sink(json_file, json_path) << j.dump(2) << "\n";
      if (!out_path.empty()) {
        CsvWriter csv(open_sink(csv_file, out_path));
        csv.header("x,value");
        for (auto [sx, sy] : samples) csv.row(sx, sy);
      }
      if (!svg_path.empty() && !samples.empty()) {
        std::vector<double> xs, ys;
        for (auto [sx, sy] : samples) {
          xs.push_back(std::log10(sx));
          ys.push_back(std::log10(std::max(sy, 1e-300)));
        }
        write_svg(svg_path, xs, ys, "degeneracy " + what + " (log-log)");
      }
      return 0;
    }

    if (cmd_heat->parsed()) {
      double theta_cut = phi_expansion(p, 0)[0];
      Point x = x_spec.empty() ? Point{a, 0.0} : parse_point(x_spec);
      Point y = y_spec.empty() ? Point{a, theta_cut} : parse_point(y_spec);
      SpectralBasis basis = assemble_spectrum(p, n_max, k_max, sg, workers);
      KernelCurve curve = sample_kernel_curve(basis, x, y, make_grid(t_min, t_max, t_count, true));
      CsvWriter csv(open_sink(csv_file, out_path));
      csv.header("t,p,truncation_bound,cancellation_digits");
      std::vector<double> xs, ys;
      for (const auto& s : curve.samples) {
        csv.row(s.t, s.p, s.truncation_bound, s.cancellation_digits);
        xs.push_back(std::log10(s.t));
        if (s.p > 0) ys.push_back(std::log10(s.p));
      }
      FitOptions fopt;
      fopt.seed = seed;
      json j = {{"d_xy", curve.d_xy},
                {"note",
                 "fit window and O(t) nuisance reflect the double-precision cancellation "
                 "floor (~d^2/(4t ln 10) digits lost at small t)"}};
      try {
        PowerLawFit fit = fit_exponent(curve, fopt);
        j["fit"] = fit_to_json(fit);
        json varadhan = json::array();
        for (auto [tv, vv] : varadhan_check(curve, fopt)) varadhan.push_back({tv, vv});
        j["varadhan"] = varadhan;
      } catch (const std::exception& e) {
        j["fit_error"] = e.what();
      }
      open_sink(json_file, json_path) << j.dump(2) << "\n";
      if (!svg_path.empty() && ys.size() == xs.size())
        write_svg(svg_path, xs, ys, "log10 p_t vs log10 t");
      return 0;
    }

    if (cmd_s2->parsed()) {
      CsvWriter csv(open_sink(csv_file, out_path));
      csv.header("t,poisson,theta,rel_difference,poisson_cancellation_digits,poisson_reliable");
      for (double t : make_grid(s2_t_min, s2_t_max, s2_t_count, true)) {
        ExactKernelValue pv = s2_exact_poisson_detailed(t);
        double th = s2_exact_theta(t);
        csv.row(t, pv.p, th, pv.p / th - 1.0, pv.cancellation_digits,
                pv.reliable ? 1.0 : 0.0);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    json err = {{"error", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
