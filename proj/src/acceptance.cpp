#include "revsurf/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "revsurf/degeneracy.hpp"
#include "revsurf/geodesics.hpp"
#include "revsurf/powerlaw.hpp"
#include "revsurf/profile.hpp"
#include "revsurf/series.hpp"
#include "revsurf/spectral.hpp"

namespace revsurf {

namespace {

constexpr double kPi = std::numbers::pi;

class Reporter {
public:
  explicit Reporter(std::ostream& out) : out_(out) {}

  // Runs one criterion; the body returns (ok, detail line).
  void run(const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      auto res = body();
      ok = res.first;
      detail = res.second;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", secs);
    out_ << (ok ? "[PASS] " : "[FAIL] ") << name << "  --  " << detail << "  (" << buf << " s)\n";
    out_.flush();
    if (!ok) ++failures_;
  }

  int failures() const { return failures_; }

private:
  std::ostream& out_;
  int failures_ = 0;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  return g;
}

}  // namespace

int run_acceptance(std::ostream& out, const AcceptanceOptions& opt) {
  Reporter rep(out);
  const Profile ell = Profile::ellipsoid(opt.ellipsoid_b, opt.ellipsoid_c);
  const Profile sph = Profile::sphere(1.0);
  const double b = ell.equator_radius();

  // 1. phi-expansion coefficients vs singular quadrature (quadratic remainder)
  rep.run("1. cut-angle expansion coefficients vs quadrature (ellipsoid)", [&] {
    TruncSeries1 series = phi_expansion(ell, 1);
    double c0 = series[0], c1 = series[1];
    double want0 = kPi / std::sqrt(2.0 * ell.alpha() * b);
    double want1 = (6.0 * b * ell.beta() - ell.alpha() * ell.alpha()) * kPi /
                   (8.0 * std::sqrt(2.0) * std::pow(b, 1.5) * std::pow(ell.alpha(), 2.5));
    bool coeffs_ok = std::abs(c0 - want0) <= 1e-12 && std::abs(c1 - want1) <= 1e-12;
    double d1 = phi_quadrature(ell, b - 1e-2) - (c0 + c1 * 1e-2);
    double d2 = phi_quadrature(ell, b - 1e-3) - (c0 + c1 * 1e-3);
    double ratio = d1 / d2;
    bool ratio_ok = ratio >= 100.0 / 1.5 && ratio <= 100.0 * 1.5;
    return std::make_pair(coeffs_ok && ratio_ok,
                          fmt("constant=%.12g linear=%.12g remainder ratio=%.1f", c0, c1, ratio));
  });

  // 2. sphere degeneracy of the expansion
  rep.run("2. sphere: expansion degenerates and is flagged singular", [&] {
    TruncSeries1 series = phi_expansion(sph, 1);
    AssumptionReport report = check_assumptions(sph);
    bool ok = std::abs(series[0] - kPi) <= 1e-12 && std::abs(series[1]) <= 1e-12 &&
              !report.a3_ok && sph.is_singular();
    return std::make_pair(
        ok, fmt("constant=%.12g linear=%.3g 6b*beta-alpha^2=%.3g (singular=%s)", series[0],
                series[1], report.six_b_beta_minus_alpha_sq, sph.is_singular() ? "yes" : "no"));
  });

  // 3. Jacobi conjugate time equals cut time on the equator
  const bool flagship = opt.ellipsoid_b == 2.0 && opt.ellipsoid_c == 1.0;
  rep.run("3. t_conj = t_cut (Jacobi ODE vs expansion constant)", [&] {
    CutStructure cs = cut_structure(ell);
    bool ok = std::abs(cs.t_conj - cs.t_cut) <= 1e-6;
    if (flagship) ok = ok && std::abs(cs.t_cut - kPi) <= 1e-12;
    return std::make_pair(ok, fmt("t_cut=%.12g t_conj=%.12g |diff|=%.2e", cs.t_cut, cs.t_conj,
                                  std::abs(cs.t_conj - cs.t_cut)));
  });

  // 4. cubic variation law on a family of oblate ellipsoids
  rep.run("4. cubic variation law across an oblate family", [&] {
    bool all_ok = true;
    std::string detail;
    for (auto [eb, ec] : {std::pair{2.0, 1.0}, {1.5, 1.0}, {1.2, 1.0}}) {
      Profile p = Profile::ellipsoid(eb, ec);
      PowerLawFit fit = fit_cubic_degeneracy(p, {1e-3, 1e-1});
      double want = cubic_law_constant(p);
      bool ok = std::abs(fit.exponent - 3.0) <= 0.05 &&
                std::abs(fit.constant / want - 1.0) <= 0.03;
      all_ok = all_ok && ok;
      detail += fmt("(%g,%g): p=%.3f C=%.4g/%.4g  ", eb, ec, fit.exponent, fit.constant, want);
    }
    return std::make_pair(all_ok, detail);
  });

  // 5. hinged-energy normal form
  rep.run("5. hinged energy: s^2 along, s^4 transverse, flat on sphere", [&] {
    double theta_cut = kPi / std::sqrt(2.0 * ell.alpha() * b);
    Point x{ell.pole_distance(), 0.0}, y{ell.pole_distance(), theta_cut};
    HingedFitResult along = hinged_quartic_order(ell, x, y, ProbeDirection::AlongGeodesic);
    HingedFitResult trans = hinged_quartic_order(ell, x, y, ProbeDirection::Transverse);
    double d = b * theta_cut;
    bool along_ok = std::abs(along.fit.exponent - 2.0) <= 0.02 &&
                    std::abs(along.fit.constant / (0.25 * d * d) - 1.0) <= 0.01;
    bool trans_ok = std::abs(trans.fit.exponent - 4.0) <= 0.1;
    Point xs{sph.pole_distance(), 0.0}, ys{sph.pole_distance(), kPi};
    HingedFitResult flat = hinged_quartic_order(sph, xs, ys, ProbeDirection::Transverse);
    bool flat_ok = flat.max_abs_variation <= 1e-10;
    return std::make_pair(along_ok && trans_ok && flat_ok,
                          fmt("along p=%.4f C=%.6g; transverse p=%.3f; sphere flat=%.1e",
                              along.fit.exponent, along.fit.constant, trans.fit.exponent,
                              flat.max_abs_variation));
  });

  // 6. Appendix A bit-check: Poisson vs theta forms + sphere exponent 3/2
  rep.run("6. S^2 exact kernel: Poisson/theta agreement and 3/2 exponent", [&] {
    double worst = 0.0;
    for (double t : log_grid(0.05, 2.0, 25)) {
      double a = s2_exact_poisson(t), c = s2_exact_theta(t);
      worst = std::max(worst, std::abs(a / c - 1.0));
    }
    KernelCurve curve = curve_from_function(&s2_exact_theta, log_grid(0.01, 0.2, 14), kPi);
    PowerLawFit fit = fit_exponent(curve);
    bool ok = worst <= 1e-12 && std::abs(fit.exponent - 1.5) <= 0.01;
    return std::make_pair(
        ok, fmt("max form mismatch=%.2e alpha=%.4f+-%.4f", worst, fit.exponent, fit.spread));
  });

  // 7. spectral solver validated against the sphere
  rep.run("7. sphere spectrum l(l+1), kernel mass, exact-series match", [&] {
    SpectralBasis coarse = assemble_spectrum(sph, 20, 25, 1536, opt.max_workers);
    SpectralBasis fine = assemble_spectrum(sph, 20, 25, 3072, opt.max_workers);
    double worst_rel = 0.0;
    for (int l = 1; l <= 20; ++l) {
      for (int n = 0; n <= l; ++n) {
        int k = l - n;  // k-th eigenvalue (0-based) of mode n is l(l+1), l = n + k
        double lr = (4.0 * fine.modes[n].eigenvalues[k] - coarse.modes[n].eigenvalues[k]) / 3.0;
        worst_rel = std::max(worst_rel, std::abs(lr / (double(l) * (l + 1)) - 1.0));
      }
    }
    double l0 = std::abs((4.0 * fine.modes[0].eigenvalues[0] -
                          coarse.modes[0].eigenvalues[0]) / 3.0);
    SpectralBasis basis = assemble_spectrum(sph, 64, 64, 2049, opt.max_workers);
    Point x{sph.pole_distance(), 0.0};
    double mass = heat_kernel_mass(basis, x, 0.5);
    Point xa{sph.pole_distance(), 0.0}, ya{sph.pole_distance(), kPi};
    double p_spec = heat_kernel(basis, xa, ya, 0.5).p;
    double p_exact = s2_exact_poisson(0.5);
    bool ok = worst_rel <= 1e-6 && l0 <= 1e-8 && std::abs(mass - 1.0) <= 1e-6 &&
              std::abs(p_spec - p_exact) <= 1e-4;
    return std::make_pair(ok, fmt("worst l(l+1) rel err=%.2e mass-1=%.2e |p_spec-p_exact|=%.2e",
                                  worst_rel, mass - 1.0, std::abs(p_spec - p_exact)));
  });

  // 8. windowed heat-exponent fits on the ellipsoid
  std::optional<SpectralBasis> ell_basis;  // shared with criterion 9
  rep.run("8. heat exponents: 5/4 at the cut-conjugate point, 1 off the cut", [&] {
    ell_basis.emplace(assemble_spectrum(ell, 128, 128, 2049, opt.max_workers));
    std::vector<double> ts = log_grid(0.1, 0.4, 12);
    const double a = ell.pole_distance();
    std::vector<double> thetas = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, kPi / 2};
    std::vector<double> alphas;
    for (double th : thetas) {
      KernelCurve curve = sample_kernel_curve(*ell_basis, {a, 0.0}, {a, th}, ts);
      alphas.push_back(fit_exponent(curve).exponent);
    }
    double a_cut = alphas.back(), a_off = alphas.front();
    bool mono = true;
    for (size_t i = 0; i + 1 < alphas.size(); ++i)
      mono = mono && alphas[i + 1] >= alphas[i] - 1e-3;
    bool ok = std::abs(a_cut - 1.25) <= 0.08 && std::abs(a_off - 1.0) <= 0.08 && mono;
    std::string detail = fmt("alpha(cut)=%.3f alpha(1.0)=%.3f monotone=%s [", a_cut, a_off,
                             mono ? "yes" : "no");
    for (double al : alphas) detail += fmt("%.3f ", al);
    detail += "]";
    return std::make_pair(ok, detail);
  });

  // 9. Varadhan limit at the smallest reliable t
  rep.run("9. Varadhan: -4t log p within 5% of d^2 (3 pairs per profile)", [&] {
    if (!ell_basis) ell_basis.emplace(assemble_spectrum(ell, 128, 128, 2049, opt.max_workers));
    std::vector<double> ts = log_grid(0.01, 0.45, 30);
    const double a = ell.pole_distance();
    bool all_ok = true;
    std::string detail;
    for (double th : {1.0, 1.3, kPi / 2}) {
      KernelCurve curve = sample_kernel_curve(*ell_basis, {a, 0.0}, {a, th}, ts);
      auto seq = varadhan_check(curve);
      if (seq.empty()) {
        all_ok = false;
        detail += fmt("ell θ=%.2f: no reliable samples  ", th);
        continue;
      }
      double d2 = curve.d_xy * curve.d_xy;
      double dev = (seq.front().second - d2) / d2;
      all_ok = all_ok && std::abs(dev) <= 0.05;
      detail += fmt("e(%.2f):%+.1f%% ", th, dev * 100);
    }
    SpectralBasis sp = assemble_spectrum(sph, 64, 64, 2049, opt.max_workers);
    const double as = sph.pole_distance();
    for (double th : {2.0, 2.5}) {
      KernelCurve curve = sample_kernel_curve(sp, {as, 0.0}, {as, th}, ts);
      auto seq = varadhan_check(curve);
      if (seq.empty()) {
        all_ok = false;
        detail += fmt("sph θ=%.2f: no reliable samples  ", th);
        continue;
      }
      double d2 = curve.d_xy * curve.d_xy;
      double dev = (seq.front().second - d2) / d2;
      all_ok = all_ok && std::abs(dev) <= 0.05;
      detail += fmt("s(%.1f):%+.1f%% ", th, dev * 100);
    }
    // antipodal sphere pair via the exact theta form at t = 0.01
    double p = s2_exact_theta(0.01);
    double dev = (-4.0 * 0.01 * std::log(p) - kPi * kPi) / (kPi * kPi);
    all_ok = all_ok && std::abs(dev) <= 0.05;
    detail += fmt("s(antipodal,exact):%+.1f%%", dev * 100);
    return std::make_pair(all_ok, detail);
  });

  return rep.failures();
}

}  // namespace revsurf
