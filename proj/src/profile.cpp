#include "revsurf/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "revsurf/numerics.hpp"

namespace revsurf {

struct Profile::Impl {
  ProfileKind kind;
  double a = 0.0;
  double b = 0.0;
  std::vector<double> psi;  // psi(s) = psi[0] + psi[1] s + ...

  // sphere
  double radius = 0.0;

  // ellipsoid
  double c = 0.0;
  double axis_ratio_term = 0.0;  // (b^2 - c^2)/b^2
  int table_resolution = 0;
  std::vector<double> table_z;  // Z_j, Z = sqrt(b - nu)
  std::vector<double> table_u;  // arc length from the equator at Z_j

  // analytic
  std::function<double(double)> m_callable;

  virtual ~Impl() = default;
};

namespace {

constexpr double kPi = std::numbers::pi;

// d(arc)/dZ along the ellipsoid meridian, Z = sqrt(b - nu):
// u'(Z) = 2 sqrt(A Z^2 + c^2/(2b - Z^2)),  A = (b^2-c^2)/b^2.
double ellipsoid_du_dz(const Profile::Impl& e, double z) {
  return 2.0 * std::sqrt(e.axis_ratio_term * z * z + e.c * e.c / (2.0 * e.b - z * z));
}

double ellipsoid_u_segment(const Profile::Impl& e, double z0, double z1) {
  const GaussRule& rule = gauss_legendre(16);
  const double mid = 0.5 * (z0 + z1), rad = 0.5 * (z1 - z0);
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * ellipsoid_du_dz(e, mid + rad * rule.nodes[i]);
  return rad * acc;
}

// Arc length from the equator for a given Z, using the precomputed table
// plus a short Gauss-Legendre correction from the nearest node below.
double ellipsoid_u_of_z(const Profile::Impl& e, double z) {
  const double zmax = e.table_z.back();
  z = std::clamp(z, 0.0, zmax);
  double step = zmax / (e.table_z.size() - 1);
  size_t j = std::min(static_cast<size_t>(z / step), e.table_z.size() - 1);
  return e.table_u[j] + ellipsoid_u_segment(e, e.table_z[j], z);
}

// Invert u(Z) = target by safeguarded Newton on the tabulated arc length.
double ellipsoid_z_of_u(const Profile::Impl& e, double target) {
  const double zmax = e.table_z.back();
  if (target <= 0.0) return 0.0;
  if (target >= e.a) return zmax;
  // bracketing segment from the monotone table
  size_t lo = 0, hi = e.table_u.size() - 1;
  while (hi - lo > 1) {
    size_t mid = (lo + hi) / 2;
    (e.table_u[mid] <= target ? lo : hi) = mid;
  }
  double zlo = e.table_z[lo], zhi = e.table_z[hi];
  double z = zlo + (zhi - zlo) * (target - e.table_u[lo]) /
                       std::max(e.table_u[hi] - e.table_u[lo], 1e-300);
  for (int it = 0; it < 60; ++it) {
    double f = ellipsoid_u_of_z(e, z) - target;
    if (f > 0.0)
      zhi = z;
    else
      zlo = z;
    double dz = f / ellipsoid_du_dz(e, z);
    double z_next = z - dz;
    if (!(z_next > zlo && z_next < zhi)) z_next = 0.5 * (zlo + zhi);
    if (std::abs(z_next - z) < 1e-16 * zmax + 1e-300) return z_next;
    z = z_next;
  }
  return z;
}

double fold_to_north(double r, double a) { return std::min(r, 2.0 * a - r); }

void check_range(double r, double a, const char* who) {
  if (!(r > 0.0 && r < 2.0 * a))
    throw std::invalid_argument(std::string(who) + ": r outside (0, 2a)");
}

// alpha, beta from m by symmetric differences with two Richardson levels
// (the psi s^3, s^4 terms are removed; noise stays ~ eps/h^4).
std::pair<double, double> extract_equator_taylor(const std::function<double(double)>& m,
                                                 double a, double b) {
  auto E = [&](double h) { return (b - 0.5 * (m(a + h) + m(a - h))) / (h * h); };  // alpha - beta h^2 + ...
  double h = 0.005 * a;
  double e1 = E(h), e2 = E(2 * h), e4 = E(4 * h), e8 = E(8 * h);
  auto beta1 = [&](double hh, double ea, double eb) { return (ea - eb) / (3 * hh * hh); };
  double br_h = (4.0 * beta1(h, e1, e2) - beta1(2 * h, e2, e4)) / 3.0;
  double br_2h = (4.0 * beta1(2 * h, e2, e4) - beta1(4 * h, e4, e8)) / 3.0;
  double beta = (16.0 * br_h - br_2h) / 15.0;
  double a1_h = (4.0 * e1 - e2) / 3.0;
  double a1_2h = (4.0 * e2 - e4) / 3.0;
  double a1_4h = (4.0 * e4 - e8) / 3.0;
  double ar_h = (16.0 * a1_h - a1_2h) / 15.0;
  double ar_2h = (16.0 * a1_2h - a1_4h) / 15.0;
  double alpha = (64.0 * ar_h - ar_2h) / 63.0;
  return {alpha, beta};
}

}  // namespace

Profile Profile::ellipsoid(double b, double c, int table_resolution) {
  if (!(c > 0.0) || !(b > 0.0)) throw std::invalid_argument("ellipsoid: axes must be positive");
  if (b < c) throw std::invalid_argument("ellipsoid: prolate case (b < c) is not supported");
  if (table_resolution < 16) throw std::invalid_argument("ellipsoid: table too coarse");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Ellipsoid;
  impl->b = b;
  impl->c = c;
  impl->axis_ratio_term = (b * b - c * c) / (b * b);
  impl->table_resolution = table_resolution;
  const double zmax = std::sqrt(b);
  impl->table_z.resize(table_resolution + 1);
  impl->table_u.resize(table_resolution + 1);
  impl->table_z[0] = 0.0;
  impl->table_u[0] = 0.0;
  for (int j = 1; j <= table_resolution; ++j) {
    impl->table_z[j] = zmax * j / table_resolution;
    impl->table_u[j] =
        impl->table_u[j - 1] + ellipsoid_u_segment(*impl, impl->table_z[j - 1], impl->table_z[j]);
  }
  impl->a = impl->table_u.back();
  impl->psi = {b, -b / (2 * c * c), b * (4 * b * b - 3 * c * c) / (24 * std::pow(c, 6))};
  return Profile(std::move(impl));
}

Profile Profile::sphere(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("sphere: radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Sphere;
  impl->radius = radius;
  impl->a = kPi * radius / 2.0;
  impl->b = radius;
  // psi(s) = radius * cos(sqrt(s)/radius)
  impl->psi.resize(7);
  double fact = 1.0;
  for (int k = 0; k < 7; ++k) {
    if (k > 0) fact *= (2 * k - 1) * (2 * k);
    impl->psi[k] = radius * ((k % 2) ? -1.0 : 1.0) / (fact * std::pow(radius, 2 * k));
  }
  return Profile(std::move(impl));
}

Profile Profile::analytic(std::function<double(double)> m, double a,
                          std::vector<double> psi_coeffs) {
  if (!(a > 0.0)) throw std::invalid_argument("analytic: a must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Analytic;
  impl->m_callable = std::move(m);
  impl->a = a;
  impl->b = impl->m_callable(a);
  if (!(impl->b > 0.0)) throw std::invalid_argument("analytic: m(a) must be positive");
  if (!psi_coeffs.empty()) {
    if (psi_coeffs.size() < 3)
      throw std::invalid_argument("analytic: psi_coeffs needs at least 3 terms");
    impl->psi = std::move(psi_coeffs);
  } else {
    auto [al, be] = extract_equator_taylor(impl->m_callable, a, impl->b);
    impl->psi = {impl->b, -al, be};
  }
  return Profile(std::move(impl));
}

ProfileKind Profile::kind() const { return impl_->kind; }
double Profile::pole_distance() const { return impl_->a; }
double Profile::equator_radius() const { return impl_->b; }
double Profile::alpha() const { return -impl_->psi[1]; }
double Profile::beta() const { return impl_->psi[2]; }
const std::vector<double>& Profile::psi_coeffs() const { return impl_->psi; }

double Profile::m(double r) const {
  const Impl& im = *impl_;
  check_range(r, im.a, "m");
  switch (im.kind) {
    case ProfileKind::Sphere:
      return im.radius * std::sin(r / im.radius);
    case ProfileKind::Ellipsoid: {
      double u = im.a - fold_to_north(r, im.a);
      double z = ellipsoid_z_of_u(im, u);
      return im.b - z * z;
    }
    case ProfileKind::Analytic:
      return im.m_callable(r);
  }
  return 0.0;
}

double Profile::m_prime(double r) const {
  const Impl& im = *impl_;
  check_range(r, im.a, "m_prime");
  switch (im.kind) {
    case ProfileKind::Sphere:
      return std::cos(r / im.radius);
    case ProfileKind::Ellipsoid: {
      // dm/dr = sqrt(S / (S + c^2 t^2 / b^2)), S = b^2 - t^2, t = m(r)
      double t = m(r);
      double S = im.b * im.b - t * t;
      if (S <= 0.0) return 0.0;
      double v = std::sqrt(S / (S + im.c * im.c * t * t / (im.b * im.b)));
      return r <= im.a ? v : -v;
    }
    case ProfileKind::Analytic: {
      double h = std::pow(2.2e-16, 1.0 / 5.0) * im.a;
      h = std::min(h, 0.45 * std::min(r, 2 * im.a - r));
      const auto& f = im.m_callable;
      return (8.0 * (f(r + h) - f(r - h)) - (f(r + 2 * h) - f(r - 2 * h))) / (12.0 * h);
    }
  }
  return 0.0;
}

double Profile::curvature(double r) const {
  const Impl& im = *impl_;
  check_range(r, im.a, "curvature");
  if (im.kind == ProfileKind::Sphere) return 1.0 / (im.radius * im.radius);
  double h = std::pow(2.2e-16, 1.0 / 5.0) * im.a;
  h = std::min(h, 0.45 * std::min(r, 2 * im.a - r));
  double m0 = m(r);
  double second = (-m(r - 2 * h) + 16.0 * m(r - h) - 30.0 * m0 + 16.0 * m(r + h) - m(r + 2 * h)) /
                  (12.0 * h * h);
  return -second / m0;
}

bool Profile::is_singular(double rel_tol) const {
  double al = alpha();
  double disc = 6.0 * equator_radius() * beta() - al * al;
  return std::abs(disc) <= rel_tol * al * al;
}

nlohmann::json Profile::to_json() const {
  const Impl& im = *impl_;
  switch (im.kind) {
    case ProfileKind::Sphere:
      return {{"kind", "sphere"}, {"radius", im.radius}};
    case ProfileKind::Ellipsoid:
      return {{"kind", "ellipsoid"},
              {"b", im.b},
              {"c", im.c},
              {"table_resolution", im.table_resolution}};
    case ProfileKind::Analytic:
      throw std::invalid_argument("to_json: analytic profiles are not serializable");
  }
  return {};
}

Profile Profile::from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "sphere") return sphere(j.at("radius").get<double>());
  if (kind == "ellipsoid")
    return ellipsoid(j.at("b").get<double>(), j.at("c").get<double>(),
                     j.value("table_resolution", 512));
  throw std::invalid_argument("from_json: unknown profile kind '" + kind + "'");
}

Profile Profile::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "sphere") return sphere(args.empty() ? 1.0 : std::stod(args));
  if (kind == "ellipsoid") {
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("parse: expected ellipsoid:B,C");
    return ellipsoid(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
  }
  throw std::invalid_argument("parse: unknown profile '" + text + "'");
}

AssumptionReport check_assumptions(const Profile& p, int grid_size) {
  if (grid_size < 16) throw std::invalid_argument("check_assumptions: grid_size >= 16");
  AssumptionReport rep;
  const double a = p.pole_distance();
  const double b = p.equator_radius();
  const double al = p.alpha();

  // (A1): reflective symmetry of m about the equator on |s| <= a/4
  double res = 0.0;
  for (int i = 1; i <= grid_size; ++i) {
    double s = (a / 4.0) * i / grid_size;
    res = std::max(res, std::abs(p.m(a + s) - p.m(a - s)));
  }
  rep.a1_residual = res;
  rep.a1_ok = res <= 1e-9 * b;

  // (A2): K non-decreasing from pole to equator (sampled on (0, a])
  double worst = 0.0;
  double prev = p.curvature(a * 0.02);
  for (int i = 1; i <= grid_size; ++i) {
    double r = a * (0.02 + 0.98 * i / grid_size);
    double k = p.curvature(r);
    worst = std::max(worst, prev - k);
    prev = k;
  }
  rep.a2_violation = worst;
  rep.a2_ok = worst <= 1e-6 * std::abs(p.curvature(a));

  // (A3): 6 b beta != alpha^2
  rep.six_b_beta_minus_alpha_sq = 6.0 * b * p.beta() - al * al;
  rep.a3_ok = !p.is_singular();
  rep.k_at_equator = 2.0 * al / b;
  return rep;
}

}  // namespace revsurf
