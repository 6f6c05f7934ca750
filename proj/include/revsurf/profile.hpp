#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace revsurf {

enum class ProfileKind { Sphere, Ellipsoid, Analytic };

// A profile is flagged singular when 6*b*beta = alpha^2 (K''(a) = 0);
// operations whose expected law degenerates refuse to run on it.
class singular_profile_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Immutable surface of revolution dr^2 + m(r)^2 dtheta^2 on (0, 2a).
// Copies share the underlying representation (including the ellipsoid
// inversion table), so concurrent reads are safe.
class Profile {
public:
  // Oblate ellipsoid with semi-axes (b, b, c), b >= c > 0.
  static Profile ellipsoid(double b, double c, int table_resolution = 512);
  static Profile sphere(double radius);
  // Generic profile from m on (0, 2a). Supply psi Taylor coefficients
  // (psi(s) = m(a - sqrt(s)) near the equator) if known; otherwise alpha and
  // beta are extracted from m by Richardson finite differences.
  static Profile analytic(std::function<double(double)> m, double a,
                          std::vector<double> psi_coeffs = {});

  ProfileKind kind() const;
  double pole_distance() const;   // a
  double equator_radius() const;  // b = m(a)
  double alpha() const;
  double beta() const;
  // psi(s) = b + p1 s + p2 s^2 + ... (p1 = -alpha, p2 = beta)
  const std::vector<double>& psi_coeffs() const;

  double m(double r) const;
  double m_prime(double r) const;
  // K(r) = -m''(r)/m(r); closed form for the sphere, 5-point central
  // differences on m otherwise.
  double curvature(double r) const;

  bool is_singular(double rel_tol = 1e-8) const;

  nlohmann::json to_json() const;
  static Profile from_json(const nlohmann::json& j);
  // "sphere:R" | "ellipsoid:B,C" (CLI shorthand)
  static Profile parse(const std::string& text);

  struct Impl;
  const Impl& impl() const { return *impl_; }

private:
  explicit Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct AssumptionReport {
  bool a1_ok = false;
  bool a2_ok = false;
  bool a3_ok = false;
  double a1_residual = 0.0;                // max |m(a+s) - m(a-s)| on |s| <= a/4
  double a2_violation = 0.0;               // max observed decrease of K along (0, a]
  double six_b_beta_minus_alpha_sq = 0.0;  // A3 discriminant
  double k_at_equator = 0.0;               // 2*alpha/b
};

AssumptionReport check_assumptions(const Profile& p, int grid_size = 64);

}  // namespace revsurf
