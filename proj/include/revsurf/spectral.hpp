#pragma once

#include <cstdint>
#include <vector>

#include "revsurf/geodesics.hpp"
#include "revsurf/powerlaw.hpp"
#include "revsurf/profile.hpp"

namespace revsurf {

// One Fourier mode n of the Laplace-Beltrami operator: eigenpairs of
// L_n f = (1/m)(m f')' - (n^2/m^2) f on (0, 2a), m-weighted orthonormal.
struct SpectralMode {
  int n = 0;
  std::vector<double> eigenvalues;               // ascending, size k_max
  std::vector<std::vector<double>> eigenvectors; // [k][cell]
};

struct SpectralBasis {
  explicit SpectralBasis(Profile p) : profile(std::move(p)) {}
  Profile profile;
  int grid_size = 0;
  double h = 0.0;
  std::vector<double> r_grid;  // cell centers
  std::vector<double> m_grid;  // m at cell centers
  std::vector<SpectralMode> modes;
  double area = 0.0;           // 2 pi sum m h
  double lambda_tail = 0.0;    // smallest eigenvalue of the omitted spectrum
  double sup_band = 1.0;       // sup |f| over the top computed band

  int nearest_cell(double r) const;
};

// Assemble per-mode symmetric tridiagonal eigenproblems (flux form on a
// cell-centered grid; the pole faces carry m = 0, so the no-flux closure is
// automatic for n = 0 and the n^2/m^2 potential enforces decay for n >= 1).
// max_workers <= 0 means hardware concurrency, capped by REVSURF_MAX_WORKERS.
SpectralBasis assemble_spectrum(const Profile& p, int n_max, int k_max, int grid_size,
                                int max_workers = 0);

struct KernelValue {
  double p = 0.0;
  double truncation_bound = 0.0;
  double cancellation_digits = 0.0;
};

// p_t(x, y) by the spectral sum with compensated summation; points snap to
// the nearest grid cell in r (equator points are exact on odd grids).
KernelValue heat_kernel(const SpectralBasis& basis, Point x, Point y, double t);

// Integral of p_t(x, .) over the surface (discrete quadrature; equals 1 up to
// eigenvector orthogonality error).
double heat_kernel_mass(const SpectralBasis& basis, Point x, double t);

// Exact S^2 antipodal kernel, spectral (Poisson-summed) form:
// p = (1/4pi) sum_{n>=0} (-1)^n (2n+1) e^{-n(n+1)t}, summed in float128.
struct ExactKernelValue {
  double p = 0.0;
  double cancellation_digits = 0.0;
  bool reliable = true;
};
ExactKernelValue s2_exact_poisson_detailed(double t);
double s2_exact_poisson(double t);

// Exact S^2 antipodal kernel, theta form (no cancellation, valid to t -> 0):
// p = e^{t/4}/(4 t^{3/2} sqrt(pi)) * sum_{k>=0} (-1)^k (2k+1) pi e^{-(2k+1)^2 pi^2/4t}.
double s2_exact_theta(double t);

struct KernelSample {
  double t = 0.0;
  double p = 0.0;
  double truncation_bound = 0.0;
  double cancellation_digits = 0.0;
};

struct KernelCurve {
  Point x, y;
  double d_xy = 0.0;
  std::vector<KernelSample> samples;
};

KernelCurve sample_kernel_curve(const SpectralBasis& basis, Point x, Point y,
                                const std::vector<double>& ts);
// Curve from a closed-form kernel (the exact S^2 series), d_xy supplied.
KernelCurve curve_from_function(double (*kernel)(double), const std::vector<double>& ts,
                                double d_xy);

struct FitOptions {
  double max_cancellation_digits = 10.0;
  double max_truncation_fraction = 1e-3;
  int bootstrap_rounds = 200;
  std::uint64_t seed = 20260809;
};

// Regress log p + d^2/(4t) on [1, -log t, t]; exponent = coefficient of
// -log t, with a bootstrap spread over resampled points.
PowerLawFit fit_exponent(const KernelCurve& curve, const FitOptions& opt = {});

// The Varadhan sequence (t, -4 t log p_t) over the reliable samples.
std::vector<std::pair<double, double>> varadhan_check(const KernelCurve& curve,
                                                      const FitOptions& opt = {});

}  // namespace revsurf
