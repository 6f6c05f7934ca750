#include "revsurf/spectral.hpp"

#include <lapacke.h>
#include <quadmath.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "revsurf/numerics.hpp"

namespace revsurf {

namespace {

constexpr double kPi = std::numbers::pi;

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("REVSURF_MAX_WORKERS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

// One inverse-iteration + Rayleigh-quotient step in long double. Deep kernel
// cancellation (~ d^2/(4t ln 10) digits) amplifies eigenvector error, so the
// double-precision solver output is polished to ~1e-17 before use.
void refine_eigenpair(const std::vector<long double>& dl, const std::vector<long double>& el,
                      long double& lam, std::vector<long double>& v) {
  const size_t N = dl.size();
  static thread_local std::vector<long double> cprime, dprime, x, tx;
  cprime.assign(N, 0.0L);
  dprime.assign(N, 0.0L);
  x.assign(N, 0.0L);
  tx.assign(N, 0.0L);
  for (int pass = 0; pass < 2; ++pass) {
    // Thomas solve (T - lam I) x = v
    long double beta = dl[0] - lam;
    if (beta == 0.0L) beta = 1e-30L;
    cprime[0] = el[0] / beta;
    dprime[0] = v[0] / beta;
    for (size_t i = 1; i < N; ++i) {
      beta = (dl[i] - lam) - el[i - 1] * cprime[i - 1];
      if (beta == 0.0L) beta = 1e-30L;
      if (i + 1 < N) cprime[i] = el[i] / beta;
      dprime[i] = (v[i] - el[i - 1] * dprime[i - 1]) / beta;
    }
    x[N - 1] = dprime[N - 1];
    for (size_t i = N - 1; i-- > 0;) x[i] = dprime[i] - cprime[i] * x[i + 1];
    long double nrm = 0.0L;
    for (long double xi : x) nrm += xi * xi;
    nrm = sqrtl(nrm);
    for (size_t i = 0; i < N; ++i) x[i] /= nrm;
    // Rayleigh quotient
    for (size_t i = 0; i < N; ++i) {
      tx[i] = dl[i] * x[i];
      if (i + 1 < N) tx[i] += el[i] * x[i + 1];
      if (i > 0) tx[i] += el[i - 1] * x[i - 1];
    }
    long double rq = 0.0L;
    for (size_t i = 0; i < N; ++i) rq += x[i] * tx[i];
    lam = rq;
    v = x;
  }
}

// Eigenpairs (lowest k) of one Fourier mode on the cell-centered grid.
SpectralMode solve_mode(int n, int k, const std::vector<double>& mc,
                        const std::vector<double>& mf, double h) {
  const int N = static_cast<int>(mc.size());
  // symmetric tridiagonal in u = sqrt(m) f
  std::vector<double> diag(N), off(N - 1);
  for (int i = 0; i < N; ++i)
    diag[i] = (mf[i] + mf[i + 1]) / (mc[i] * h * h) + double(n) * n / (mc[i] * mc[i]);
  for (int i = 0; i + 1 < N; ++i)
    off[i] = -mf[i + 1] / (std::sqrt(mc[i] * mc[i + 1]) * h * h);

  std::vector<double> w(N), z(static_cast<size_t>(N) * k);
  std::vector<lapack_int> isuppz(2 * static_cast<size_t>(std::max(1, k)));
  lapack_int m_found = 0;
  // dstevr destroys its inputs; keep the originals for the refinement pass
  std::vector<double> diag_work(diag), off_work(off);
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', N, diag_work.data(),
                                   off_work.data(), 0.0, 0.0, 1, k, 0.0, &m_found, w.data(),
                                   z.data(), N, isuppz.data());
  if (info != 0) throw std::runtime_error("assemble_spectrum: dstevr failed");
  if (m_found < k) throw std::runtime_error("assemble_spectrum: fewer eigenpairs than requested");

  std::vector<long double> dl(diag.begin(), diag.end());
  std::vector<long double> el(off.begin(), off.end());

  SpectralMode mode;
  mode.n = n;
  mode.eigenvalues.resize(k);
  mode.eigenvectors.resize(k);
  std::vector<long double> v(N);
  for (int j = 0; j < k; ++j) {
    long double lam = w[j];
    for (int i = 0; i < N; ++i) v[i] = z[static_cast<size_t>(j) * N + i];
    refine_eigenpair(dl, el, lam, v);
    mode.eigenvalues[j] = static_cast<double>(lam);
    auto& f = mode.eigenvectors[j];
    f.resize(N);
    long double norm2 = 0.0L;
    std::vector<long double> fl(N);
    for (int i = 0; i < N; ++i) {
      fl[i] = v[i] / sqrtl(static_cast<long double>(mc[i]));
      norm2 += fl[i] * fl[i] * mc[i];
    }
    long double inv = 1.0L / sqrtl(norm2 * h);
    for (int i = 0; i < N; ++i) f[i] = static_cast<double>(fl[i] * inv);
    // sign convention: first significant component positive (determinism)
    for (int i = 0; i < N; ++i)
      if (std::abs(f[i]) > 1e-12) {
        if (f[i] < 0)
          for (double& fv : f) fv = -fv;
        break;
      }
  }
  return mode;
}

}  // namespace

int SpectralBasis::nearest_cell(double r) const {
  double pos = r / h - 0.5;
  int i = static_cast<int>(std::lround(pos));
  return std::clamp(i, 0, grid_size - 1);
}

SpectralBasis assemble_spectrum(const Profile& p, int n_max, int k_max, int grid_size,
                                int max_workers) {
  if (grid_size < 512) throw std::invalid_argument("assemble_spectrum: grid_size >= 512");
  if (n_max < 0 || k_max < 1) throw std::invalid_argument("assemble_spectrum: bad mode counts");
  // resolution check: >= 10 cells per wavelength of the sharpest requested mode
  // (radial wavenumber ~ k_max pi / (2a))
  if (grid_size < 5 * k_max)
    throw std::invalid_argument("assemble_spectrum: grid too coarse for requested k_max");

  SpectralBasis basis{p};
  basis.grid_size = grid_size;
  const double a = p.pole_distance();
  const double L = 2.0 * a;
  basis.h = L / grid_size;
  basis.r_grid.resize(grid_size);
  basis.m_grid.resize(grid_size);
  std::vector<double> mf(grid_size + 1, 0.0);  // face values; poles carry m = 0
  for (int i = 0; i < grid_size; ++i) {
    basis.r_grid[i] = (i + 0.5) * basis.h;
    basis.m_grid[i] = p.m(basis.r_grid[i]);
  }
  for (int i = 1; i < grid_size; ++i) mf[i] = p.m(i * basis.h);

  double area = 0.0;
  for (double m : basis.m_grid) area += m;
  basis.area = 2.0 * kPi * area * basis.h;

  basis.modes.resize(n_max + 1);
  std::atomic<int> next{0};
  int workers = worker_count(max_workers);
  auto work = [&]() {
    for (;;) {
      int n = next.fetch_add(1);
      if (n > n_max) return;
      basis.modes[n] = solve_mode(n, k_max, basis.m_grid, mf, basis.h);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // tail data for the truncation bound: the omitted spectrum starts above
  // min(top eigenvalue of each computed mode, first eigenvalue trend of n_max)
  double tail = std::numeric_limits<double>::infinity();
  for (const auto& mode : basis.modes) tail = std::min(tail, mode.eigenvalues.back());
  // next angular mode: lambda_{n,1} grows ~ (n/b)^2; extrapolate from n_max
  if (n_max >= 1) {
    double l1 = basis.modes[n_max].eigenvalues.front();
    tail = std::min(tail, l1 * std::pow((n_max + 1.0) / n_max, 2));
  }
  basis.lambda_tail = tail;
  double sup = 0.0;
  for (const auto& mode : basis.modes)
    for (const auto& f : mode.eigenvectors.back()) sup = std::max(sup, std::abs(f));
  basis.sup_band = std::max(sup, 1.0);
  return basis;
}

KernelValue heat_kernel(const SpectralBasis& basis, Point x, Point y, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel: t must be positive");
  const int ix = basis.nearest_cell(x.r);
  const int iy = basis.nearest_cell(y.r);
  const double dth = x.theta - y.theta;
  CompensatedSum sum;
  double abs_sum = 0.0;
  for (const auto& mode : basis.modes) {
    const double cn = mode.n == 0 ? 1.0 / (2.0 * kPi) : 1.0 / kPi;
    const double cosn = std::cos(mode.n * dth);
    for (size_t k = 0; k < mode.eigenvalues.size(); ++k) {
      double term = cn * std::exp(-mode.eigenvalues[k] * t) * mode.eigenvectors[k][ix] *
                    mode.eigenvectors[k][iy] * cosn;
      sum.add(term);
      abs_sum += std::abs(term);
    }
  }
  KernelValue out;
  out.p = sum.value();
  // Weyl-type majorant for the omitted tail: counting measure (Area/4pi) dlambda
  // above lambda_tail, sup-band amplitude, angular factor <= 1/pi.
  out.truncation_bound = basis.area / (4.0 * kPi * t) * std::exp(-basis.lambda_tail * t) *
                         basis.sup_band * basis.sup_band * 2.0;
  out.cancellation_digits =
      out.p != 0.0 ? std::log10(abs_sum / std::abs(out.p)) : std::numeric_limits<double>::infinity();
  return out;
}

double heat_kernel_mass(const SpectralBasis& basis, Point x, double t) {
  const int ix = basis.nearest_cell(x.r);
  const auto& mode0 = basis.modes.at(0);
  double total = 0.0;
  for (size_t k = 0; k < mode0.eigenvalues.size(); ++k) {
    double inner = 0.0;
    for (int i = 0; i < basis.grid_size; ++i)
      inner += mode0.eigenvectors[k][i] * basis.m_grid[i];
    inner *= basis.h;
    total += std::exp(-mode0.eigenvalues[k] * t) * mode0.eigenvectors[k][ix] * inner;
  }
  return total;  // the 2pi theta-integral cancels c_0 = 1/(2pi)
}

ExactKernelValue s2_exact_poisson_detailed(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("s2_exact_poisson: t must be positive");
  // p = (1/4pi) sum_{n>=0} (-1)^n (2n+1) e^{-n(n+1)t}; cancellation costs
  // ~ pi^2/(4 t ln 10) digits, so accumulate in float128.
  __float128 sum = 0;
  __float128 abs_sum = 0;
  const __float128 tq = t;
  const __float128 rel_cut = 1e-18;  // partial-sum scale cutoff
  const __float128 abs_cut = 1e-40;  // float128 floor relative to the term scale
  for (int n = 0;; ++n) {
    __float128 term = (2 * n + 1) * expq(-static_cast<__float128>(n) * (n + 1) * tq);
    if (n % 2) term = -term;
    sum += term;
    abs_sum += fabsq(term);
    if (n > 3 && fabsq(term) < rel_cut * fabsq(sum) && fabsq(term) < abs_cut * abs_sum) break;
    if (n > 100000) break;
  }
  ExactKernelValue out;
  out.p = static_cast<double>(sum / (4 * acosq(-1)));
  double digits = static_cast<double>(log10q(abs_sum / fabsq(sum)));
  out.cancellation_digits = digits;
  out.reliable = digits <= 21.5;  // float128 keeps ~33 digits; 12 needed downstream
  return out;
}

double s2_exact_poisson(double t) { return s2_exact_poisson_detailed(t).p; }

double s2_exact_theta(double t) {
  if (!(t > 0.0)) throw std::invalid_argument("s2_exact_theta: t must be positive");
  const double pref = std::exp(t / 4.0) / (4.0 * std::pow(t, 1.5) * std::sqrt(kPi));
  CompensatedSum sum;
  for (int k = 0;; ++k) {
    double m = (2 * k + 1) * kPi;
    double term = ((k % 2) ? -1.0 : 1.0) * m * std::exp(-m * m / (4.0 * t));
    sum.add(term);
    if (std::abs(term) < 1e-300 || std::abs(term) < 1e-20 * std::abs(sum.value())) break;
    if (k > 10000) break;
  }
  return pref * sum.value();
}

KernelCurve sample_kernel_curve(const SpectralBasis& basis, Point x, Point y,
                                const std::vector<double>& ts) {
  KernelCurve curve;
  curve.x = x;
  curve.y = y;
  // distance between the snapped grid points, from the geodesics module
  Point xs{basis.r_grid[basis.nearest_cell(x.r)], x.theta};
  Point ys{basis.r_grid[basis.nearest_cell(y.r)], y.theta};
  curve.d_xy = distance(basis.profile, xs, ys);
  for (double t : ts) {
    KernelValue v = heat_kernel(basis, x, y, t);
    curve.samples.push_back({t, v.p, v.truncation_bound, v.cancellation_digits});
  }
  return curve;
}

KernelCurve curve_from_function(double (*kernel)(double), const std::vector<double>& ts,
                                double d_xy) {
  KernelCurve curve;
  curve.d_xy = d_xy;
  for (double t : ts) curve.samples.push_back({t, kernel(t), 0.0, 0.0});
  return curve;
}

namespace {

std::vector<const KernelSample*> reliable_samples(const KernelCurve& curve,
                                                  const FitOptions& opt) {
  std::vector<const KernelSample*> out;
  for (const auto& s : curve.samples) {
    if (!(s.p > 0.0)) continue;
    if (s.cancellation_digits > opt.max_cancellation_digits) continue;
    if (s.truncation_bound > opt.max_truncation_fraction * std::abs(s.p)) continue;
    out.push_back(&s);
  }
  return out;
}

}  // namespace

PowerLawFit fit_exponent(const KernelCurve& curve, const FitOptions& opt) {
  auto samples = reliable_samples(curve, opt);
  if (samples.size() < 6)
    throw std::runtime_error("fit_exponent: fewer than 6 reliable samples");
  const double d2 = curve.d_xy * curve.d_xy;
  const size_t n = samples.size();
  std::vector<double> ones(n, 1.0), neg_log_t(n), tvec(n), yvec(n);
  for (size_t i = 0; i < n; ++i) {
    double t = samples[i]->t;
    neg_log_t[i] = -std::log(t);
    tvec[i] = t;
    yvec[i] = std::log(samples[i]->p) + d2 / (4.0 * t);
  }
  auto coef = least_squares({ones, neg_log_t, tvec}, yvec);
  PowerLawFit fit;
  fit.constant = std::exp(coef[0]);
  fit.exponent = coef[1];
  fit.window = {samples.front()->t, samples.back()->t};
  double worst = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double model = coef[0] + coef[1] * neg_log_t[i] + coef[2] * tvec[i];
    worst = std::max(worst, std::abs(yvec[i] - model));
  }
  fit.residual = worst;

  // bootstrap spread of the exponent (seeded, deterministic)
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  double acc = 0.0, acc2 = 0.0;
  int rounds = 0;
  for (int b = 0; b < opt.bootstrap_rounds; ++b) {
    std::vector<double> o, l, tv, yv;
    for (size_t i = 0; i < n; ++i) {
      size_t j = pick(rng);
      o.push_back(1.0);
      l.push_back(neg_log_t[j]);
      tv.push_back(tvec[j]);
      yv.push_back(yvec[j]);
    }
    try {
      double e = least_squares({o, l, tv}, yv)[1];
      acc += e;
      acc2 += e * e;
      ++rounds;
    } catch (const std::exception&) {
      // degenerate resample; skip
    }
  }
  if (rounds > 1) {
    double mean = acc / rounds;
    fit.spread = std::sqrt(std::max(0.0, acc2 / rounds - mean * mean));
  }
  return fit;
}

std::vector<std::pair<double, double>> varadhan_check(const KernelCurve& curve,
                                                      const FitOptions& opt) {
  std::vector<std::pair<double, double>> out;
  for (const auto* s : reliable_samples(curve, opt))
    out.emplace_back(s->t, -4.0 * s->t * std::log(s->p));
  return out;
}

}  // namespace revsurf
