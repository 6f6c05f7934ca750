#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>

namespace revsurf {

struct OdeControl {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;
  double max_step = 0.25;
  std::size_t max_steps = 2000000;
};

// Dormand-Prince 5(4) embedded pair with PI step-size control.
// State dimension fixed at compile time; the RHS is f(t, y, dydt).
template <std::size_t N>
class Rk45 {
public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;

  Rk45(Rhs rhs, OdeControl ctl = {}) : rhs_(std::move(rhs)), ctl_(ctl) {}

  // Integrate from (t0, y0) to t_end; observer(t, y) is called at t0 and after
  // every accepted step. Returns the final state.
  State integrate(double t0, State y, double t_end,
                  const std::function<void(double, const State&)>& observer = nullptr) const {
    double t = t0;
    double h = std::min(ctl_.initial_step, ctl_.max_step);
    if (observer) observer(t, y);
    State k1;
    rhs_(t, y, k1);
    double err_prev = 1.0;
    std::size_t steps = 0;
    while (t < t_end) {
      if (++steps > ctl_.max_steps) throw std::runtime_error("ode: step limit exceeded");
      h = std::min(h, t_end - t);
      State y_new, k1_new;
      double err = try_step(t, y, k1, h, y_new, k1_new);
      if (err <= 1.0) {
        t += h;
        y = y_new;
        k1 = k1_new;
        if (observer) observer(t, y);
        double fac = 0.9 * std::pow(err > 1e-12 ? err : 1e-12, -0.7 / 5.0) *
                     std::pow(err_prev, 0.4 / 5.0);
        h *= std::min(5.0, std::max(0.2, fac));
        h = std::min(h, ctl_.max_step);
        err_prev = std::max(err, 1e-12);
      } else {
        h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        if (h < 1e-15 * std::max(1.0, std::abs(t)))
          throw std::runtime_error("ode: step size underflow");
      }
    }
    return y;
  }

private:
  // One trial step; returns the scaled error norm (accept when <= 1).
  double try_step(double t, const State& y, const State& k1, double h,
                  State& y_out, State& k1_out) const {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
    State k2, k3, k4, k5, k6, k7, tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    rhs_(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs_(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs_(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs_(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs_(t + h, tmp, k6);
    for (std::size_t i = 0; i < N; ++i)
      y_out[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs_(t + h, y_out, k7);  // FSAL
    k1_out = k7;
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = ctl_.atol + ctl_.rtol * std::max(std::abs(y[i]), std::abs(y_out[i]));
      err += (e / sc) * (e / sc);
    }
    return std::sqrt(err / N);
  }

  Rhs rhs_;
  OdeControl ctl_;
};

// Locate the first zero crossing of g(t, y) along the trajectory starting at
// (t0, y0). Scans accepted steps; once a sign change is bracketed, refines by
// bisecting on re-integration from the step start (no interpolant error).
// Returns the event time; state at the event is written to y_event.
template <std::size_t N>
double locate_event(const Rk45<N>& solver, double t0, typename Rk45<N>::State y0, double t_max,
                    const std::function<double(double, const typename Rk45<N>::State&)>& g,
                    typename Rk45<N>::State& y_event, double t_skip = 0.0,
                    double ttol = 1e-12) {
  using State = typename Rk45<N>::State;
  struct BracketFound {};
  double t_prev = t0;
  State y_prev = y0;
  double g_prev = g(t0, y0);
  double t_lo = 0, t_hi = 0;
  State y_lo{};
  bool found = false;
  try {
    solver.integrate(t0, y0, t_max, [&](double t, const State& y) {
      if (t == t0) return;
      double gv = g(t, y);
      if (t > t_skip && g_prev != 0.0 && (gv == 0.0 || ((g_prev < 0) != (gv < 0)))) {
        t_lo = t_prev;
        t_hi = t;
        y_lo = y_prev;
        found = true;
        throw BracketFound{};
      }
      t_prev = t;
      y_prev = y;
      g_prev = gv;
    });
  } catch (const BracketFound&) {
  }
  if (!found) throw std::runtime_error("ode: event not found before t_max");
  // Bisection: each trial re-integrates [t_lo, t_mid] from the checkpoint.
  auto eval = [&](double t) {
    if (t <= t_lo) return g(t_lo, y_lo);
    State y = solver.integrate(t_lo, y_lo, t);
    return g(t, y);
  };
  double glo = eval(t_lo);
  double a = t_lo, b = t_hi;
  while (b - a > ttol) {
    double mid = 0.5 * (a + b);
    double gm = eval(mid);
    if (gm == 0.0) { a = b = mid; break; }
    if ((gm < 0) == (glo < 0)) {
      a = mid;
      glo = gm;
    } else {
      b = mid;
    }
  }
  double t_ev = 0.5 * (a + b);
  y_event = (t_ev > t_lo) ? solver.integrate(t_lo, y_lo, t_ev) : y_lo;
  return t_ev;
}

}  // namespace revsurf
