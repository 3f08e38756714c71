#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "qaction/errors.hpp"

namespace qaction {

/// Adaptive Dormand-Prince 5(4) embedded pair for small fixed-size systems.
/// Integrates y' = f(x, y) from x0 to x1 (either direction) with local error
/// controlled against atol + rtol*|y| per component. Calls observe(x, y)
/// after every accepted step when provided.
template <int N>
class DormandPrince {
 public:
  using State = std::array<double, N>;
  using Rhs = std::function<void(double, const State&, State&)>;
  using Observer = std::function<void(double, const State&)>;

  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = INFINITY;
  double h_min_rel = 1e-14;  // floor relative to |span|
  long max_steps = 2'000'000;

  /// Integrates in place; returns the number of accepted steps.
  long integrate(const Rhs& f, double x0, double x1, State& y,
                 const Observer& observe = {}) const {
    if (x0 == x1) return 0;
    const double dir = x1 > x0 ? 1.0 : -1.0;
    const double span = std::fabs(x1 - x0);
    double x = x0;
    State k1;
    f(x, y, k1);
    double h = initial_step(y, k1, dir, span);
    long accepted = 0;
    long steps = 0;

    while (dir * (x1 - x) > 0) {
      if (std::fabs(h) > h_max) h = dir * h_max;
      bool last = dir * (x + h - x1) >= 0;
      double h_step = last ? x1 - x : h;
      if (!last && std::fabs(h) < h_min_rel * span)
        throw ToleranceNotMet("ode: step size underflow at x=" + std::to_string(x));
      if (++steps > max_steps)
        throw ToleranceNotMet("ode: step budget exhausted at x=" + std::to_string(x));

      State y_new, k_last;
      double err = step(f, x, y, k1, h_step, y_new, k_last);
      if (err <= 1.0) {
        x = last ? x1 : x + h_step;
        y = y_new;
        k1 = k_last;  // FSAL
        ++accepted;
        if (observe) observe(x, y);
        if (last) break;
        double fac = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = h_step * std::clamp(fac, 0.2, 5.0);
      } else {
        h = h_step * std::fmax(0.2, 0.9 * std::pow(err, -0.2));
        if (std::fabs(h) < h_min_rel * span)
          throw ToleranceNotMet("ode: step size underflow at x=" +
                                std::to_string(x));
      }
    }
    return accepted;
  }

 private:
  double scaled_norm(const State& e, const State& y0, const State& y1) const {
    double s = 0;
    for (int i = 0; i < N; ++i) {
      double sc = atol + rtol * std::fmax(std::fabs(y0[i]), std::fabs(y1[i]));
      double q = e[i] / sc;
      s += q * q;
    }
    return std::sqrt(s / N);
  }

  double initial_step(const State& y, const State& k1, double dir,
                      double span) const {
    double d0 = 0, d1 = 0;
    for (int i = 0; i < N; ++i) {
      double sc = atol + rtol * std::fabs(y[i]);
      d0 += (y[i] / sc) * (y[i] / sc);
      d1 += (k1[i] / sc) * (k1[i] / sc);
    }
    d0 = std::sqrt(d0 / N);
    d1 = std::sqrt(d1 / N);
    double h = (d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6 * span;
    if (h <= 0 || !std::isfinite(h)) h = 1e-6 * span;
    h = std::fmin(h, span / 10);
    h = std::fmin(h, h_max);
    return dir * h;
  }

  // One DOPRI5 trial step; returns the scaled error norm.
  double step(const Rhs& f, double x, const State& y, const State& k1, double h,
              State& y5, State& k7) const {
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;

    State k2, k3, k4, k5, k6, t;
    for (int i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    f(x + c2 * h, t, k2);
    for (int i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(x + c3 * h, t, k3);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(x + c4 * h, t, k4);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(x + c5 * h, t, k5);
    for (int i = 0; i < N; ++i)
      t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                         a65 * k5[i]);
    f(x + h, t, k6);
    for (int i = 0; i < N; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                          b6 * k6[i]);
    f(x + h, y5, k7);

    State err;
    for (int i = 0; i < N; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                    e6 * k6[i] + e7 * k7[i]);
    return scaled_norm(err, y, y5);
  }
};

}  // namespace qaction
