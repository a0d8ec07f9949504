#pragma once

// Adaptive Dormand-Prince 5(4) integrator for small fixed-size systems.
// Error control follows Hairer/Norsett/Wanner: mixed absolute/relative
// scaling, step factor clamped to [0.2, 5], FSAL reuse of the last stage.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "slr/errors.hpp"

namespace slr {

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  long max_steps = 200000;
};

template <std::size_t N>
struct OdeResult {
  std::array<double, N> y{};
  long accepted = 0;
  long rejected = 0;
};

template <std::size_t N, class Rhs>
OdeResult<N> integrate_dopri5(Rhs&& f, std::array<double, N> y, double t0, double t1,
                              const OdeOptions& opt) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  // difference of 5th and embedded 4th order weights
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

  OdeResult<N> out;
  if (t1 == t0) {
    out.y = y;
    return out;
  }

  const double span = t1 - t0;
  double t = t0;
  double h = std::min(std::abs(opt.initial_step), std::abs(span));
  if (span < 0.0) h = -h;

  std::array<double, N> k1, k2, k3, k4, k5, k6, k7, yt, y5;
  k1 = f(t, y);  // stays valid across rejected steps, replaced by k7 on acceptance

  for (long step = 0; step < opt.max_steps; ++step) {
    if (std::abs(h) < std::abs(span) * 1e-15)
      throw numeric_error("ode: step size collapsed at t = " + std::to_string(t));
    bool last = false;
    if ((span > 0.0 && t + h >= t1) || (span < 0.0 && t + h <= t1)) {
      h = t1 - t;
      last = true;
    }

    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    k2 = f(t + c2 * h, yt);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(t + c3 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(t + c4 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = f(t + c5 * h, yt);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = f(t + h, yt);
    for (std::size_t i = 0; i < N; ++i)
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    k7 = f(t + h, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / static_cast<double>(N));

    if (err <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      ++out.accepted;
      if (last) {
        out.y = y;
        return out;
      }
    } else {
      ++out.rejected;
    }
    const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(fac, 0.2, 5.0);
  }
  throw numeric_error("ode: max step count exceeded");
}

}  // namespace slr
