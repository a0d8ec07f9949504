#pragma once

// Adaptive 15-point Gauss-Kronrod quadrature with recursive bisection.
// The per-panel error budget is split proportionally to the panel width,
// so the accumulated estimate stays below the requested total. Panels are
// processed depth-first in a fixed order; results are deterministic.

#include <cmath>
#include <cstddef>

#include "slr/errors.hpp"

namespace slr {

struct QuadratureResult {
  double value = 0.0;
  double est_error = 0.0;
  long evaluations = 0;
};

namespace detail {

// QUADPACK dqk15 abscissae (positive half) and weights
inline constexpr double kGk15X[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
inline constexpr double kGk15Wk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552591,
    0.16900472663926790, 0.19035057806478540, 0.20443294007529889, 0.20948214108472782};
inline constexpr double kG7W[4] = {
    0.12948496616886969, 0.27970539148927664, 0.38183005050511894, 0.41795918367346938};

template <class F>
void gk15_panel(F& f, double a, double b, double& kronrod, double& err, long& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kGk15X[i]);
    fv[14 - i] = f(c + h * kGk15X[i]);
  }
  fv[7] = f(c);
  evals += 15;
  double k = 0.0;
  for (int i = 0; i < 7; ++i) k += kGk15Wk[i] * (fv[i] + fv[14 - i]);
  k += kGk15Wk[7] * fv[7];
  double g = kG7W[3] * fv[7];
  for (int i = 0; i < 3; ++i) g += kG7W[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  kronrod = k * h;
  err = std::abs((k - g) * h);
}

template <class F>
void gk15_recurse(F& f, double a, double b, double tol_share, int depth, QuadratureResult& acc,
                  long& evals, int max_depth) {
  double v, e;
  gk15_panel(f, a, b, v, e, evals);
  if (e <= tol_share || depth >= max_depth) {
    if (depth >= max_depth && e > 64.0 * tol_share)
      throw numeric_error("quadrature: panel failed to converge");
    acc.value += v;
    acc.est_error += e;
    return;
  }
  const double m = 0.5 * (a + b);
  gk15_recurse(f, a, m, 0.5 * tol_share, depth + 1, acc, evals, max_depth);
  gk15_recurse(f, m, b, 0.5 * tol_share, depth + 1, acc, evals, max_depth);
}

}  // namespace detail

template <class F>
QuadratureResult integrate_gk15(F&& f, double a, double b, double rel_tol, double abs_tol,
                                int max_depth = 40) {
  QuadratureResult out;
  if (a == b) return out;
  long evals = 0;
  double v0, e0;
  detail::gk15_panel(f, a, b, v0, e0, evals);
  const double tol = std::max(abs_tol, rel_tol * std::abs(v0));
  if (e0 <= tol) {
    out.value = v0;
    out.est_error = e0;
    out.evaluations = evals;
    return out;
  }
  const double m = 0.5 * (a + b);
  detail::gk15_recurse(f, a, m, 0.5 * tol, 1, out, evals, max_depth);
  detail::gk15_recurse(f, m, b, 0.5 * tol, 1, out, evals, max_depth);
  out.evaluations = evals;
  return out;
}

}  // namespace slr
