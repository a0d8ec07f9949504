#pragma once

// Bracketed 1-D search: golden-section minimization and bisection root
// finding. Both favor robustness over iteration count.

#include <cmath>

#include "slr/errors.hpp"

namespace slr {

struct MinResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
};

/// Golden-section minimum of f on [a, b]. Endpoints are evaluated too, so
/// a minimum sitting on the boundary is returned exactly.
template <class F>
MinResult golden_section_min(F&& f, double a, double b, double xtol, int max_iter = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  MinResult best;
  best.x = a;
  best.f = f(a);
  const double fb = f(b);
  if (fb < best.f) {
    best.x = b;
    best.f = fb;
  }
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  int it = 0;
  while (b - a > xtol && it < max_iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
    ++it;
  }
  if (f1 < best.f) {
    best.x = x1;
    best.f = f1;
  }
  if (f2 < best.f) {
    best.x = x2;
    best.f = f2;
  }
  best.iterations = it;
  return best;
}

/// Bisection root of f on [a, b]; requires a sign change.
template <class F>
double bisect_root(F&& f, double a, double b, double xtol, int max_iter = 200) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw numeric_error("bisect: no sign change over the bracket");
  for (int it = 0; it < max_iter && b - a > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace slr
