#pragma once

// Riemannian layer in hyperboloid coordinates (r, theta, phi).
//
// Metric (fibre-adapted):
//   ds^2 = dr^2 + sinh^2(r)(cosh^2(r)+sinh^2(r)) dtheta^2
//        + 2 sinh^2(r) dtheta dphi + dphi^2,
// equivalently dr^2 + cosh^2 r sinh^2 r dtheta^2 + (dphi + sinh^2 r dtheta)^2,
// with volume element sqrt(det g) = (1/2) sinh 2r.
//
// Geodesics from the origin: theta and phi are cyclic, so the flow keeps
//   p_theta = A(r) th' + B(r) ph' = 0   (A = g_theta_theta, B = g_theta_phi)
//   p_phi   = B(r) th' + ph'           = sin(alpha)
// which reduces the geodesic equation to the smooth first-order system
//   r'      = v
//   v'      = -sin^2(alpha) tanh(r) sech^2(r)
//   theta'  = -sin(alpha) sech^2(r)
//   phi'    =  sin(alpha) (1 + tanh^2(r)),
// integrated numerically (the normative definition) and, as a verified
// optimization, solved in closed form through u = sinh r with
//   u'^2 = cos^2(alpha) + cos(2 alpha) u^2.

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"
#include "slr/minimize.hpp"
#include "slr/ode.hpp"
#include "slr/projective.hpp"

namespace slr {

struct ToleranceConfig {
  double ode_rel_tol = 1e-12;
  double ode_abs_tol = 1e-12;
  double newton_tol = 1e-11;
  int max_newton_iters = 64;
  double fd_step = 1e-6;
  double quad_rel_tol = 1e-7;  // ball and sector volume target
  double s_max = 2.9;          // shooting search cap (pi/2 plus margin regime)
  bool closed_form_endpoints = true;  // fast path; equivalence to the ODE is pinned by tests
};

/// Arc length s, longitude lambda and inclination alpha from the base plane.
struct GeographicalCoords {
  double s = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
};

struct GeodesicEndpoint {
  HyperboloidCoords coords;
  std::array<double, 3> tangent{};  // (dr/ds, dtheta/ds, dphi/ds) at arc length s
};

/// Metric tensor in coordinates (r, theta, phi).
inline Mat3 metric_at(double r) {
  const double sh = std::sinh(r), ch = std::cosh(r);
  const double sh2 = sh * sh;
  Mat3 g{};
  g[0][0] = 1.0;
  g[1][1] = sh2 * (ch * ch + sh2);
  g[1][2] = g[2][1] = sh2;
  g[2][2] = 1.0;
  return g;
}

namespace detail {

struct FlowState {
  double r = 0.0;       // signed radial coordinate (stays >= 0 for s < pi)
  double v = 0.0;       // dr/ds
  double dtheta = 0.0;  // theta drift relative to lambda
  double phi = 0.0;
};

/// Cubic series start at the r = 0 coordinate singularity.
inline FlowState flow_series(double s, double ca, double sa) {
  FlowState f;
  const double s2 = s * s;
  f.r = ca * s * (1.0 - sa * sa * s2 / 6.0);
  f.v = ca * (1.0 - 0.5 * sa * sa * s2);
  f.dtheta = sa * s * (-1.0 + ca * ca * s2 / 3.0);
  f.phi = sa * s * (1.0 + ca * ca * s2 / 3.0);
  return f;
}

/// Closed-form endpoint from the first integrals.
inline FlowState flow_closed(double s, double alpha) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double k2 = std::cos(2.0 * alpha);
  const double z = k2 * s * s;
  FlowState f;
  double u, du, drift;
  if (std::abs(z) < 1e-4) {
    // unified series in z = cos(2 alpha) s^2, analytic across alpha = pi/4
    const double uu = 1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0;
    const double up = 1.0 / 6.0 + z / 60.0 + z * z / 1680.0;
    const double ww = 1.0 - z / 3.0 + 2.0 * z * z / 15.0 - 17.0 * z * z * z / 315.0;
    u = ca * s * uu;
    du = ca * (uu + 2.0 * z * up);
    drift = std::atan(sa * s * ww);
  } else if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    u = ca * std::sinh(k * s) / k;
    du = ca * std::cosh(k * s);
    drift = std::atan(sa * std::tanh(k * s) / k);
  } else {
    const double k = std::sqrt(-k2);
    const double x = k * s;
    const double xr = std::remainder(x, 2.0 * std::numbers::pi);
    const double winding = std::round((x - xr) / (2.0 * std::numbers::pi));
    u = ca * std::sin(x) / k;
    du = ca * std::cos(x);
    drift = std::atan2(sa * std::sin(xr), k * std::cos(xr)) + 2.0 * std::numbers::pi * winding;
  }
  f.r = std::asinh(u);
  f.v = du / std::sqrt(1.0 + u * u);
  f.dtheta = -drift;
  f.phi = 2.0 * s * sa - drift;
  return f;
}

/// Endpoint by integrating the reduced geodesic system (the normative route).
/// Starts with one explicit series step away from the polar singularity.
inline FlowState flow_ode(double s, double alpha, const ToleranceConfig& tol) {
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  const double s0 = std::min(1e-4, s);
  FlowState f0 = flow_series(s0, ca, sa);
  if (s <= s0) return f0;
  OdeOptions opt;
  opt.rel_tol = tol.ode_rel_tol;
  opt.abs_tol = tol.ode_abs_tol;
  const double sa2 = sa * sa;
  auto rhs = [sa, sa2](double, const std::array<double, 4>& y) {
    const double th = std::tanh(y[0]);
    const double ch = std::cosh(y[0]);
    const double sech2 = 1.0 / (ch * ch);
    return std::array<double, 4>{y[1], -sa2 * th * sech2, -sa * sech2, sa * (1.0 + th * th)};
  };
  const auto res = integrate_dopri5<4>(rhs, {f0.r, f0.v, f0.dtheta, f0.phi}, s0, s, opt);
  return {res.y[0], res.y[1], res.y[2], res.y[3]};
}

inline FlowState flow(double s, double alpha, const ToleranceConfig& tol) {
  return tol.closed_form_endpoints ? flow_closed(s, alpha) : flow_ode(s, alpha, tol);
}

inline GeodesicEndpoint endpoint_from_flow(const FlowState& f, double lambda, double sa) {
  GeodesicEndpoint e;
  e.coords.r = f.r;
  e.coords.theta = lambda + f.dtheta;
  e.coords.phi = f.phi;
  const double th = std::tanh(f.r), ch = std::cosh(f.r);
  e.tangent = {f.v, -sa / (ch * ch), sa * (1.0 + th * th)};
  return e;
}

}  // namespace detail

/// Exponential map at the origin: ODE-integrated unit-speed geodesic.
inline GeodesicEndpoint exp_map(const GeographicalCoords& g, const ToleranceConfig& tol = {}) {
  if (g.s < 0.0) throw validation_error("exp_map: negative arc length");
  if (g.alpha < 0.0 || g.alpha > std::numbers::pi / 2.0 + 1e-15)
    throw validation_error("exp_map: alpha outside [0, pi/2]");
  return detail::endpoint_from_flow(detail::flow_ode(g.s, g.alpha, tol), g.lambda,
                                    std::sin(g.alpha));
}

/// Closed-form endpoint (optimization path; must match exp_map).
inline GeodesicEndpoint exp_map_closed(const GeographicalCoords& g) {
  if (g.s < 0.0) throw validation_error("exp_map: negative arc length");
  return detail::endpoint_from_flow(detail::flow_closed(g.s, g.alpha), g.lambda,
                                    std::sin(g.alpha));
}

struct Jacobian2 {
  double dr_ds = 0.0, dr_dalpha = 0.0;
  double dphi_ds = 0.0, dphi_dalpha = 0.0;
  double det() const { return dr_ds * dphi_dalpha - dr_dalpha * dphi_ds; }
};

namespace detail {

template <class Flow>
Jacobian2 jacobian_fd(Flow&& flow_at, double s, double alpha, double fd_step) {
  const double hs = s < 2.0 * fd_step ? 0.5 * s : fd_step;
  const double ha = fd_step;
  const FlowState sp = flow_at(s + hs, alpha), sm = flow_at(s - hs, alpha);
  const FlowState ap = flow_at(s, alpha + ha), am = flow_at(s, alpha - ha);
  Jacobian2 j;
  j.dr_ds = (sp.r - sm.r) / (2.0 * hs);
  j.dphi_ds = (sp.phi - sm.phi) / (2.0 * hs);
  j.dr_dalpha = (ap.r - am.r) / (2.0 * ha);
  j.dphi_dalpha = (ap.phi - am.phi) / (2.0 * ha);
  return j;
}

}  // namespace detail

/// Jacobian d(r,phi)/d(s,alpha) of the exponential map endpoint, by central
/// finite differences over the ODE route.
inline Jacobian2 endpoint_jacobian(double s, double alpha, const ToleranceConfig& tol = {}) {
  if (s <= 0.0) throw validation_error("endpoint_jacobian: s must be positive");
  return detail::jacobian_fd(
      [&tol](double ss, double aa) { return detail::flow_ode(ss, aa, tol); }, s, alpha,
      tol.fd_step);
}

/// Same Jacobian over the closed-form endpoints (used by the volume code).
inline Jacobian2 endpoint_jacobian_closed(double s, double alpha, double fd_step = 1e-6) {
  return detail::jacobian_fd([](double ss, double aa) { return detail::flow_closed(ss, aa); }, s,
                             alpha, fd_step);
}

namespace detail {

struct OriginShot {
  bool found = false;
  double s = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  double residual = 0.0;       // residual at the accepted solution
  double best_residual = 1e30; // best residual over all starts (diagnostic)
  int converged_starts = 0;
};

/// One damped Newton run of the shooting problem
///   r(s,alpha) = r*, theta = lambda + dtheta(s,alpha) = theta*, phi(s,alpha) = phi*
/// from the given start. lambda enters the theta equation linearly, so the
/// 3x3 system collapses to a 2x2 solve plus an explicit lambda update.
inline bool newton_from(double r_star, double theta_star, double phi_star, double s0,
                        double alpha0, double lambda0, double s_limit,
                        const ToleranceConfig& tol, OriginShot& acc) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double s = s0, alpha = alpha0, lambda = lambda0;
  FlowState f = flow(s, alpha, tol);
  auto res_norm = [&](const FlowState& st, double lam) {
    const double fr = st.r - r_star;
    const double ft = std::remainder(lam + st.dtheta - theta_star, two_pi);
    const double fp = st.phi - phi_star;
    return std::max({std::abs(fr), std::abs(ft), std::abs(fp)});
  };
  double rn = res_norm(f, lambda);
  for (int it = 0; it < tol.max_newton_iters; ++it) {
    if (rn < tol.newton_tol) {
      acc.best_residual = std::min(acc.best_residual, rn);
      if (!acc.found || s < acc.s) {
        acc.s = s;
        acc.alpha = alpha;
        acc.lambda = lambda;
        acc.residual = rn;
      }
      acc.found = true;
      ++acc.converged_starts;
      return true;
    }
    const double hs = s < 2.0 * tol.fd_step ? 0.5 * s : tol.fd_step;
    const double ha = tol.fd_step;
    const FlowState sp = flow(s + hs, alpha, tol), sm = flow(s - hs, alpha, tol);
    const FlowState ap = flow(s, alpha + ha, tol), am = flow(s, alpha - ha, tol);
    const double rs = (sp.r - sm.r) / (2.0 * hs), ra = (ap.r - am.r) / (2.0 * ha);
    const double ps = (sp.phi - sm.phi) / (2.0 * hs), pa = (ap.phi - am.phi) / (2.0 * ha);
    const double ts = (sp.dtheta - sm.dtheta) / (2.0 * hs),
                 ta = (ap.dtheta - am.dtheta) / (2.0 * ha);
    const double det = rs * pa - ra * ps;
    if (std::abs(det) < 1e-14) break;
    const double fr = f.r - r_star;
    const double fp = f.phi - phi_star;
    const double ft = std::remainder(lambda + f.dtheta - theta_star, two_pi);
    const double ds = (-fr * pa + fp * ra) / det;
    const double da = (-fp * rs + fr * ps) / det;
    const double dl = -ft - (ts * ds + ta * da);
    bool moved = false;
    for (double step = 1.0; step >= 1.0 / 512.0; step *= 0.5) {
      const double s2 = s + step * ds;
      const double a2 = alpha + step * da;
      const double l2 = lambda + step * dl;
      if (s2 < 1e-9 || s2 > s_limit || a2 < -0.5 || a2 > std::numbers::pi / 2.0 + 0.5)
        continue;
      const FlowState f2 = flow(s2, a2, tol);
      const double rn2 = res_norm(f2, l2);
      if (rn2 < (1.0 - 1e-4 * step) * rn) {
        s = s2;
        alpha = a2;
        lambda = l2;
        f = f2;
        rn = rn2;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  acc.best_residual = std::min(acc.best_residual, rn);
  return false;
}

/// Multistart shooting toward (r*, theta*, phi*) with phi* >= 0.
/// A warm-start seed, when given, is tried first and suppresses the grid
/// when it converges.
inline OriginShot shoot_origin(double r_star, double theta_star, double phi_star,
                               const ToleranceConfig& tol,
                               const std::optional<std::array<double, 2>>& seed = std::nullopt) {
  OriginShot acc;
  // the radial-then-fibre path bounds the distance by r* + |phi*|, so the
  // search window always contains a solution
  const double s_limit = std::max(tol.s_max, r_star + std::abs(phi_star) + 0.2);
  const double s0 = std::clamp(std::hypot(r_star, phi_star), 1e-3, s_limit);
  if (seed) {
    if (newton_from(r_star, theta_star, phi_star, (*seed)[0], (*seed)[1], theta_star, s_limit,
                    tol, acc))
      return acc;
  }
  constexpr int kGrid = 8;
  for (int i = 0; i < kGrid; ++i) {
    const double alpha0 = (i + 0.5) * (std::numbers::pi / 2.0) / kGrid;
    for (int j = 0; j < kGrid; ++j) {
      const double lambda0 = -std::numbers::pi + (j + 0.5) * 2.0 * std::numbers::pi / kGrid;
      newton_from(r_star, theta_star, phi_star, s0, alpha0, lambda0, s_limit, tol, acc);
    }
  }
  return acc;
}

/// Distance from the origin to the point with hyperboloid coordinates
/// (r*, theta*, phi*); same-fibre targets take the exact fibre geodesic.
inline OriginShot origin_distance(double r_star, double theta_star, double phi_star,
                                  const ToleranceConfig& tol,
                                  const std::optional<std::array<double, 2>>& seed = std::nullopt) {
  if (r_star < 1e-12) {
    OriginShot out;
    out.found = true;
    out.s = std::abs(phi_star);
    out.alpha = std::numbers::pi / 2.0;
    out.residual = 0.0;
    out.converged_starts = 1;
    return out;
  }
  // the mirror (r,theta,phi) -> (r,-theta,-phi) is an isometry fixing the origin
  if (phi_star < 0.0) return shoot_origin(r_star, -theta_star, -phi_star, tol, seed);
  return shoot_origin(r_star, theta_star, phi_star, tol, seed);
}

}  // namespace detail

/// Geodesic distance between interior points (regime s < pi/2 + margin).
inline double distance(const ProjectivePoint& p, const ProjectivePoint& q,
                       const ToleranceConfig& tol = {}) {
  const ProjectivePoint q_local = apply(normalized(q), translation_to_inverse(p));
  const HyperboloidCoords hc = to_hyperboloid(q_local);
  const auto shot = detail::origin_distance(hc.r, hc.theta, hc.phi, tol);
  if (!shot.found)
    throw numeric_error("distance: no shooting solution converged; best residual = " +
                        std::to_string(shot.best_residual));
  return shot.s;
}

struct CurveDistanceResult {
  double rho = 0.0;     // min distance from the origin to the fibred surface
  double t_min = 0.0;   // curve parameter of the nearest fibre
  double psi_min = 0.0; // fibre shift of the nearest surface point (diagnostic)
  long distance_calls = 0;
};

/// Distance from the origin to the fibre surface over a base-plane curve,
/// given as t -> hyperbolic radius r(t) on [0,1]. Minimizes over the curve
/// parameter t (golden section) and the fibre shift psi (inner golden
/// section with bracket expansion); distance solves are warm-started from
/// the previous solution and fall back to the full multistart grid.
template <class RadiusFn>
CurveDistanceResult distance_to_fibred_curve_radius(RadiusFn&& radius_at,
                                                    const ToleranceConfig& tol = {}) {
  CurveDistanceResult out;
  std::optional<std::array<double, 2>> seed;
  long calls = 0;

  auto dist_at = [&](double r_t, double psi) {
    ++calls;
    auto shot = detail::origin_distance(r_t, 0.0, psi, tol, seed);
    if (!shot.found) {
      seed.reset();
      shot = detail::origin_distance(r_t, 0.0, psi, tol);
    }
    if (!shot.found)
      throw numeric_error("distance_to_fibred_curve: shooting failed at psi = " +
                          std::to_string(psi));
    seed = std::array<double, 2>{shot.s, shot.alpha};
    return shot.s;
  };

  double psi_at_min = 0.0;
  auto profile = [&](double t) {
    const double r_t = radius_at(t);
    // any minimizer satisfies psi <= 2 r_t, because d >= psi/2 while the
    // base-plane point is already at distance r_t
    const double cap = 2.0 * r_t;
    double hi = std::max(std::min(cap, 1.0), 1e-6);
    MinResult inner;
    for (int expansion = 0;; ++expansion) {
      inner = golden_section_min([&](double psi) { return dist_at(r_t, psi); }, 0.0, hi, 1e-7);
      if (expansion >= 4 || inner.x < 0.98 * hi || hi >= cap) break;
      hi = std::min(1.8 * hi, cap);  // minimum hugs the bracket edge: widen and retry
    }
    psi_at_min = inner.x;
    return inner.f;
  };

  const MinResult outer = golden_section_min(profile, 0.0, 1.0, 1e-7);
  out.t_min = outer.x;
  out.rho = profile(outer.x);  // re-evaluate at the minimizer to report psi_min
  out.psi_min = psi_at_min;
  if (outer.f < out.rho) out.rho = outer.f;
  out.distance_calls = calls;
  if (!(out.rho < std::numbers::pi / 2.0))
    throw numeric_error("distance_to_fibred_curve: optimal radius left the ball regime");
  return out;
}

}  // namespace slr
