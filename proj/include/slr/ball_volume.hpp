#pragma once

// Volume of a geodesic ball of radius rho:
//   Vol(B(rho)) = 4 pi  int_0^rho int_0^{pi/2} (1/2) sinh(2 r(s,alpha)) |J(s,alpha)| dalpha ds
// with J = d(r,phi)/d(s,alpha). The factor 4 pi collects the longitude
// (d theta / d lambda = 1) and the mirror half alpha < 0. The alpha domain
// is split at pi/4 (the geodesic type boundary) even though the integrand
// is smooth there.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <numbers>
#include <utility>

#include "slr/errors.hpp"
#include "slr/geodesics.hpp"
#include "slr/quadrature.hpp"

namespace slr {

struct BallVolumeResult {
  double rho = 0.0;
  double volume = 0.0;
  double est_error = 0.0;
  long evaluations = 0;  // endpoint evaluations (finite-difference stencils included)
};

inline BallVolumeResult ball_volume(double rho, const ToleranceConfig& tol = {}) {
  if (rho < 0.0) throw validation_error("ball_volume: negative radius");
  if (rho >= std::numbers::pi / 2.0)
    throw validation_error("ball_volume: rho >= pi/2 leaves the simply connected regime");
  BallVolumeResult out;
  out.rho = rho;
  if (rho == 0.0) return out;

  // endpoint cache per evaluation; keys are the exact bit patterns, so the
  // result is independent of lookup order
  std::map<std::pair<std::uint64_t, std::uint64_t>, detail::FlowState> memo;
  long evals = 0;
  auto key_of = [](double s, double a) {
    std::uint64_t ks, ka;
    std::memcpy(&ks, &s, sizeof ks);
    std::memcpy(&ka, &a, sizeof ka);
    return std::make_pair(ks, ka);
  };
  auto flow_at = [&](double s, double a) {
    const auto key = key_of(s, a);
    const auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    ++evals;
    const detail::FlowState f = detail::flow(s, a, tol);
    memo.emplace(key, f);
    return f;
  };

  auto integrand = [&](double s, double a) {
    const detail::FlowState center = flow_at(s, a);
    const Jacobian2 j = detail::jacobian_fd(flow_at, s, a, tol.fd_step);
    return 0.5 * std::sinh(2.0 * center.r) * std::abs(j.det());
  };

  const double inner_rel = tol.quad_rel_tol * 0.1;
  double inner_err_sum = 0.0;
  long inner_count = 0;
  auto profile = [&](double s) {
    auto f = [&](double a) { return integrand(s, a); };
    const auto left = integrate_gk15(f, 0.0, std::numbers::pi / 4.0, inner_rel, 1e-16);
    const auto right = integrate_gk15(f, std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                                      inner_rel, 1e-16);
    inner_err_sum += left.est_error + right.est_error;
    ++inner_count;
    return left.value + right.value;
  };

  const auto outer = integrate_gk15(profile, 0.0, rho, tol.quad_rel_tol, 1e-16);
  const double four_pi = 4.0 * std::numbers::pi;
  out.volume = four_pi * outer.value;
  const double mean_inner_err = inner_count > 0 ? inner_err_sum / inner_count : 0.0;
  out.est_error = four_pi * (outer.est_error + mean_inner_err * rho);
  out.evaluations = evals;
  if (!(out.volume >= 0.0)) throw numeric_error("ball_volume: negative volume computed");
  return out;
}

}  // namespace slr
