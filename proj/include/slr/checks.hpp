#pragma once

// Self-contained verification suite behind the `check` command: each check
// re-derives one of the standing identities of the engine and reports
// pass/fail with a short detail string.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "slr/ball_volume.hpp"
#include "slr/geodesics.hpp"
#include "slr/packing.hpp"
#include "slr/prism.hpp"
#include "slr/tables.hpp"

namespace slr {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  ToleranceConfig tol;
  // test hook: added to g_theta_theta inside the volume-element check so a
  // deliberately wrong metric is seen to fail
  double metric_perturbation = 0.0;
};

namespace detail {

inline std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

inline CheckResult check_volume_element(const CheckOptions& opt) {
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double r = 3.0 * i / 1000.0;
    Mat3 g = metric_at(r);
    g[1][1] += opt.metric_perturbation;
    worst = std::max(worst, std::abs(std::sqrt(det3(g)) - 0.5 * std::sinh(2.0 * r)));
  }
  return {"volume-element", worst < 1e-12,
          "max |sqrt(det g) - sinh(2r)/2| = " + sci(worst) + " on r in [0,3]"};
}

inline CheckResult check_isometry_invariance(const CheckOptions& opt) {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ur(0.0, 0.7), ut(0.0, 2.0 * std::numbers::pi),
      up(-0.7, 0.7), ua(-1.2, 1.2);
  auto random_point = [&] { return from_hyperboloid({ur(rng), ut(rng), up(rng)}); };
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const ProjectivePoint p = random_point(), q = random_point();
    Isometry m = Isometry::identity();
    std::uniform_int_distribution<int> ulen(1, 5), ukind(0, 2);
    const int len = ulen(rng);
    for (int k = 0; k < len; ++k) {
      switch (ukind(rng)) {
        case 0: m = m * fibre_translation(ua(rng)); break;
        case 1: m = m * translation_to(random_point()); break;
        default: m = m * rotation_origin(ua(rng)); break;
      }
    }
    const double d0 = distance(p, q, opt.tol);
    const double d1 = distance(apply(p, m), apply(q, m), opt.tol);
    worst = std::max(worst, std::abs(d1 - d0));
  }
  return {"isometry-invariance", worst < 1e-7,
          "max |d(Pm,Qm) - d(P,Q)| = " + sci(worst) + " over 20 pairs"};
}

inline CheckResult check_group_relations(const CheckOptions&) {
  double worst = 0.0, worst_phi = 0.0;
  for (const auto& [p, q] : all_table_pairs()) {
    const PrismParams params = validate(p, q);
    const GroupGenerators g = group_generators(params);
    const RelationReport rep = check_generators(params, g.orientation_a, g.orientation_b, 1e-9);
    worst = std::max(worst, rep.max_residual());
    worst_phi = std::max(worst_phi, std::abs(rep.phi_tau - rep.expected_phi_tau));
  }
  return {"group-relations", worst < 1e-9 && worst_phi < 1e-9,
          "max relation residual = " + sci(worst) + ", max |phi_tau - 2Psi| = " +
              sci(worst_phi) + " over the table pairs"};
}

inline CheckResult check_small_ball(const CheckOptions& opt) {
  const double rho = 0.01;
  const double ratio =
      ball_volume(rho, opt.tol).volume / (4.0 / 3.0 * std::numbers::pi * rho * rho * rho);
  std::ostringstream os;
  os.precision(8);
  os << "Vol(B(0.01)) / Euclidean = " << std::fixed << ratio;
  return {"small-ball", ratio > 0.999 && ratio < 1.001, os.str()};
}

inline CheckResult check_curvature_oracle(const CheckOptions&) {
  static const std::pair<int, int> kPairs[] = {{3, 7}, {3, 8},  {4, 5},  {4, 6},  {5, 4},
                                               {6, 5}, {7, 3},  {8, 10}, {20, 3}, {29, 3}};
  double worst_curv = 0.0, worst_fit = 0.0;
  for (const auto& [p, q] : kPairs) {
    const PrismParams params = validate(p, q);
    const SideCurve curve(params);
    const double closed = curvature(params);
    const double h = 3e-4;
    for (double t : {0.25, 0.5, 0.75}) {
      const auto pm = curve.point(t - h), p0 = curve.point(t), pp = curve.point(t + h);
      const double y1 = (pp.y - pm.y) / (2.0 * h), z1 = (pp.z - pm.z) / (2.0 * h);
      const double y2 = (pp.y - 2.0 * p0.y + pm.y) / (h * h);
      const double z2 = (pp.z - 2.0 * p0.z + pm.z) / (h * h);
      const double fd = std::abs(y1 * z2 - z1 * y2) / std::pow(y1 * y1 + z1 * z1, 1.5);
      worst_curv = std::max(worst_curv, std::abs(fd - closed));
    }
    // circle through three points vs a dense grid
    const auto p1 = curve.point(0.0), p2 = curve.point(0.5), p3 = curve.point(1.0);
    const double ax = p2.y - p1.y, ay = p2.z - p1.z;
    const double bx = p3.y - p1.y, by = p3.z - p1.z;
    const double d = 2.0 * (ax * by - ay * bx);
    const double ux = (by * (ax * ax + ay * ay) - ay * (bx * bx + by * by)) / d;
    const double uy = (ax * (bx * bx + by * by) - bx * (ax * ax + ay * ay)) / d;
    const double cy = p1.y + ux, cz = p1.z + uy, radius = std::hypot(ux, uy);
    for (int i = 0; i <= 100; ++i) {
      const auto pt = curve.point(i / 100.0);
      worst_fit = std::max(worst_fit, std::abs(std::hypot(pt.y - cy, pt.z - cz) - radius));
    }
  }
  return {"curvature-oracle", worst_curv < 1e-6 && worst_fit < 1e-9,
          "max |C_fd - C| = " + sci(worst_curv) + ", max circle-fit residual = " +
              sci(worst_fit)};
}

}  // namespace detail

/// Runs the named invariant checks (all of them, or those whose name
/// contains `filter`).
inline std::vector<CheckResult> run_checks(const std::string& filter = "",
                                           const CheckOptions& opt = {}) {
  std::vector<CheckResult> all;
  all.push_back(detail::check_volume_element(opt));
  all.push_back(detail::check_isometry_invariance(opt));
  all.push_back(detail::check_group_relations(opt));
  all.push_back(detail::check_small_ball(opt));
  all.push_back(detail::check_curvature_oracle(opt));
  if (filter.empty()) return all;
  std::vector<CheckResult> selected;
  for (auto& c : all)
    if (c.name.find(filter) != std::string::npos) selected.push_back(std::move(c));
  return selected;
}

}  // namespace slr
