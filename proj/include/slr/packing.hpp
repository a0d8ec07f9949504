#pragma once

// Non-periodic packing pipeline: optimal inscribed-ball radius, optimal
// prism of height 2 rho, density, parameter sweeps and the density argmax.

#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "slr/ball_volume.hpp"
#include "slr/errors.hpp"
#include "slr/prism.hpp"

namespace slr {

struct PackingDiagnostics {
  double t_min = 0.0;    // curve parameter of the touching fibre
  double psi_min = 0.0;  // fibre shift of the touching point (0 = base plane)
  double ball_est_error = 0.0;
  long ball_evaluations = 0;
  long distance_calls = 0;
};

struct PackingResult {
  int p = 0;
  int q = 0;
  double rho_opt = 0.0;
  double h_opt = 0.0;  // prism height, exactly 2 rho_opt
  double vol_ball = 0.0;
  double vol_prism = 0.0;
  double density = 0.0;
  PackingDiagnostics diagnostics;
};

/// Radius of the origin-centered ball touching the side surfaces of the
/// infinite regular prism.
inline double optimal_radius(const PrismParams& params, const ToleranceConfig& tol = {}) {
  return distance_to_fibred_curve(SideCurve(params), tol).rho;
}

inline PackingResult packing_density(const PrismParams& params, const ToleranceConfig& tol = {}) {
  PackingResult out;
  out.p = params.p;
  out.q = params.q;
  const CurveDistanceResult touch = distance_to_fibred_curve(SideCurve(params), tol);
  out.rho_opt = touch.rho;
  out.h_opt = 2.0 * touch.rho;
  // non-periodicity witness: the optimal height differs from the
  // face-to-face height pi - 2pi/p - 2pi/q
  if (std::abs(out.h_opt - params.h_periodic) <= 1e-6)
    throw numeric_error("packing_density: optimal height coincides with the periodic height");
  const BallVolumeResult ball = ball_volume(out.rho_opt, tol);
  out.vol_ball = ball.volume;
  out.vol_prism = prism_volume(params, out.h_opt, tol);
  out.density = out.vol_ball / out.vol_prism;
  out.diagnostics = {touch.t_min, touch.psi_min, ball.est_error, ball.evaluations,
                     touch.distance_calls};
  if (!(out.density > 0.0 && out.density < 1.0))
    throw numeric_error("packing_density: density outside (0,1): " +
                        std::to_string(out.density));
  return out;
}

struct SweepSkip {
  int p = 0;
  int q = 0;
  std::string reason;
  bool numeric_failure = false;  // false: invalid parameters, true: solver failure
};

struct SweepResult {
  std::vector<PackingResult> rows;  // in input (p,q) order
  std::vector<SweepSkip> skipped;
};

/// Computes packing rows for the given pairs. Invalid pairs and per-row
/// numeric failures are recorded and the sweep continues. Rows are
/// independent and evaluated concurrently; the output order follows the
/// input order regardless of scheduling.
inline SweepResult sweep(const std::vector<std::pair<int, int>>& pairs,
                         const ToleranceConfig& tol = {}, unsigned threads = 0) {
  using Slot = std::variant<std::monostate, PackingResult, SweepSkip>;
  std::vector<Slot> slots(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pairs.size()) return;
      const auto [p, q] = pairs[i];
      try {
        slots[i] = packing_density(validate(p, q), tol);
      } catch (const validation_error& e) {
        slots[i] = SweepSkip{p, q, e.what(), false};
      } catch (const numeric_error& e) {
        slots[i] = SweepSkip{p, q, e.what(), true};
      }
    }
  };
  unsigned n = threads > 0 ? threads : std::thread::hardware_concurrency();
  n = std::max(1u, std::min<unsigned>(n, pairs.size()));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  SweepResult out;
  for (auto& slot : slots) {
    if (auto* row = std::get_if<PackingResult>(&slot))
      out.rows.push_back(*row);
    else if (auto* skip = std::get_if<SweepSkip>(&slot))
      out.skipped.push_back(*skip);
  }
  return out;
}

struct ArgmaxResult {
  PackingResult best;
  // rows other than the best whose density is within 1e-7 of the maximum;
  // non-empty means the ordering is not resolved at this tolerance
  std::vector<std::pair<int, int>> near_ties;
};

inline ArgmaxResult argmax_density(const std::vector<PackingResult>& rows) {
  if (rows.empty()) throw validation_error("argmax_density: no rows");
  const PackingResult* best = &rows.front();
  for (const auto& row : rows)
    if (row.density > best->density) best = &row;
  ArgmaxResult out;
  out.best = *best;
  for (const auto& row : rows)
    if (&row != best && best->density - row.density < 1e-7)
      out.near_ties.emplace_back(row.p, row.q);
  return out;
}

}  // namespace slr
