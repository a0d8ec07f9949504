#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "slr/ball_volume.hpp"

using namespace slr;
using Catch::Approx;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("ball volume edge cases") {
  const BallVolumeResult zero = ball_volume(0.0);
  CHECK(zero.volume == 0.0);
  CHECK(zero.est_error == 0.0);
  CHECK_THROWS_AS(ball_volume(-0.1), validation_error);
  CHECK_THROWS_AS(ball_volume(kPi / 2.0), validation_error);
}

TEST_CASE("ball volumes at the table radii") {
  CHECK(ball_volume(0.141564).volume == Approx(0.011963).epsilon(1e-4));
  CHECK(ball_volume(0.530638).volume == Approx(0.686600).epsilon(1e-4));
}

TEST_CASE("independent quadrature anchor") {
  // frozen from an independent adaptive integration of the same double
  // integral (relative accuracy ~1e-10)
  CHECK(ball_volume(0.3).volume == Approx(0.11652653015121271).epsilon(1e-6));
}

TEST_CASE("small balls are Euclidean") {
  for (double rho : {1e-2, 5e-3}) {
    const double euclid = 4.0 / 3.0 * kPi * rho * rho * rho;
    CHECK(ball_volume(rho).volume / euclid == Approx(1.0).margin(1e-3));
  }
}

TEST_CASE("volume grows with the radius") {
  double prev = 0.0;
  for (double rho : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.9, 1.2, 1.5}) {
    const double v = ball_volume(rho).volume;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("halving the tolerance stays within the reported error") {
  ToleranceConfig tight;
  tight.quad_rel_tol = 0.5e-7;
  const BallVolumeResult base = ball_volume(0.3);
  const BallVolumeResult refined = ball_volume(0.3, tight);
  CHECK(std::abs(base.volume - refined.volume) <= base.est_error);
  CHECK(base.est_error >= 0.0);
  CHECK(base.evaluations > 0);
}

TEST_CASE("deterministic evaluation") {
  const BallVolumeResult a = ball_volume(0.37);
  const BallVolumeResult b = ball_volume(0.37);
  CHECK(a.volume == b.volume);
  CHECK(a.est_error == b.est_error);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("Monte Carlo oracle") {
  // sample (s, alpha) uniformly; the longitude and the alpha mirror
  // contribute the exact factor 4 pi
  const double rho = 0.3;
  const ToleranceConfig tol;
  std::mt19937_64 rng(20260810);
  std::uniform_real_distribution<double> us(0.0, rho);
  std::uniform_real_distribution<double> ua(0.0, kPi / 2.0);
  const long n = 400000;
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < n; ++i) {
    const double s = us(rng), a = ua(rng);
    const auto f = detail::flow_closed(s, a);
    const Jacobian2 j = endpoint_jacobian_closed(s, a, tol.fd_step);
    const double val = 0.5 * std::sinh(2.0 * f.r) * std::abs(j.det());
    sum += val;
    sum2 += val * val;
  }
  const double box = rho * kPi / 2.0;
  const double mean = sum / n;
  const double var = (sum2 / n - mean * mean) / n;
  const double mc = 4.0 * kPi * box * mean;
  const double se = 4.0 * kPi * box * std::sqrt(var);
  const double quad = ball_volume(rho, tol).volume;
  CHECK(std::abs(quad - mc) < 3.0 * se);
}

TEST_CASE("ODE-backed integrand agrees with the fast path") {
  ToleranceConfig ode;
  ode.closed_form_endpoints = false;
  ode.quad_rel_tol = 1e-5;
  const double slow = ball_volume(0.25, ode).volume;
  const double fast = ball_volume(0.25).volume;
  CHECK(slow == Approx(fast).epsilon(2e-4));
}
