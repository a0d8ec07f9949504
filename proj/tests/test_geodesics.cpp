#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "slr/geodesics.hpp"
#include "slr/prism.hpp"
#include "test_util.hpp"

using namespace slr;
using Catch::Approx;
using slr_test::Rng;

namespace {
constexpr double kPi = std::numbers::pi;

double tangent_norm(const GeodesicEndpoint& e) {
  const Mat3 g = metric_at(e.coords.r);
  const auto& v = e.tangent;
  double n = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n += g[i][j] * v[i] * v[j];
  return std::sqrt(n);
}
}  // namespace

TEST_CASE("tolerance defaults") {
  const ToleranceConfig tol;
  CHECK(tol.ode_rel_tol == 1e-12);
  CHECK(tol.ode_abs_tol == 1e-12);
  CHECK(tol.newton_tol == 1e-11);
  CHECK(tol.max_newton_iters == 64);
  CHECK(tol.fd_step == 1e-6);
}

TEST_CASE("metric tensor") {
  const Mat3 g0 = metric_at(0.0);
  CHECK(g0[0][0] == 1.0);
  CHECK(g0[2][2] == 1.0);
  CHECK(g0[1][1] == 0.0);
  CHECK(g0[1][2] == 0.0);

  // volume element: sqrt(det g) = (1/2) sinh 2r
  for (int i = 0; i <= 300; ++i) {
    const double r = 3.0 * i / 300.0;
    const double lhs = std::sqrt(det3(metric_at(r)));
    CHECK(lhs == Approx(0.5 * std::sinh(2.0 * r)).margin(1e-13).epsilon(1e-13));
  }

  // positive definiteness for r > 0 (leading minors)
  for (double r : {0.1, 0.5, 1.0, 2.0, 3.0}) {
    const Mat3 g = metric_at(r);
    CHECK(g[0][0] > 0.0);
    CHECK(g[1][1] > 0.0);
    CHECK(g[1][1] * g[2][2] - g[1][2] * g[2][1] > 0.0);
    CHECK(det3(g) > 0.0);
  }
}

TEST_CASE("exponential map basics") {
  const GeodesicEndpoint at_zero = exp_map({0.0, 0.3, 0.4});
  CHECK(at_zero.coords.r == Approx(0.0).margin(1e-14));
  CHECK(at_zero.coords.phi == Approx(0.0).margin(1e-14));

  // the fibre line is a unit-speed geodesic
  for (double s : {0.2, 0.9, 1.5}) {
    const GeodesicEndpoint e = exp_map({s, 0.0, kPi / 2.0});
    CHECK(e.coords.r == Approx(0.0).margin(1e-12));
    CHECK(e.coords.phi == Approx(s).margin(1e-12));
  }

  // base-direction start: r = s + O(s^3), phi stays 0
  const GeodesicEndpoint base = exp_map({0.05, 0.0, 0.0});
  CHECK(base.coords.r == Approx(0.05).margin(1e-6));
  CHECK(base.coords.phi == Approx(0.0).margin(1e-12));
  CHECK(std::abs(base.coords.r - 0.05) < 3e-5);  // cubic defect only

  CHECK_THROWS_AS(exp_map({-0.1, 0.0, 0.2}), validation_error);
  CHECK_THROWS_AS(exp_map({0.5, 0.0, 2.0}), validation_error);
}

TEST_CASE("closed-form endpoints match the integrated geodesics") {
  const ToleranceConfig tol;
  for (double s : {0.05, 0.3, 0.7, 1.0, 1.4, 2.0, 2.6}) {
    for (double a : {0.0, 0.03, kPi / 8, kPi / 4 - 1e-7, kPi / 4, kPi / 4 + 1e-7, 1.0,
                     kPi / 2 - 0.02, kPi / 2}) {
      const auto ode = detail::flow_ode(s, a, tol);
      const auto closed = detail::flow_closed(s, a);
      CHECK(ode.r == Approx(closed.r).margin(1e-10));
      CHECK(ode.dtheta == Approx(closed.dtheta).margin(1e-10));
      CHECK(ode.phi == Approx(closed.phi).margin(1e-10));
      CHECK(ode.v == Approx(closed.v).margin(1e-9));
    }
  }
}

TEST_CASE("endpoint anchors") {
  // frozen values from an independent high-order integration of the
  // reduced geodesic system
  struct Anchor {
    double s, alpha, r, dtheta, phi;
  };
  const Anchor anchors[] = {
      {1.0, 0.6, 0.790989551074523, -0.4676895100705721, 0.6615954367194985},
      {0.7, 0.2, 0.6841856992977619, -0.12075037785758401, 0.15738668525550167},
      {1.4, 1.3, 0.27466250785259755, -1.3062529341262732, 1.3917099850418664},
      {2.0, 0.785398163397448, 1.146215834780589, -0.9553166181245042, 1.8731105066216847},
  };
  for (const auto& a : anchors) {
    const GeodesicEndpoint ode = exp_map({a.s, 0.0, a.alpha});
    CHECK(ode.coords.r == Approx(a.r).margin(1e-9));
    CHECK(ode.coords.theta == Approx(a.dtheta).margin(1e-9));
    CHECK(ode.coords.phi == Approx(a.phi).margin(1e-9));
    const GeodesicEndpoint cf = exp_map_closed({a.s, 0.0, a.alpha});
    CHECK(cf.coords.r == Approx(a.r).margin(1e-9));
    CHECK(cf.coords.theta == Approx(a.dtheta).margin(1e-9));
    CHECK(cf.coords.phi == Approx(a.phi).margin(1e-9));
  }
}

TEST_CASE("unit speed is conserved") {
  for (double s : {0.3, 0.8, 1.4, 2.2}) {
    for (double a : {0.0, 0.4, kPi / 4, 1.1, kPi / 2}) {
      CHECK(tangent_norm(exp_map({s, 0.7, a})) == Approx(1.0).margin(1e-9));
    }
  }
}

TEST_CASE("lambda equivariance") {
  for (double d : {0.3, 1.7, -2.1}) {
    const GeodesicEndpoint e1 = exp_map({1.1, 0.4, 0.9});
    const GeodesicEndpoint e2 = exp_map({1.1, 0.4 + d, 0.9});
    CHECK(e2.coords.theta - e1.coords.theta == Approx(d).margin(1e-12));
    CHECK(e2.coords.r == Approx(e1.coords.r).margin(1e-14));
    CHECK(e2.coords.phi == Approx(e1.coords.phi).margin(1e-14));
  }
}

TEST_CASE("endpoint jacobian") {
  // radial start: dr/ds = 1
  const Jacobian2 j0 = endpoint_jacobian(0.01, 0.0);
  CHECK(j0.dr_ds == Approx(1.0).margin(1e-6));

  // fibre geodesic: dphi/ds = 1
  const Jacobian2 jf = endpoint_jacobian(0.8, kPi / 2.0);
  CHECK(jf.dphi_ds == Approx(1.0).margin(1e-8));

  // step-halving consistency of the determinant
  ToleranceConfig half;
  half.fd_step = 0.5e-6;
  const Jacobian2 ja = endpoint_jacobian(0.9, 0.7);
  const Jacobian2 jb = endpoint_jacobian(0.9, 0.7, half);
  CHECK(ja.det() == Approx(jb.det()).epsilon(1e-3));

  // closed-form route agrees with the ODE route
  const Jacobian2 jc = endpoint_jacobian_closed(0.9, 0.7);
  CHECK(ja.det() == Approx(jc.det()).epsilon(1e-4));

  // FD derivative columns match the integrated tangent
  const GeodesicEndpoint e = exp_map({0.9, 0.0, 0.7});
  CHECK(ja.dr_ds == Approx(e.tangent[0]).margin(1e-8));
  CHECK(ja.dphi_ds == Approx(e.tangent[2]).margin(1e-8));
}

TEST_CASE("distance basics") {
  Rng rng(31);
  const ProjectivePoint p = slr_test::random_interior(rng);
  CHECK(distance(p, p) == Approx(0.0).margin(1e-12));

  // fibre geodesics: d(E0, E0 S(phi)) = phi
  for (double phi : {0.25, 0.8, 1.45}) {
    const ProjectivePoint q = apply(ProjectivePoint::origin(), fibre_translation(phi));
    CHECK(distance(ProjectivePoint::origin(), q) == Approx(phi).margin(1e-10));
  }

  // radial geodesics: d(E0, base-plane point at radius r) = r
  for (double r : {0.2, 0.9, 1.6}) {
    CHECK(distance(ProjectivePoint::origin(), from_hyperboloid({r, 0.8, 0.0})) ==
          Approx(r).margin(1e-9));
  }
}

TEST_CASE("exp/distance round trip") {
  const ToleranceConfig tol;
  for (double s : {0.2, 0.7, 1.4}) {
    for (double lambda : {0.0, 2.1}) {
      for (double a : {0.1, 0.7, 1.2, kPi / 2}) {
        const GeodesicEndpoint e = exp_map({s, lambda, a}, tol);
        const ProjectivePoint q = from_hyperboloid(e.coords);
        CHECK(distance(ProjectivePoint::origin(), q, tol) == Approx(s).margin(1e-7));
      }
    }
  }
}

TEST_CASE("distance is isometry invariant") {
  Rng rng(37);
  for (int i = 0; i < 20; ++i) {
    const ProjectivePoint p = slr_test::random_interior(rng, 0.7, 0.7);
    const ProjectivePoint q = slr_test::random_interior(rng, 0.7, 0.7);
    const double d0 = distance(p, q);
    const Isometry m = slr_test::random_word(rng);
    const double d1 = distance(apply(p, m), apply(q, m));
    CHECK(d1 == Approx(d0).margin(1e-8));
  }
}

TEST_CASE("triangle inequality") {
  Rng rng(41);
  for (int i = 0; i < 25; ++i) {
    const ProjectivePoint a = slr_test::random_interior(rng, 0.6, 0.6);
    const ProjectivePoint b = slr_test::random_interior(rng, 0.6, 0.6);
    const ProjectivePoint c = slr_test::random_interior(rng, 0.6, 0.6);
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9);
  }
}

TEST_CASE("distance to the fibred side surface") {
  const SideCurve c37(validate(3, 7));
  const CurveDistanceResult r37 = distance_to_fibred_curve(c37);
  CHECK(r37.rho == Approx(0.141564).margin(1e-4));
  CHECK(r37.rho == Approx(0.14156407668382884).margin(1e-7));  // dense-scan oracle value
  CHECK(std::abs(r37.psi_min) < 1e-4);  // the ball touches in the base plane

  const CurveDistanceResult r46 = distance_to_fibred_curve(SideCurve(validate(4, 6)));
  CHECK(r46.rho == Approx(0.329239).margin(1e-4));

  // the minimizing t matches the reflection-symmetric midpoint theta = pi/p
  const double t_mid = c37.t_of_theta(kPi / 3.0);
  CHECK(r37.t_min == Approx(t_mid).margin(1e-6));

  // dense scan over t as an independent oracle for the minimum
  double best = 1e30;
  for (int i = 0; i <= 4000; ++i) {
    best = std::min(best, c37.radius_hyperbolic(i / 4000.0));
  }
  CHECK(r37.rho == Approx(best).margin(1e-7));
}

TEST_CASE("distance with ODE endpoints agrees with the fast path") {
  ToleranceConfig slow;
  slow.closed_form_endpoints = false;
  const ProjectivePoint q = from_hyperboloid({0.6, 1.2, 0.35});
  const double fast = distance(ProjectivePoint::origin(), q);
  const double ode = distance(ProjectivePoint::origin(), q, slow);
  CHECK(fast == Approx(ode).margin(1e-9));
}
