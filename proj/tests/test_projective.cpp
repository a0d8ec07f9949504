#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numbers>

#include "slr/projective.hpp"
#include "test_util.hpp"

using namespace slr;
using Catch::Approx;
using slr_test::Rng;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quadratic form on reference points") {
  CHECK(quadratic_form({1, 0, 0, 0}) == -1.0);
  CHECK(quadratic_form({0, 0, 1, 0}) == 1.0);
  CHECK(quadratic_form({std::cosh(1.0), 0, std::sinh(1.0), 0}) == Approx(-1.0).margin(1e-15));
}

TEST_CASE("fibre translation one-parameter group") {
  CHECK(projective_residual(fibre_translation(0.0), Isometry::identity()) < 1e-16);

  const ProjectivePoint e0 = ProjectivePoint::origin();
  const ProjectivePoint img = apply(e0, fibre_translation(kPi / 2.0));
  CHECK(projectively_equal(img, ProjectivePoint{0, 1, 0, 0}, 1e-15));

  // additivity S(a) S(b) = S(a+b)
  Rng rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 50; ++i) {
    const double a = u(rng), b = u(rng);
    CHECK(projective_residual(fibre_translation(a) * fibre_translation(b),
                              fibre_translation(a + b)) < 1e-14);
  }

  // 2 pi periodicity
  CHECK(projective_residual(fibre_translation(2.0 * kPi), Isometry::identity()) < 1e-15);
}

TEST_CASE("fibre translation in the affine chart") {
  // (1; 0; y; z) with tan(phi) = 1 maps to (1; 1; y+z; z-y)
  const double y = 0.31, z = -0.12;
  const ProjectivePoint img = apply({1, 0, y, z}, fibre_translation(kPi / 4.0));
  const InhomogeneousCoords c = to_inhomogeneous(img);
  CHECK(c.x == Approx(1.0).margin(1e-14));
  CHECK(c.y == Approx(y + z).margin(1e-14));
  CHECK(c.z == Approx(z - y).margin(1e-14));
}

TEST_CASE("translation to a point") {
  CHECK(projective_residual(translation_to(ProjectivePoint::origin()), Isometry::identity()) <
        1e-15);

  const ProjectivePoint x{std::cosh(1.0), 0, std::sinh(1.0), 0};
  const ProjectivePoint moved = apply(ProjectivePoint::origin(), translation_to(x));
  CHECK(projective_residual(moved, x) < 1e-15);

  CHECK_THROWS_AS(translation_to(ProjectivePoint{0, 0, 1, 0}), validation_error);

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const ProjectivePoint p = slr_test::random_interior(rng);
    const Isometry t = translation_to(p);
    CHECK(projective_residual(apply(ProjectivePoint::origin(), t), p) < 1e-13);
    CHECK(projective_residual(t * translation_to_inverse(p), Isometry::identity()) < 1e-12);
  }
}

TEST_CASE("rotation about the origin fibre") {
  CHECK(projective_residual(rotation_origin(0.0), Isometry::identity()) < 1e-16);
  CHECK(projective_residual(rotation_origin(0.83) * rotation_origin(-0.83),
                            Isometry::identity()) < 1e-15);

  // block action on (y, z) per the matrix: (y, z) -> (y cos w - z sin w, y sin w + z cos w)
  const double w = 0.4, y = 0.2, z = 0.5;
  const ProjectivePoint img = apply({1, 0, y, z}, rotation_origin(w));
  CHECK(img.x2 == Approx(y * std::cos(w) - z * std::sin(w)).margin(1e-15));
  CHECK(img.x3 == Approx(y * std::sin(w) + z * std::cos(w)).margin(1e-15));
  CHECK(img.x0 == 1.0);
  CHECK(img.x1 == 0.0);
}

TEST_CASE("rotation about an arbitrary fibre") {
  const double w = 1.1;
  CHECK(projective_residual(rotation_about_fibre(ProjectivePoint::origin(), w),
                            rotation_origin(w)) < 1e-14);

  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    const ProjectivePoint x = slr_test::random_interior(rng);
    CHECK(projective_residual(apply(x, rotation_about_fibre(x, 0.9)), x) < 1e-12);
  }

  // q-fold rotations have projective order q
  const ProjectivePoint x = slr_test::random_interior(rng);
  for (int q = 3; q <= 10; ++q) {
    const Isometry r = rotation_about_fibre(x, 2.0 * kPi / q);
    CHECK(projective_residual(Isometry{mat_pow(r.m, q)}, Isometry::identity()) < 1e-11);
  }
}

TEST_CASE("foot point projection") {
  // base-plane points are fixed projectively
  const ProjectivePoint base{std::cosh(0.7), 0, std::sinh(0.7) * 0.6, std::sinh(0.7) * 0.8};
  CHECK(projective_residual(foot_point(base), base) < 1e-14);

  // the fibre through the origin projects to the origin
  const ProjectivePoint on_fibre = apply(ProjectivePoint::origin(), fibre_translation(0.9));
  CHECK(projective_residual(foot_point(on_fibre), ProjectivePoint::origin()) < 1e-14);

  // solving x = tan(phi) recovers the point from its foot
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const ProjectivePoint x = slr_test::random_interior(rng);
    const ProjectivePoint z = foot_point(x);
    CHECK(z.x1 == 0.0);
    const double phi = std::atan2(x.x1, x.x0);
    CHECK(projective_residual(apply(z, fibre_translation(phi)), x) < 1e-10);
    // idempotence
    CHECK(projective_residual(foot_point(z), z) < 1e-12);
  }
}

TEST_CASE("hyperboloid parametrization round trip") {
  CHECK(projectively_equal(from_hyperboloid({0.0, 1.23, 0.0}), ProjectivePoint::origin(), 1e-15));

  const ProjectivePoint p = from_hyperboloid({1.0, 0.0, 0.0});
  CHECK(p.x0 == Approx(std::cosh(1.0)));
  CHECK(p.x1 == 0.0);
  CHECK(p.x2 == Approx(std::sinh(1.0)));
  CHECK(p.x3 == 0.0);

  Rng rng(19);
  std::uniform_real_distribution<double> ur(0.01, 2.0);
  std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> up(-kPi + 0.01, kPi);
  for (int i = 0; i < 300; ++i) {
    const HyperboloidCoords in{ur(rng), ut(rng), up(rng)};
    const HyperboloidCoords back = to_hyperboloid(from_hyperboloid(in));
    CHECK(back.r == Approx(in.r).margin(1e-12));
    CHECK(std::remainder(back.theta - in.theta, 2.0 * kPi) == Approx(0.0).margin(1e-12));
    CHECK(back.phi == Approx(in.phi).margin(1e-12));
  }
}

TEST_CASE("inhomogeneous chart") {
  const HyperboloidCoords hc{0.8, 1.1, 0.4};
  const InhomogeneousCoords c = to_inhomogeneous(from_hyperboloid(hc));
  CHECK(c.x == Approx(std::tan(hc.phi)).margin(1e-14));
  CHECK(c.y ==
        Approx(std::tanh(hc.r) * std::cos(hc.theta - hc.phi) / std::cos(hc.phi)).margin(1e-14));
  CHECK(c.z ==
        Approx(std::tanh(hc.r) * std::sin(hc.theta - hc.phi) / std::cos(hc.phi)).margin(1e-14));
  CHECK_THROWS_AS(to_inhomogeneous(ProjectivePoint{0, 1, 0, 0}), validation_error);
}

TEST_CASE("canonical representative") {
  const ProjectivePoint p = from_hyperboloid({0.6, 0.3, 2.5});  // x0 < 0 sheet
  REQUIRE(p.x0 < 0.0);
  const auto [canon, flipped] = canonicalized(p);
  CHECK(flipped);
  CHECK(canon.x0 >= 0.0);
  CHECK(quadratic_form(canon) == Approx(-1.0).margin(1e-14));
  CHECK(projective_residual(canon, ProjectivePoint{-p.x0, -p.x1, -p.x2, -p.x3}) < 1e-12);
}

TEST_CASE("projective equality is positive-scale only") {
  const Isometry s = fibre_translation(0.7);
  CHECK(projectively_equal(Isometry{s.m * 3.0}, s));
  CHECK_FALSE(projectively_equal(Isometry{s.m * -3.0}, s));
}

TEST_CASE("generated isometries preserve the polarity projectively") {
  Rng rng(23);
  for (int w = 0; w < 40; ++w) {
    const Isometry m = slr_test::random_word(rng);
    double kappa = 0.0;
    for (int i = 0; i < 25; ++i) {
      const ProjectivePoint x = slr_test::random_interior(rng);
      const double ratio = quadratic_form(apply(x, m)) / quadratic_form(x);
      if (i == 0)
        kappa = ratio;
      else
        CHECK(ratio == Approx(kappa).epsilon(1e-10));
      CHECK(ratio > 0.0);
    }
  }
}

TEST_CASE("fibre rotation commutes with the fibre translation along its axis") {
  Rng rng(29);
  for (int i = 0; i < 50; ++i) {
    const ProjectivePoint x = slr_test::random_interior(rng);
    const Isometry t = translation_to(x);
    const Isometry s_conj = translation_to_inverse(x) * fibre_translation(0.37) * t;
    const Isometry r = rotation_about_fibre(x, 0.81);
    CHECK(projective_residual(r * s_conj, s_conj * r) < 1e-11);
  }
}

TEST_CASE("fibre translation fit") {
  const auto fit = fit_fibre_translation(Isometry{fibre_translation(0.42).m * 2.5});
  CHECK(fit.phi == Approx(0.42).margin(1e-14));
  CHECK(fit.residual < 1e-15);
  const auto bad = fit_fibre_translation(translation_to(from_hyperboloid({0.5, 0.0, 0.0})));
  CHECK(bad.residual > 1e-3);
}
