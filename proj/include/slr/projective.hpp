#pragma once

// Projective hyperboloid model of the SL(2,R)~ geometry.
//
// Model points live in projective coordinates (x0;x1;x2;x3) with the
// signature (--++) form Q(X) = -x0^2 - x1^2 + x2^2 + x3^2; the interior
// Q < 0 of the one-sheeted hyperboloid is the space. Isometries are 4x4
// matrices acting on row vectors on the right, defined up to a positive
// scalar. In terms of the 2x2 picture the substitution is
// a = x0+x3, b = x1+x2, c = -x1+x2, d = x0-x3; it is never needed in code.

#include <cmath>
#include <numbers>
#include <utility>

#include "slr/errors.hpp"
#include "slr/linalg.hpp"

namespace slr {

struct ProjectivePoint {
  double x0 = 1.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;

  Vec4 vec() const { return {x0, x1, x2, x3}; }
  static ProjectivePoint from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
  static ProjectivePoint origin() { return {1.0, 0.0, 0.0, 0.0}; }
};

/// Base-plane polar coordinates (r, theta) plus fibre coordinate phi.
/// phi is a real parameter: the universal cover keeps windings, the
/// projective matrices only see phi mod 2*pi.
struct HyperboloidCoords {
  double r = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

/// Affine chart x = x1/x0, y = x2/x0, z = x3/x0 (defined for x0 != 0).
struct InhomogeneousCoords {
  double x = 0.0, y = 0.0, z = 0.0;
};

struct Isometry {
  Mat4 m;

  static Isometry identity() { return {Mat4::identity()}; }
  Isometry operator*(const Isometry& o) const { return {m * o.m}; }
  Isometry inv() const { return {inverse(m)}; }
};

inline ProjectivePoint apply(const ProjectivePoint& p, const Isometry& g) {
  return ProjectivePoint::from_vec(p.vec() * g.m);
}

inline double quadratic_form(const ProjectivePoint& p) {
  return -p.x0 * p.x0 - p.x1 * p.x1 + p.x2 * p.x2 + p.x3 * p.x3;
}

inline bool is_interior(const ProjectivePoint& p) { return quadratic_form(p) < 0.0; }

/// Scale so that Q = -1. The scale is positive, so the point keeps its
/// sheet on the projective sphere.
inline ProjectivePoint normalized(const ProjectivePoint& p) {
  const double q = quadratic_form(p);
  if (!(q < 0.0)) throw validation_error("exterior point: Q(X) >= 0");
  const double s = 1.0 / std::sqrt(-q);
  return {p.x0 * s, p.x1 * s, p.x2 * s, p.x3 * s};
}

/// Canonical representative: Q = -1 and x0 >= 0. The returned flag is true
/// when the overall sign was flipped, i.e. the input sat on the opposite
/// sheet (a fibre shift by pi); callers tracking the universal cover fold
/// this into their winding bookkeeping.
inline std::pair<ProjectivePoint, bool> canonicalized(const ProjectivePoint& p) {
  ProjectivePoint n = normalized(p);
  if (n.x0 < 0.0) return {{-n.x0, -n.x1, -n.x2, -n.x3}, true};
  return {n, false};
}

/// Fibre translation S(phi); S(0) = I and S(a)S(b) = S(a+b) exactly.
inline Isometry fibre_translation(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  Isometry g;
  g.m.m = {{{c, s, 0, 0}, {-s, c, 0, 0}, {0, 0, c, -s}, {0, 0, s, c}}};
  return g;
}

/// Translation carrying the origin E0 to X (X interior, any positive scale).
inline Isometry translation_to(const ProjectivePoint& x_raw) {
  const ProjectivePoint x = normalized(x_raw);
  Isometry g;
  g.m.m = {{{x.x0, x.x1, x.x2, x.x3},
            {-x.x1, x.x0, x.x3, -x.x2},
            {x.x2, x.x3, x.x0, x.x1},
            {x.x3, -x.x2, -x.x1, x.x0}}};
  return g;
}

/// Inverse translation: the same matrix pattern with negated x1, x2, x3.
inline Isometry translation_to_inverse(const ProjectivePoint& x_raw) {
  const ProjectivePoint x = normalized(x_raw);
  return translation_to(ProjectivePoint{x.x0, -x.x1, -x.x2, -x.x3});
}

/// Rotation about the fibre line through the origin by angle omega.
inline Isometry rotation_origin(double omega) {
  const double c = std::cos(omega), s = std::sin(omega);
  Isometry g;
  g.m.m = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, c, s}, {0, 0, -s, c}}};
  return g;
}

/// Rotation about the fibre line through X: conjugate of the origin rotation.
inline Isometry rotation_about_fibre(const ProjectivePoint& x, double omega) {
  return translation_to_inverse(x) * rotation_origin(omega) * translation_to(x);
}

/// Foot point of the fibre through X on the base plane x1 = 0.
inline ProjectivePoint foot_point(const ProjectivePoint& x) {
  return {x.x0 * x.x0 + x.x1 * x.x1, 0.0, x.x0 * x.x2 - x.x1 * x.x3, x.x0 * x.x3 + x.x1 * x.x2};
}

inline ProjectivePoint from_hyperboloid(const HyperboloidCoords& c) {
  const double chr = std::cosh(c.r), shr = std::sinh(c.r);
  return {chr * std::cos(c.phi), chr * std::sin(c.phi),
          shr * std::cos(c.theta - c.phi), shr * std::sin(c.theta - c.phi)};
}

/// Inverse of the embedding; phi lands on the principal branch (-pi, pi],
/// the winding on the universal cover is the caller's to supply.
inline HyperboloidCoords to_hyperboloid(const ProjectivePoint& p_raw) {
  const ProjectivePoint p = normalized(p_raw);
  HyperboloidCoords c;
  const double sh = std::hypot(p.x2, p.x3);
  c.r = std::asinh(sh);
  c.phi = std::atan2(p.x1, p.x0);
  c.theta = sh > 0.0 ? c.phi + std::atan2(p.x3, p.x2) : 0.0;
  return c;
}

inline InhomogeneousCoords to_inhomogeneous(const ProjectivePoint& p) {
  if (p.x0 == 0.0) throw validation_error("point at infinity of the affine chart (x0 = 0)");
  return {p.x1 / p.x0, p.x2 / p.x0, p.x3 / p.x0};
}

inline ProjectivePoint from_inhomogeneous(const InhomogeneousCoords& c) {
  return {1.0, c.x, c.y, c.z};
}

// --- projective comparison, positive scale only -------------------------

/// Residual of A ~ kappa*B over kappa > 0, relative to max|A|.
/// Returns a value >= 1 when no positive scale fits.
inline double projective_residual(const Mat4& a, const Mat4& b) {
  const auto [bi, bj] = b.argmax_abs();
  if (b.m[bi][bj] == 0.0) return 1.0;
  const double kappa = a.m[bi][bj] / b.m[bi][bj];
  if (!(kappa > 0.0)) return 1.0;
  const double scale = std::max(a.max_abs(), 1e-300);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a.m[i][j] - kappa * b.m[i][j]));
  return worst / scale;
}

inline double projective_residual(const Isometry& a, const Isometry& b) {
  return projective_residual(a.m, b.m);
}

inline bool projectively_equal(const Isometry& a, const Isometry& b, double tol = 1e-10) {
  return projective_residual(a, b) < tol;
}

inline double projective_residual(const ProjectivePoint& a, const ProjectivePoint& b) {
  const Vec4 va = a.vec(), vb = b.vec();
  int bj = 0;
  for (int j = 1; j < 4; ++j)
    if (std::abs(vb[j]) > std::abs(vb[bj])) bj = j;
  if (vb[bj] == 0.0) return 1.0;
  const double kappa = va[bj] / vb[bj];
  if (!(kappa > 0.0)) return 1.0;
  double scale = 0.0, worst = 0.0;
  for (int j = 0; j < 4; ++j) scale = std::max(scale, std::abs(va[j]));
  for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(va[j] - kappa * vb[j]));
  return worst / std::max(scale, 1e-300);
}

inline bool projectively_equal(const ProjectivePoint& a, const ProjectivePoint& b,
                               double tol = 1e-10) {
  return projective_residual(a, b) < tol;
}

/// Best fit of M ~ kappa * S(phi), kappa > 0. The fibre parameter phi is
/// read off the first row; the residual measures how far M is from an
/// actual fibre translation.
struct FibreTranslationFit {
  double phi = 0.0;
  double residual = 0.0;
};

inline FibreTranslationFit fit_fibre_translation(const Isometry& g) {
  FibreTranslationFit fit;
  fit.phi = std::atan2(g.m(0, 1), g.m(0, 0));
  const double kappa = std::hypot(g.m(0, 0), g.m(0, 1));
  if (kappa == 0.0) {
    fit.residual = 1.0;
    return fit;
  }
  const Isometry ref = fibre_translation(fit.phi);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(worst, std::abs(g.m(i, j) - kappa * ref.m(i, j)));
  fit.residual = worst / kappa;
  return fit;
}

}  // namespace slr
