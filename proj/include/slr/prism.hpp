#pragma once

// Regular p-gonal prism tilings: parameter validation, the vertex radius
// parameter b, the side curve of the base figure, its Euclidean curvature,
// sector and prism volumes, and the pq2_1 generator relations.

#include <quadmath.h>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "slr/errors.hpp"
#include "slr/geodesics.hpp"
#include "slr/minimize.hpp"
#include "slr/projective.hpp"
#include "slr/quadrature.hpp"

namespace slr {

struct PrismParams {
  int p = 0;
  int q = 0;
  double b = 0.0;             // tanh of the vertex distance from the origin
  double psi_periodic = 0.0;  // Psi = pi/2 - pi/p - pi/q
  double h_periodic = 0.0;    // 2 Psi, the face-to-face prism height
};

/// Vertex radius parameter: tanh(OA1) = b. The denominator uses
/// tan(pi/p) tan(pi/q); this is the reading forced by the worked value
/// b(4,6) = (sqrt6 - sqrt2)/2 and by the t = 0 limit of the side curve.
inline double vertex_b(int p, int q) {
  const double tp = std::tan(std::numbers::pi / p), tq = std::tan(std::numbers::pi / q);
  return std::sqrt((1.0 - tp * tq) / (1.0 + tp * tq));
}

/// Validates 3 <= p and q > 2p/(p-2) (both integers) and fills in the
/// derived constants.
inline PrismParams validate(int p, int q) {
  if (p < 3) throw validation_error("p must be an integer >= 3 (got p = " + std::to_string(p) + ")");
  // q (p-2) > 2 p, exactly in integers
  if (static_cast<long>(q) * (p - 2) <= 2L * p) {
    std::ostringstream os;
    const double bound = 2.0 * p / (p - 2.0);
    os << "q must exceed 2p/(p-2) = ";
    if (bound == std::floor(bound))
      os << static_cast<long>(bound);
    else
      os << bound;
    os << " (got q = " << q << ")";
    throw validation_error(os.str());
  }
  PrismParams out;
  out.p = p;
  out.q = q;
  out.b = vertex_b(p, q);
  out.psi_periodic = std::numbers::pi / 2.0 - std::numbers::pi / p - std::numbers::pi / q;
  out.h_periodic = 2.0 * out.psi_periodic;
  return out;
}

inline double vertex_b(const PrismParams& params) { return params.b; }

/// Side curve c(t) = (0, y(t), z(t)) of the base figure, t in [0,1].
/// The curve lies in the base plane; its endpoints sit at Euclidean
/// distance b from the origin and the p rotated copies (by 2 pi / p about
/// the x axis) close up into the base figure boundary.
class SideCurve {
 public:
  explicit SideCurve(const PrismParams& params) : params_(params) {
    const double A = std::numbers::pi / params.p;
    const double B = std::numbers::pi / params.q;
    num_ = std::sqrt(std::sin(2.0 * A + 2.0 * B));
    den_ = std::sqrt(std::sin(2.0 * A) + std::sin(2.0 * B));
    sab2_ = std::sin(A + B) * std::sin(A + B);
    cab_ = std::cos(A + B);
    cab2_ = cab_ * cab_;
    sab_ = std::sin(A + B);
    c2a_ = std::cos(2.0 * A);
    s2a_ = std::sin(2.0 * A);
    s2ab_ = std::sin(2.0 * A + 2.0 * B);
    camb_ = std::cos(A - B);
    // polar form guard: theta(t) must be strictly monotone over [0,1]
    double prev = theta(0.0);
    for (int i = 1; i <= 64; ++i) {
      const double th = theta(i / 64.0);
      if (!(th > prev))
        throw numeric_error("side curve: polar angle is not monotone in t");
      prev = th;
    }
  }

  const PrismParams& params() const { return params_; }

  InhomogeneousCoords point(double t) const {
    const double den = den_ * (sab2_ + t * t * cab2_);
    const double y = num_ *
                     (t * c2a_ * sab2_ - 0.5 * t * s2a_ * s2ab_ + sab2_ * (1.0 - t) +
                      t * t * cab_ * camb_) /
                     den;
    const double z = t * num_ *
                     (s2a_ * sab2_ + 0.5 * c2a_ * s2ab_ * (1.0 - t) +
                      cab_ * (t * s2a_ * cab_ + sab_ * (t - 1.0))) /
                     den;
    return {0.0, y, z};
  }

  /// Euclidean distance of c(t) from the origin (equals tanh of the
  /// hyperbolic radius).
  double radius_euclidean(double t) const {
    const InhomogeneousCoords c = point(t);
    return std::hypot(c.y, c.z);
  }

  /// Hyperbolic base-plane radius of c(t).
  double radius_hyperbolic(double t) const { return std::atanh(radius_euclidean(t)); }

  /// Polar angle of c(t); runs monotonically from 0 to 2 pi / p.
  double theta(double t) const {
    const InhomogeneousCoords c = point(t);
    return std::atan2(c.z, c.y);
  }

  /// Inverse of the monotone map t -> theta, by bisection.
  double t_of_theta(double th) const {
    if (th <= 0.0) return 0.0;
    if (th >= 2.0 * std::numbers::pi / params_.p) return 1.0;
    return bisect_root([this, th](double t) { return theta(t) - th; }, 0.0, 1.0, 1e-13);
  }

  /// Polar form r(theta) of the curve on [0, 2 pi / p].
  double radius_of_theta(double th) const { return radius_hyperbolic(t_of_theta(th)); }

 private:
  PrismParams params_;
  double num_ = 0.0, den_ = 0.0;
  double sab2_ = 0.0, cab_ = 0.0, cab2_ = 0.0, sab_ = 0.0;
  double c2a_ = 0.0, s2a_ = 0.0, s2ab_ = 0.0, camb_ = 0.0;
};

inline InhomogeneousCoords side_curve_point(const PrismParams& params, double t) {
  if (t < 0.0 || t > 1.0) throw validation_error("side_curve_point: t outside [0,1]");
  return SideCurve(params).point(t);
}

/// Euclidean curvature of the side curves (they are circular arcs).
inline double curvature(const PrismParams& params) {
  const double A = std::numbers::pi / params.p;
  const double B = std::numbers::pi / params.q;
  return std::sqrt(std::cos(A + B) * (std::sin(2.0 * A) + std::sin(2.0 * B)) /
                   (std::sin(A + B) * (1.0 - std::cos(2.0 * A))));
}

/// Euclidean radius of the side curve arcs.
inline double curve_radius(const PrismParams& params) { return 1.0 / curvature(params); }

/// lim_{q -> infinity} C_p(q) = cot(pi/p).
inline double curvature_q_limit(int p) {
  if (p < 3) throw validation_error("curvature_q_limit: p must be >= 3");
  return 1.0 / std::tan(std::numbers::pi / p);
}

/// Bolyai's distance of parallelism: x = log(cot(phi)), 0 < phi < pi/2.
inline double parallelism_distance(double phi) {
  if (phi <= 0.0 || phi >= std::numbers::pi / 2.0)
    throw validation_error("parallelism_distance: phi outside (0, pi/2)");
  return std::log(1.0 / std::tan(phi));
}

/// Volume of the sector-like domain of height Psi over one full side-curve
/// span: Psi * int_0^{2 pi / p} (1/4)(cosh(2 r(theta)) - 1) dtheta.
inline double sector_volume(const PrismParams& params, double psi,
                            const ToleranceConfig& tol = {}) {
  if (psi < 0.0) throw validation_error("sector_volume: negative height");
  if (psi == 0.0) return 0.0;
  const SideCurve curve(params);
  const double rel = std::min(1e-9, tol.quad_rel_tol);
  const auto integral = integrate_gk15(
      [&curve](double th) { return 0.25 * (std::cosh(2.0 * curve.radius_of_theta(th)) - 1.0); },
      0.0, 2.0 * std::numbers::pi / params.p, rel, 1e-16);
  return psi * integral.value;
}

/// Prism volume: p congruent sectors.
inline double prism_volume(const PrismParams& params, double psi,
                           const ToleranceConfig& tol = {}) {
  return params.p * sector_volume(params, psi, tol);
}

// --- pq2_1 generators ----------------------------------------------------

struct GroupGenerators {
  Isometry a;      // p-rotation about the origin fibre
  Isometry b_rot;  // q-rotation about the fibre through the vertex A1
  Isometry s;      // screw motion b a b
  Isometry tau;    // fibre translation a b a b
  int orientation_a = 1;
  int orientation_b = 1;
};

struct RelationReport {
  double res_a_pow_p = 0.0;      // a^p = 1
  double res_b_pow_q = 0.0;      // b^q = 1
  double res_commute = 0.0;      // a s a^-1 s^-1 = 1
  double res_screw = 0.0;        // b a b s^-1 = 1
  double res_abab_baba = 0.0;    // a b a b = b a b a
  double res_tau_fibre = 0.0;    // tau is a fibre translation
  double phi_tau = 0.0;          // its fibre parameter
  double expected_phi_tau = 0.0; // pi - 2 pi/p - 2 pi/q
  bool pass = false;

  double max_residual() const {
    return std::max({res_a_pow_p, res_b_pow_q, res_commute, res_screw, res_abab_baba,
                     res_tau_fibre});
  }
};

namespace detail {

inline GroupGenerators build_generators(const PrismParams& params, int sign_a, int sign_b) {
  GroupGenerators g;
  g.orientation_a = sign_a;
  g.orientation_b = sign_b;
  const double r_vertex = std::atanh(params.b);
  const ProjectivePoint a1 = from_hyperboloid({r_vertex, 0.0, 0.0});
  g.a = rotation_origin(sign_a * 2.0 * std::numbers::pi / params.p);
  g.b_rot = rotation_about_fibre(a1, sign_b * 2.0 * std::numbers::pi / params.q);
  g.s = g.b_rot * g.a * g.b_rot;
  g.tau = g.a * g.b_rot * g.a * g.b_rot;
  return g;
}

// The relation check runs in quadruple precision: conjugating by
// translations with cosh(r) ~ 1e3 amplifies rounding by roughly
// q * e^{4 r_vertex} (about 1e10 for the (20,1000) row), which puts both
// double and long double above the 1e-9 residual bound.
using Quad = __float128;
using QMat4 = std::array<std::array<Quad, 4>, 4>;

inline Quad qabs(Quad x) { return x < 0 ? -x : x; }

inline QMat4 qmat_identity() {
  QMat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1;
  return m;
}

inline QMat4 qmat_mul(const QMat4& a, const QMat4& b) {
  QMat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      const Quad v = a[i][k];
      if (v == 0) continue;
      for (int j = 0; j < 4; ++j) r[i][j] += v * b[k][j];
    }
  return r;
}

inline QMat4 qmat_pow(const QMat4& m, int n) {
  QMat4 r = qmat_identity();
  for (int i = 0; i < n; ++i) r = qmat_mul(r, m);
  return r;
}

inline QMat4 qmat_fibre_rotation(Quad ch, Quad sh, Quad c, Quad s) {
  const QMat4 t = {{{ch, 0, sh, 0}, {0, ch, 0, -sh}, {sh, 0, ch, 0}, {0, -sh, 0, ch}}};
  const QMat4 ti = {{{ch, 0, -sh, 0}, {0, ch, 0, sh}, {-sh, 0, ch, 0}, {0, sh, 0, ch}}};
  const QMat4 rot = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, c, s}, {0, 0, -s, c}}};
  return qmat_mul(qmat_mul(ti, rot), t);
}

inline double qmat_projective_residual(const QMat4& a, const QMat4& b) {
  int bi = 0, bj = 0;
  Quad w = -1;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (qabs(b[i][j]) > w) {
        w = qabs(b[i][j]);
        bi = i;
        bj = j;
      }
  if (b[bi][bj] == 0) return 1.0;
  const Quad kappa = a[bi][bj] / b[bi][bj];
  if (!(kappa > 0)) return 1.0;
  Quad scale = 0, worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      scale = std::max(scale, qabs(a[i][j]));
      worst = std::max(worst, qabs(a[i][j] - kappa * b[i][j]));
    }
  if (scale == 0) return 1.0;
  return static_cast<double>(worst / scale);
}

inline RelationReport check_generators(const PrismParams& params, int sign_a, int sign_b,
                                       double tol) {
  const Quad pi_q = M_PIq;
  const Quad tp = tanq(static_cast<__float128>(pi_q / params.p));
  const Quad tq = tanq(static_cast<__float128>(pi_q / params.q));
  const Quad b_param = sqrtq((1 - tp * tq) / (1 + tp * tq));
  const Quad r_vertex = atanhq(b_param);
  const Quad ch = coshq(r_vertex), sh = sinhq(r_vertex);
  const Quad wa = sign_a * 2 * pi_q / params.p;
  const Quad wb = sign_b * 2 * pi_q / params.q;

  const Quad ca = cosq(wa), sa = sinq(wa);
  const QMat4 a = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, ca, sa}, {0, 0, -sa, ca}}};
  const QMat4 a_inv = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, ca, -sa}, {0, 0, sa, ca}}};
  const QMat4 b = qmat_fibre_rotation(ch, sh, cosq(wb), sinq(wb));
  const QMat4 b_inv = qmat_fibre_rotation(ch, sh, cosq(wb), -sinq(wb));
  const QMat4 s = qmat_mul(qmat_mul(b, a), b);
  const QMat4 s_inv = qmat_mul(qmat_mul(b_inv, a_inv), b_inv);
  const QMat4 tau = qmat_mul(qmat_mul(a, b), qmat_mul(a, b));
  const QMat4 id = qmat_identity();

  RelationReport rep;
  rep.res_a_pow_p = qmat_projective_residual(qmat_pow(a, params.p), id);
  rep.res_b_pow_q = qmat_projective_residual(qmat_pow(b, params.q), id);
  rep.res_commute =
      qmat_projective_residual(qmat_mul(qmat_mul(a, s), qmat_mul(a_inv, s_inv)), id);
  rep.res_screw = qmat_projective_residual(qmat_mul(qmat_mul(b, a), qmat_mul(b, s_inv)), id);
  rep.res_abab_baba = qmat_projective_residual(tau, qmat_mul(qmat_mul(b, a), qmat_mul(b, a)));

  // fibre translation fit of tau
  const Quad phi_tau = atan2q(tau[0][1], tau[0][0]);
  const Quad kappa = hypotq(tau[0][0], tau[0][1]);
  const Quad cp = cosq(phi_tau), sp = sinq(phi_tau);
  const QMat4 ref = {{{cp, sp, 0, 0}, {-sp, cp, 0, 0}, {0, 0, cp, -sp}, {0, 0, sp, cp}}};
  Quad worst = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, qabs(tau[i][j] - kappa * ref[i][j]));
  rep.res_tau_fibre = static_cast<double>(worst / kappa);
  rep.phi_tau = static_cast<double>(phi_tau);
  rep.expected_phi_tau = params.h_periodic;
  rep.pass =
      rep.max_residual() < tol && std::abs(rep.phi_tau - rep.expected_phi_tau) < tol;
  return rep;
}

}  // namespace detail

/// Generators of pq2_1 for the given parameters. Rotation orientations are
/// fixed by requiring the relations to hold with tau = abab a fibre
/// translation by the positive parameter pi - 2pi/p - 2pi/q; the remaining
/// sign combinations are tried in turn if the first fails.
inline GroupGenerators group_generators(const PrismParams& params) {
  static constexpr int kSigns[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
  for (const auto& signs : kSigns) {
    if (detail::check_generators(params, signs[0], signs[1], 1e-9).pass)
      return detail::build_generators(params, signs[0], signs[1]);
  }
  return detail::build_generators(params, 1, 1);  // verify_relations reports the failure
}

/// Numeric verification of the pq2_1 presentation; residuals above the
/// tolerance signal an inconsistent generator construction.
inline RelationReport verify_relations(const PrismParams& params, double tol = 1e-9) {
  const GroupGenerators g = group_generators(params);
  RelationReport rep = detail::check_generators(params, g.orientation_a, g.orientation_b, tol);
  if (!rep.pass) {
    std::ostringstream os;
    os << "verify_relations(" << params.p << "," << params.q
       << "): generator relations failed; max residual = " << rep.max_residual()
       << ", phi_tau = " << rep.phi_tau << " (expected " << rep.expected_phi_tau << ")";
    throw numeric_error(os.str());
  }
  return rep;
}

/// Distance from the origin to the fibre surface over the side curve.
inline CurveDistanceResult distance_to_fibred_curve(const SideCurve& curve,
                                                    const ToleranceConfig& tol = {}) {
  return distance_to_fibred_curve_radius(
      [&curve](double t) { return curve.radius_hyperbolic(t); }, tol);
}

}  // namespace slr
