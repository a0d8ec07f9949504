#pragma once

// Small fixed-size linear algebra for the 4x4 projective machinery.
// Points are row vectors; an isometry acts on the right: p' = p * M.

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>

#include "slr/errors.hpp"

namespace slr {

using Vec4 = std::array<double, 4>;

struct Mat4 {
  // row-major: m[i][j] is row i, column j
  std::array<std::array<double, 4>, 4> m{};

  static Mat4 identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
  }

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }

  Mat4 operator*(const Mat4& o) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        const double a = m[i][k];
        if (a == 0.0) continue;
        for (int j = 0; j < 4; ++j) r.m[i][j] += a * o.m[k][j];
      }
    return r;
  }

  Mat4 operator*(double s) const {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m[i][j] = m[i][j] * s;
    return r;
  }

  double max_abs() const {
    double w = 0.0;
    for (const auto& row : m)
      for (double v : row) w = std::max(w, std::abs(v));
    return w;
  }

  std::pair<int, int> argmax_abs() const {
    int bi = 0, bj = 0;
    double w = -1.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (std::abs(m[i][j]) > w) {
          w = std::abs(m[i][j]);
          bi = i;
          bj = j;
        }
    return {bi, bj};
  }
};

inline Vec4 operator*(const Vec4& v, const Mat4& M) {
  Vec4 r{};
  for (int j = 0; j < 4; ++j)
    r[j] = v[0] * M.m[0][j] + v[1] * M.m[1][j] + v[2] * M.m[2][j] + v[3] * M.m[3][j];
  return r;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Mat4 inverse(const Mat4& a) {
  Mat4 w = a;
  Mat4 inv = Mat4::identity();
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int i = col + 1; i < 4; ++i)
      if (std::abs(w.m[i][col]) > std::abs(w.m[piv][col])) piv = i;
    if (w.m[piv][col] == 0.0) throw numeric_error("singular matrix in inverse()");
    std::swap(w.m[piv], w.m[col]);
    std::swap(inv.m[piv], inv.m[col]);
    const double d = 1.0 / w.m[col][col];
    for (int j = 0; j < 4; ++j) {
      w.m[col][j] *= d;
      inv.m[col][j] *= d;
    }
    for (int i = 0; i < 4; ++i) {
      if (i == col) continue;
      const double f = w.m[i][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        w.m[i][j] -= f * w.m[col][j];
        inv.m[i][j] -= f * inv.m[col][j];
      }
    }
  }
  return inv;
}

inline Mat4 mat_pow(Mat4 base, unsigned long exp) {
  Mat4 r = Mat4::identity();
  while (exp > 0) {
    if (exp & 1u) r = r * base;
    base = base * base;
    exp >>= 1u;
  }
  return r;
}

using Mat3 = std::array<std::array<double, 3>, 3>;

inline double det3(const Mat3& g) {
  return g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) -
         g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
         g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
}

}  // namespace slr
