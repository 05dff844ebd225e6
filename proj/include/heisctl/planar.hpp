// Copyright 2026 The heisctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/// \file planar.hpp
/// Small exact linear algebra on R^2: the symplectic form, the quarter turn,
/// 2x2 matrix exponentials in closed form and eigen-type dispatch.

#include <algorithm>
#include <cmath>
#include <string>

#include "heisctl/error.hpp"

namespace heisctl {

namespace detail {
inline double require_finite(double value, const char* what) {
  if (!std::isfinite(value)) fail(ErrorKind::kInvalidArgument, std::string("non-finite ") + what);
  return value;
}
}  // namespace detail

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  constexpr Vec2() = default;
  Vec2(double a, double b)
      : x1(detail::require_finite(a, "Vec2 entry")), x2(detail::require_finite(b, "Vec2 entry")) {}

  double norm2() const { return x1 * x1 + x2 * x2; }
  double norm() const { return std::hypot(x1, x2); }
  bool is_zero() const { return x1 == 0.0 && x2 == 0.0; }

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend Vec2 operator*(Vec2 a, double s) { return s * a; }
  friend Vec2 operator/(Vec2 a, double s) { return {a.x1 / s, a.x2 / s}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

/// omega(v, w) = det(v | w).
inline double omega(Vec2 v, Vec2 w) { return v.x1 * w.x2 - v.x2 * w.x1; }

/// Counter-clockwise quarter turn; omega(v, theta(w)) equals <v, w>.
inline Vec2 theta(Vec2 v) { return {-v.x2, v.x1}; }

struct Mat2 {
  double a11 = 0.0, a12 = 0.0;
  double a21 = 0.0, a22 = 0.0;

  constexpr Mat2() = default;
  Mat2(double m11, double m12, double m21, double m22)
      : a11(detail::require_finite(m11, "Mat2 entry")),
        a12(detail::require_finite(m12, "Mat2 entry")),
        a21(detail::require_finite(m21, "Mat2 entry")),
        a22(detail::require_finite(m22, "Mat2 entry")) {}

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }
  /// Matrix of theta.
  static Mat2 rotation_generator() { return {0.0, -1.0, 1.0, 0.0}; }
  static Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  /// Matrix whose columns are c1 and c2.
  static Mat2 from_columns(Vec2 c1, Vec2 c2) { return {c1.x1, c2.x1, c1.x2, c2.x2}; }

  double det() const { return a11 * a22 - a12 * a21; }
  double tr() const { return a11 + a22; }
  double frobenius() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Vec2 col1() const { return {a11, a21}; }
  Vec2 col2() const { return {a12, a22}; }

  friend Vec2 operator*(const Mat2& m, Vec2 v) {
    return {m.a11 * v.x1 + m.a12 * v.x2, m.a21 * v.x1 + m.a22 * v.x2};
  }
  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a11 * n.a11 + m.a12 * n.a21, m.a11 * n.a12 + m.a12 * n.a22,
            m.a21 * n.a11 + m.a22 * n.a21, m.a21 * n.a12 + m.a22 * n.a22};
  }
  friend Mat2 operator+(const Mat2& m, const Mat2& n) {
    return {m.a11 + n.a11, m.a12 + n.a12, m.a21 + n.a21, m.a22 + n.a22};
  }
  friend Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a11 - n.a11, m.a12 - n.a12, m.a21 - n.a21, m.a22 - n.a22};
  }
  friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a11, s * m.a12, s * m.a21, s * m.a22}; }
  friend bool operator==(const Mat2&, const Mat2&) = default;
};

inline double max_abs_diff(const Mat2& m, const Mat2& n) {
  return std::max({std::abs(m.a11 - n.a11), std::abs(m.a12 - n.a12), std::abs(m.a21 - n.a21),
                   std::abs(m.a22 - n.a22)});
}

/// Singularity threshold used by every internal solve.
inline double singular_tolerance(const Mat2& m) {
  const double n = m.frobenius();
  return 1e-12 * std::max(1.0, n * n);
}

inline bool is_singular(const Mat2& m) { return std::abs(m.det()) <= singular_tolerance(m); }

/// Solves m x = b by Cramer's rule.
inline Vec2 solve2(const Mat2& m, Vec2 b) {
  const double d = m.det();
  if (std::abs(d) <= singular_tolerance(m)) {
    fail(ErrorKind::kSingularMatrix, "solve2: |det| = " + std::to_string(std::abs(d)));
  }
  return {(b.x1 * m.a22 - m.a12 * b.x2) / d, (m.a11 * b.x2 - m.a21 * b.x1) / d};
}

inline Mat2 inverse(const Mat2& m) {
  const double d = m.det();
  if (std::abs(d) <= singular_tolerance(m)) fail(ErrorKind::kSingularMatrix, "inverse of a singular matrix");
  return {m.a22 / d, -m.a12 / d, -m.a21 / d, m.a11 / d};
}

/// e^{tM}. M = sI + N with N traceless, so N^2 = q I with q = disc/4 and the
/// exponential of N is cosh/cos/linear depending on the sign of q.
inline Mat2 mat2_exp(const Mat2& m, double t) {
  detail::require_finite(t, "time");
  const double s = 0.5 * m.tr();
  const Mat2 n = m - s * Mat2::identity();
  const double q = -n.det();
  double c = 1.0;
  double k = t;  // coefficient of N
  if (q > 0.0) {
    const double r = std::sqrt(q);
    c = std::cosh(r * t);
    k = (r * t == 0.0) ? t : std::sinh(r * t) / r;
  } else if (q < 0.0) {
    const double r = std::sqrt(-q);
    c = std::cos(r * t);
    k = (r * t == 0.0) ? t : std::sin(r * t) / r;
  }
  const double scale = std::exp(s * t);
  return scale * (c * Mat2::identity() + k * n);
}

enum class SpectrumKind { kRealPair, kPureImaginaryPair, kComplexPair, kDefective };

inline std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::kRealPair: return "real-pair";
    case SpectrumKind::kPureImaginaryPair: return "pure-imaginary-pair";
    case SpectrumKind::kComplexPair: return "complex-pair";
    case SpectrumKind::kDefective: return "defective";
  }
  return "unknown";
}

/// Eigenvalues lambda = re +- i*im for complex kinds; lambda1, lambda2 for the
/// real pair (lambda1 >= lambda2); a single value in lambda1 when defective.
struct Spectrum {
  SpectrumKind kind = SpectrumKind::kRealPair;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double re = 0.0;
  double im = 0.0;
};

inline constexpr double kEigenTolerance = 1e-10;

inline Spectrum eig2(const Mat2& m) {
  const double tr = m.tr();
  const double det = m.det();
  const double disc = tr * tr - 4.0 * det;
  Spectrum out;
  if (std::abs(disc) <= kEigenTolerance) {
    const double s = 0.5 * tr;
    const Mat2 n = m - s * Mat2::identity();
    if (n.frobenius() <= std::sqrt(kEigenTolerance)) {
      out.kind = SpectrumKind::kRealPair;
      out.lambda1 = out.lambda2 = s;
    } else {
      out.kind = SpectrumKind::kDefective;
      out.lambda1 = out.lambda2 = s;
    }
    return out;
  }
  if (disc > 0.0) {
    const double r = std::sqrt(disc);
    out.kind = SpectrumKind::kRealPair;
    // Avoid cancellation in the smaller root.
    const double big = 0.5 * (tr + std::copysign(r, tr == 0.0 ? 1.0 : tr));
    const double small = big != 0.0 ? det / big : 0.5 * (tr - r);
    out.lambda1 = std::max(big, small);
    out.lambda2 = std::min(big, small);
    return out;
  }
  out.re = 0.5 * tr;
  out.im = 0.5 * std::sqrt(-disc);
  out.kind = std::abs(tr) <= kEigenTolerance ? SpectrumKind::kPureImaginaryPair : SpectrumKind::kComplexPair;
  return out;
}

/// Unit eigenvector for a real eigenvalue lambda of m, sign-normalised so the
/// largest-magnitude component is positive.
inline Vec2 eigenvector(const Mat2& m, double lambda) {
  const Vec2 row1{m.a11 - lambda, m.a12};
  const Vec2 row2{m.a21, m.a22 - lambda};
  const Vec2 row = row1.norm2() >= row2.norm2() ? row1 : row2;
  Vec2 v = row.norm2() == 0.0 ? Vec2{1.0, 0.0} : Vec2{-row.x2, row.x1};
  v = v / v.norm();
  const double lead = std::abs(v.x1) >= std::abs(v.x2) ? v.x1 : v.x2;
  return lead < 0.0 ? -v : v;
}

}  // namespace heisctl
