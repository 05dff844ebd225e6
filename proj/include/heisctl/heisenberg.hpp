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

/// \file heisenberg.hpp
/// The Heisenberg group in exponential coordinates (v, z) in R^2 x R, its Lie
/// algebra, derivations and automorphisms. In these coordinates exp is the
/// identity, so group automorphisms and algebra automorphisms share one 3x3
/// matrix.

#include <Eigen/Dense>
#include <cmath>
#include <ostream>

#include "heisctl/planar.hpp"

namespace heisctl {

/// A state in R^3. Used for group points as well as normal-form coordinates,
/// which are not group elements.
struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point3 operator*(double s, const Point3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Point3&, const Point3&) = default;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double max_abs() const { return std::max({std::abs(x), std::abs(y), std::abs(z)}); }
  Vec2 planar() const { return {x, y}; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

inline std::ostream& operator<<(std::ostream& out, const Point3& p) {
  return out << "(" << p.x << ", " << p.y << ", " << p.z << ")";
}

inline Eigen::Vector3d to_eigen(const Point3& p) { return {p.x, p.y, p.z}; }
inline Point3 from_eigen(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

struct GroupElement {
  Vec2 v;
  double z = 0.0;

  static GroupElement identity() { return {}; }
  GroupElement inverse() const { return {-v, -z}; }
  Point3 point() const { return {v.x1, v.x2, z}; }
  static GroupElement from_point(const Point3& p) { return {Vec2{p.x, p.y}, p.z}; }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// (v1, z1) * (v2, z2) = (v1 + v2, z1 + z2 + omega(v1, v2) / 2).
inline GroupElement group_mul(const GroupElement& g, const GroupElement& h) {
  return {g.v + h.v, g.z + h.z + 0.5 * omega(g.v, h.v)};
}

struct AlgebraElement {
  Vec2 zeta;
  double alpha = 0.0;

  Point3 point() const { return {zeta.x1, zeta.x2, alpha}; }
  static AlgebraElement from_point(const Point3& p) { return {Vec2{p.x, p.y}, p.z}; }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;
};

inline AlgebraElement bracket(const AlgebraElement& a, const AlgebraElement& b) {
  return {Vec2{}, omega(a.zeta, b.zeta)};
}

/// Tangent value of the left-invariant field Z at g: (zeta, alpha + omega(v, zeta) / 2).
inline Point3 left_invariant_field(const AlgebraElement& z, const GroupElement& g) {
  return {z.zeta.x1, z.zeta.x2, z.alpha + 0.5 * omega(g.v, z.zeta)};
}

/// D = [[A, 0], [eta^T, tr A]]. Only (A, eta) are stored.
struct Derivation {
  Mat2 a;
  Vec2 eta;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m;
    m << a.a11, a.a12, 0.0, a.a21, a.a22, 0.0, eta.x1, eta.x2, a.tr();
    return m;
  }
  bool is_zero() const { return a == Mat2::zero() && eta.is_zero(); }
};

/// (A v, <eta, v> + tr A * z).
inline Point3 derivation_apply(const Derivation& d, const Point3& p) {
  const Vec2 v{p.x, p.y};
  const Vec2 av = d.a * v;
  return {av.x1, av.x2, dot(d.eta, v) + d.a.tr() * p.z};
}

inline AlgebraElement derivation_apply(const Derivation& d, const AlgebraElement& z) {
  return AlgebraElement::from_point(derivation_apply(d, z.point()));
}

/// D[X, Y] - [DX, Y] - [X, DY] (zero for a derivation).
inline Point3 leibniz_defect(const Derivation& d, const AlgebraElement& x, const AlgebraElement& y) {
  const Point3 lhs = derivation_apply(d, bracket(x, y)).point();
  const Point3 rhs = bracket(derivation_apply(d, x), y).point() + bracket(x, derivation_apply(d, y)).point();
  return lhs - rhs;
}

/// Psi = [[P, 0], [xi^T, det P]].
class Automorphism {
 public:
  Automorphism() : p_(Mat2::identity()) {}
  Automorphism(const Mat2& p, Vec2 xi) : p_(p), xi_(xi) {
    if (!(std::abs(p.det()) > 0.0)) fail(ErrorKind::kInvalidArgument, "automorphism needs det P != 0");
  }

  static Automorphism identity() { return {}; }

  const Mat2& p() const { return p_; }
  Vec2 xi() const { return xi_; }

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d m;
    m << p_.a11, p_.a12, 0.0, p_.a21, p_.a22, 0.0, xi_.x1, xi_.x2, p_.det();
    return m;
  }

  Point3 apply(const Point3& q) const {
    const Vec2 v{q.x, q.y};
    const Vec2 pv = p_ * v;
    return {pv.x1, pv.x2, dot(xi_, v) + p_.det() * q.z};
  }
  GroupElement apply(const GroupElement& g) const { return GroupElement::from_point(apply(g.point())); }
  AlgebraElement apply(const AlgebraElement& z) const { return AlgebraElement::from_point(apply(z.point())); }

  Automorphism inverse() const {
    const Mat2 pinv = heisctl::inverse(p_);
    return {pinv, -(1.0 / p_.det()) * (pinv.transpose() * xi_)};
  }

  /// (this o other)(g) = this(other(g)).
  Automorphism compose(const Automorphism& other) const {
    const Mat2 p = p_ * other.p_;
    const Vec2 xi = other.p_.transpose() * xi_ + p_.det() * other.xi_;
    return {p, xi};
  }

 private:
  Mat2 p_;
  Vec2 xi_;
};

/// Block form of P D P^{-1}: top block P A P^{-1} and
/// eta_hat = (P^{-1})^T ((A - tr A I)^T xi + det P eta).
inline Derivation conjugate_derivation(const Automorphism& psi, const Derivation& d) {
  const Mat2& p = psi.p();
  const Mat2 pinv = inverse(p);
  const Mat2 shifted = d.a - d.a.tr() * Mat2::identity();
  const Vec2 eta_hat = pinv.transpose() * (shifted.transpose() * psi.xi() + p.det() * d.eta);
  return {p * d.a * pinv, eta_hat};
}

}  // namespace heisctl
