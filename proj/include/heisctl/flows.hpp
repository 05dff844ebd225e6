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

/// \file flows.hpp
/// Normal-form fields, their constant-control flows in closed form, and the
/// diffeomorphisms that carry a system in its native coordinates onto each normal form.
///
/// Each map conjugates the system field onto its normal form exactly; the
/// z-component signs are fixed by that requirement.

#include <cmath>

#include "heisctl/integrate.hpp"

namespace heisctl {

// ---------------------------------------------------------------------------
// det A = tr A = 0

/// x' = y, y' = u, z' = a x + (2 x u - y^2) / 3.
struct NilpotentField {
  double a = 0.0;
  Point3 operator()(const Point3& p, double u) const {
    return {p.y, u, a * p.x + (2.0 * p.x * u - p.y * p.y) / 3.0};
  }
};

inline Point3 flow_case00(const Point3& p0, double u, double t, double a) {
  const auto& [x0, y0, z0] = p0;
  return {x0 + y0 * t + 0.5 * u * t * t, y0 + u * t,
          z0 + a * (x0 * t + 0.5 * y0 * t * t + u * t * t * t / 6.0) + (2.0 * x0 * u - y0 * y0) * t / 3.0};
}

/// (x, y, z) -> (x, y, z - b x - x y / 3).
inline Point3 conj_map_case00(const Point3& p, double b) { return {p.x, p.y, p.z - b * p.x - p.x * p.y / 3.0}; }
inline Point3 conj_map_case00_inverse(const Point3& p, double b) {
  return {p.x, p.y, p.z + b * p.x + p.x * p.y / 3.0};
}

// ---------------------------------------------------------------------------
// det A != 0, tr A = 0, eta = 0

/// Planar equilibrium v(u) = -u A^{-1} zeta.
inline Vec2 equilibrium_v(const SystemSpec& sys, double u) {
  if (sys.zeros().det_a) fail(ErrorKind::kSingularMatrix, "equilibrium_v needs det A != 0");
  return -u * solve2(sys.a(), sys.zeta());
}

/// Rate at which the fiber over v(u) is translated: u^2 omega(A zeta, zeta) / (2 det A) + u alpha.
inline double drift_rate_p(const SystemSpec& sys, double u) {
  if (sys.zeros().det_a) fail(ErrorKind::kSingularMatrix, "drift_rate_p needs det A != 0");
  return u * u * omega(sys.a() * sys.zeta(), sys.zeta()) / (2.0 * sys.det_a()) + u * sys.alpha();
}

/// z - u omega(v, A zeta) / (2 det A); grows at rate p(u) along constant u
/// when tr A = 0 and eta = 0.
inline double fiber_invariant(const SystemSpec& sys, const Point3& p, double u) {
  return p.z - u * omega(p.planar(), sys.a() * sys.zeta()) / (2.0 * sys.det_a());
}

/// Closed form for tr A = 0, det A != 0, eta = 0.
inline Point3 flow_tracefree(const SystemSpec& sys, const Point3& p0, double u, double t) {
  const Vec2 ve = equilibrium_v(sys, u);
  const Vec2 v = mat2_exp(sys.a(), t) * (p0.planar() - ve) + ve;
  const Vec2 a_zeta = sys.a() * sys.zeta();
  const double z = p0.z + u * omega(v - p0.planar(), a_zeta) / (2.0 * sys.det_a()) + t * drift_rate_p(sys, u);
  return {v.x1, v.x2, z};
}

/// A = mu theta, eta = 0, alpha = 0. With d = v0 - v(u), v(u) = u theta zeta / mu:
///   v(t) = cos(mu t) d + sin(mu t) theta d + v(u)
///   z(t) = z0 + u/(2 mu) [(cos(mu t) - 1) <d, zeta> + sin(mu t) omega(d, zeta)] - t u^2 |zeta|^2 / (2 mu)
inline Point3 flow_case_imag(const Point3& p0, double u, double t, double mu, Vec2 zeta) {
  const Vec2 ve = (u / mu) * theta(zeta);
  const Vec2 d = p0.planar() - ve;
  const double c = std::cos(mu * t);
  const double s = std::sin(mu * t);
  const Vec2 v = c * d + s * theta(d) + ve;
  const double z = p0.z + u / (2.0 * mu) * ((c - 1.0) * dot(d, zeta) + s * omega(d, zeta)) -
                   t * u * u * zeta.norm2() / (2.0 * mu);
  return {v.x1, v.x2, z};
}

// ---------------------------------------------------------------------------
// det A < 0, tr A = 0: x' = mu (x + u), y' = mu (-y + u), z' = u mu y

struct HyperbolicField {
  double mu = 1.0;
  Point3 operator()(const Point3& p, double u) const {
    return {mu * (p.x + u), mu * (-p.y + u), u * mu * p.y};
  }
};

inline Point3 flow_case_hyp(const Point3& p0, double u, double t, double mu) {
  const double ep = std::exp(mu * t);
  const double em = std::exp(-mu * t);
  return {ep * (p0.x + u) - u, em * (p0.y - u) + u,
          p0.z + u * p0.y * (1.0 - em) + u * u * (em + mu * t - 1.0)};
}

namespace detail {
inline void require_zeta_components(double zeta1, double zeta2) {
  if (zeta1 == 0.0 || zeta2 == 0.0) fail(ErrorKind::kZeroZetaComponent, "normal form needs zeta1 * zeta2 != 0");
}
}  // namespace detail

/// From A = diag(mu, -mu), eta = 0, alpha = 0:
/// (x, y, z) -> (mu x / zeta1, mu y / zeta2, mu^2 / (zeta1 zeta2) (x y / 2 - z)).
inline Point3 conj_map_hyp(const Point3& p, double mu, double zeta1, double zeta2) {
  detail::require_zeta_components(zeta1, zeta2);
  return {mu * p.x / zeta1, mu * p.y / zeta2, mu * mu / (zeta1 * zeta2) * (0.5 * p.x * p.y - p.z)};
}
inline Point3 conj_map_hyp_inverse(const Point3& q, double mu, double zeta1, double zeta2) {
  detail::require_zeta_components(zeta1, zeta2);
  const double x = zeta1 * q.x / mu;
  const double y = zeta2 * q.y / mu;
  return {x, y, 0.5 * x * y - q.z * zeta1 * zeta2 / (mu * mu)};
}

// ---------------------------------------------------------------------------
// det A = 0, tr A = mu != 0: x' = mu u, y' = mu (y + u), z' = mu (z + u y + alpha y)

struct DegTraceField {
  double mu = 1.0;
  double alpha = 0.0;
  Point3 operator()(const Point3& p, double u) const {
    return {mu * u, mu * (p.y + u), mu * (p.z + u * p.y + alpha * p.y)};
  }
};

/// Equilibrium w(u) = (-u, u (u + alpha)) of the (y, z) subsystem.
inline Vec2 affine_equilibrium(double u, double alpha) { return {-u, u * (u + alpha)}; }

/// x moves linearly; w = (y, z) follows e^{A(u) t} (w0 - w(u)) + w(u) with
/// e^{A(u) t} = e^{mu t} [[1, 0], [mu (alpha + u) t, 1]].
inline Point3 flow_case_degtrace(const Point3& p0, double u, double t, double mu, double alpha) {
  const Vec2 we = affine_equilibrium(u, alpha);
  const double dy = p0.y - we.x1;
  const double dz = p0.z - we.x2;
  const double e = std::exp(mu * t);
  return {p0.x + mu * u * t, e * dy + we.x1, e * (mu * (alpha + u) * t * dy + dz) + we.x2};
}

/// From A = diag(0, mu), alpha = 0:
/// (x, y, z) -> (mu x / zeta1, mu y / zeta2,
///               mu^2 / (zeta1 zeta2) (x y / 2 - z - eta1 / (mu zeta2) (zeta2 x - zeta1 y))).
/// The normal-form coefficient is then alpha = -eta2 / zeta1.
inline Point3 conj_map_degtrace(const Point3& p, double mu, double zeta1, double zeta2, double eta1) {
  detail::require_zeta_components(zeta1, zeta2);
  if (mu == 0.0) fail(ErrorKind::kInvalidArgument, "conj_map_degtrace needs mu != 0");
  const double shear = eta1 / (mu * zeta2) * (zeta2 * p.x - zeta1 * p.y);
  return {mu * p.x / zeta1, mu * p.y / zeta2, mu * mu / (zeta1 * zeta2) * (0.5 * p.x * p.y - p.z - shear)};
}
inline Point3 conj_map_degtrace_inverse(const Point3& q, double mu, double zeta1, double zeta2, double eta1) {
  detail::require_zeta_components(zeta1, zeta2);
  if (mu == 0.0) fail(ErrorKind::kInvalidArgument, "conj_map_degtrace needs mu != 0");
  const double x = zeta1 * q.x / mu;
  const double y = zeta2 * q.y / mu;
  const double shear = eta1 / (mu * zeta2) * (zeta2 * x - zeta1 * y);
  return {x, y, 0.5 * x * y - shear - q.z * zeta1 * zeta2 / (mu * mu)};
}

/// B'(u) = mu (1, -u) and A(u) B'(u) = mu^2 (1, alpha) are dependent exactly
/// when u = -alpha.
inline double affine_tangency_det(double u, double alpha, double mu) {
  const Vec2 b{mu, -mu * u};
  const Vec2 ab{mu * mu, mu * mu * alpha};
  return omega(b, ab);
}
inline bool affine_tangency(double u, double alpha) { return std::abs(u + alpha) <= 1e-12; }

// ---------------------------------------------------------------------------

/// Composition of constant-control closed-form flows along a piecewise control.
template <class Flow>
Point3 compose_flow(const Flow& flow, Point3 p, const PiecewiseControl& ctrl) {
  for (const auto& s : ctrl.segments()) p = flow(p, s.u, s.duration);
  return p;
}

}  // namespace heisctl
