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

/// \file steering.hpp
/// Two-point steering of the planar part of a normal form. The planar part
/// never depends on the fiber coordinate, so it is a closed system on its own.
///
/// The double integrator is solved by two bang-bang arcs in closed form. Every
/// other planar system goes through multi-segment shooting: N constant
/// segments, parameterized by bounded durations and levels, with
/// Levenberg-Marquardt on the endpoint residual and seeded random restarts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "heisctl/normal_form.hpp"

namespace heisctl {

/// Planar projection of a normal form. For the affine kind the planar part is
/// (y, z) and x is the fiber coordinate; otherwise it is (x, y) with fiber z.
class PlanarView {
 public:
  explicit PlanarView(const NormalForm& nf) : nf_(&nf) {}

  bool fiber_is_x() const { return nf_->kind() == NormalFormKind::kAffine; }
  const NormalForm& normal_form() const { return *nf_; }
  const ControlRange& range() const { return nf_->range(); }

  /// Largest real part of the planar linear part; 0 for the double integrator
  /// and rotations. Errors in the planar state grow like e^{rate t}.
  double growth_rate() const {
    switch (nf_->kind()) {
      case NormalFormKind::kNilpotent: return 0.0;
      case NormalFormKind::kTraceFree: return nf_->params().rotation ? 0.0 : std::abs(nf_->params().mu);
      case NormalFormKind::kHyperbolic:
      case NormalFormKind::kAffine: return std::abs(nf_->params().mu);
    }
    return 0.0;
  }

  Vec2 project(const Point3& p) const { return fiber_is_x() ? Vec2{p.y, p.z} : Vec2{p.x, p.y}; }
  double fiber(const Point3& p) const { return fiber_is_x() ? p.x : p.z; }
  Point3 embed(Vec2 w, double fiber) const {
    return fiber_is_x() ? Point3{fiber, w.x1, w.x2} : Point3{w.x1, w.x2, fiber};
  }

  Vec2 flow(Vec2 w, double u, double t) const { return project(nf_->flow(embed(w, 0.0), u, t)); }
  Vec2 flow(Vec2 w, const PiecewiseControl& ctrl) const { return project(nf_->flow(embed(w, 0.0), ctrl)); }
  /// Change of the fiber coordinate along ctrl; independent of its initial value.
  double fiber_shift(Vec2 w, const PiecewiseControl& ctrl) const { return fiber(nf_->flow(embed(w, 0.0), ctrl)); }

 private:
  const NormalForm* nf_;
};

struct SteeringOptions {
  int segments = 6;
  int restarts = 20;
  int max_iterations = 300;
  double max_duration = 20.0;  // bound on the total duration
  double max_growth = 6.0;     // for unstable planar parts, total duration <= max_growth / rate
  double tolerance = 1e-11;
  std::uint64_t seed = 1;
};

/// Two arcs at the bounds of [lo, hi] taking (x0, y0) to (x1, y1) for
/// x' = y, y' = u, the faster of the feasible orderings.
inline PiecewiseControl steer_double_integrator(Vec2 from, Vec2 to, const ControlRange& range) {
  PiecewiseControl best;
  if (from == to) return best;
  double best_time = std::numeric_limits<double>::infinity();
  for (const auto& [u1, u2] : {std::pair{range.hi(), range.lo()}, std::pair{range.lo(), range.hi()}}) {
    const double coef = 1.0 / (2.0 * u1) - 1.0 / (2.0 * u2);
    const double rhs = to.x1 - from.x1 + from.x2 * from.x2 / (2.0 * u1) - to.x2 * to.x2 / (2.0 * u2);
    const double y_sq = rhs / coef;
    if (y_sq < -1e-14) continue;
    for (const double sign : {1.0, -1.0}) {
      const double y_mid = sign * std::sqrt(std::max(0.0, y_sq));
      const double t1 = (y_mid - from.x2) / u1;
      const double t2 = (to.x2 - y_mid) / u2;
      if (t1 < -1e-14 || t2 < -1e-14) continue;
      if (t1 + t2 < best_time) {
        best_time = t1 + t2;
        best = PiecewiseControl{};
        best.push(std::max(0.0, t1), u1).push(std::max(0.0, t2), u2);
      }
    }
  }
  if (!std::isfinite(best_time)) fail(ErrorKind::kSteeringFailed, "no bang-bang solution");
  return best;
}

namespace detail {

struct ShootingLayout {
  int n;
  double d_max;
  double mid;
  double half;

  PiecewiseControl control(const std::vector<double>& p) const {
    PiecewiseControl c;
    for (int i = 0; i < n; ++i) {
      const double d = d_max / (1.0 + std::exp(-p[2 * i]));
      const double u = mid + half * std::sin(p[2 * i + 1]);
      c.push(d, u);
    }
    return c;
  }
};

}  // namespace detail

/// Generic multi-segment shooting on any planar flow.
inline PiecewiseControl shoot_planar(const std::function<Vec2(Vec2, const PiecewiseControl&)>& flow,
                                     const ControlRange& range, Vec2 from, Vec2 to,
                                     const SteeringOptions& opt = {}) {
  if (from == to) return {};
  const int n = opt.segments;
  const int dim = 2 * n;
  const detail::ShootingLayout layout{n, opt.max_duration / n, 0.5 * (range.lo() + range.hi()),
                                      0.5 * (range.hi() - range.lo())};
  const double tol = opt.tolerance * std::max(1.0, to.norm());
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> log_d(-3.0, 1.0);
  std::uniform_real_distribution<double> level(-std::numbers::pi, std::numbers::pi);

  auto residual = [&](const std::vector<double>& p) { return flow(from, layout.control(p)) - to; };

  double best_norm = std::numeric_limits<double>::infinity();
  PiecewiseControl best;
  for (int restart = 0; restart < opt.restarts; ++restart) {
    std::vector<double> p(dim);
    for (int i = 0; i < n; ++i) {
      p[2 * i] = log_d(rng);
      p[2 * i + 1] = level(rng);
    }
    Vec2 r = residual(p);
    double lambda = 1e-3;
    for (int it = 0; it < opt.max_iterations && r.norm() > tol; ++it) {
      if (!std::isfinite(r.norm())) break;
      // Forward-difference Jacobian, 2 x dim.
      std::vector<Vec2> jac(dim);
      for (int k = 0; k < dim; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(p[k]));
        std::vector<double> q = p;
        q[k] += h;
        jac[k] = (residual(q) - r) / h;
      }
      bool improved = false;
      for (int attempt = 0; attempt < 12 && !improved; ++attempt) {
        // step = -J^T (J J^T + lambda I)^{-1} r
        Mat2 jjt = lambda * Mat2::identity();
        for (const auto& c : jac) jjt = jjt + Mat2{c.x1 * c.x1, c.x1 * c.x2, c.x2 * c.x1, c.x2 * c.x2};
        Vec2 y;
        try {
          y = solve2(jjt, r);
        } catch (const Error&) {
          lambda *= 10.0;
          continue;
        }
        std::vector<double> q = p;
        for (int k = 0; k < dim; ++k) q[k] -= dot(jac[k], y);
        const Vec2 rq = residual(q);
        if (std::isfinite(rq.norm()) && rq.norm() < r.norm()) {
          p = std::move(q);
          r = rq;
          lambda = std::max(lambda / 3.0, 1e-12);
          improved = true;
        } else {
          lambda *= 4.0;
        }
      }
      if (!improved) break;
    }
    if (r.norm() < best_norm) {
      best_norm = r.norm();
      best = layout.control(p);
    }
    if (best_norm <= tol) return best;
  }
  fail(ErrorKind::kSteeringFailed, "shooting residual " + std::to_string(best_norm) + " after " +
                                       std::to_string(opt.restarts) + " restarts");
}

/// Planar steering for a normal form: closed form for the double integrator,
/// shooting otherwise.
inline PiecewiseControl steer_planar(const PlanarView& view, Vec2 from, Vec2 to, const SteeringOptions& opt = {}) {
  if (view.normal_form().kind() == NormalFormKind::kNilpotent) {
    return steer_double_integrator(from, to, view.range());
  }
  SteeringOptions capped = opt;
  if (const double rate = view.growth_rate(); rate > 0.0) {
    capped.max_duration = std::min(opt.max_duration, opt.max_growth / rate);
  }
  return shoot_planar([&view](Vec2 w, const PiecewiseControl& c) { return view.flow(w, c); }, view.range(), from,
                      to, capped);
}

}  // namespace heisctl
