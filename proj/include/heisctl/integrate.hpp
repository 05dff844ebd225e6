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

/// \file integrate.hpp
/// Fixed-step classical RK4 for control-affine fields under piecewise-constant
/// controls. Every switching time is a step endpoint: each segment is split
/// into ceil(duration / h) equal steps.

#include <algorithm>
#include <cmath>
#include <concepts>

#include "heisctl/control.hpp"

namespace heisctl {

/// A field evaluated as f(state, u).
template <class F>
concept ControlField = requires(const F& f, const Point3& p, double u) {
  { f(p, u) } -> std::convertible_to<Point3>;
};

/// Field of a system, without range checks.
struct LcsField {
  SystemSpec sys;
  Point3 operator()(const Point3& p, double u) const { return lcs_field(sys, p, u); }
};

/// The time-reversed field -f; its forward flow is the backward flow of f.
template <ControlField F>
struct Reversed {
  F field;
  Point3 operator()(const Point3& p, double u) const { return -1.0 * field(p, u); }
};

inline constexpr double kDefaultStep = 1e-3;

template <ControlField F>
Point3 rk4_step(const F& f, const Point3& x, double u, double h) {
  const Point3 k1 = f(x, u);
  const Point3 k2 = f(x + (0.5 * h) * k1, u);
  const Point3 k3 = f(x + (0.5 * h) * k2, u);
  const Point3 k4 = f(x + h * k3, u);
  return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace detail {
inline long steps_for(double duration, double h) {
  return std::max(1L, static_cast<long>(std::ceil(duration / h - 1e-9)));
}
}  // namespace detail

/// Endpoint only.
template <ControlField F>
Point3 rk4_endpoint(const F& f, Point3 x, const PiecewiseControl& ctrl, double h = kDefaultStep) {
  if (!(h > 0.0)) fail(ErrorKind::kInvalidArgument, "step must be positive");
  for (const auto& seg : ctrl.segments()) {
    const long n = detail::steps_for(seg.duration, h);
    const double step = seg.duration / static_cast<double>(n);
    for (long i = 0; i < n; ++i) x = rk4_step(f, x, seg.u, step);
  }
  return x;
}

/// Sampled trajectory. `stride` is the output spacing in time; 0 records every
/// step. Segment boundaries and the final time are always recorded.
template <ControlField F>
Trajectory rk4_trajectory(const F& f, Point3 x, const PiecewiseControl& ctrl, double h = kDefaultStep,
                          double stride = 0.0) {
  if (!(h > 0.0)) fail(ErrorKind::kInvalidArgument, "step must be positive");
  Trajectory traj;
  traj.control = ctrl;
  const auto& segs = ctrl.segments();
  traj.samples.push_back({0.0, x, segs.empty() ? 0.0 : segs.front().u});
  double t = 0.0;
  double next_out = stride;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& seg = segs[k];
    const long n = detail::steps_for(seg.duration, h);
    const double step = seg.duration / static_cast<double>(n);
    const double t0 = t;
    for (long i = 1; i <= n; ++i) {
      x = rk4_step(f, x, seg.u, step);
      t = (i == n) ? t0 + seg.duration : t0 + static_cast<double>(i) * step;
      const bool boundary = i == n;
      if (stride <= 0.0 || boundary || t >= next_out - 1e-12) {
        const double level = boundary ? (k + 1 < segs.size() ? segs[k + 1].u : seg.u) : seg.u;
        traj.samples.push_back({t, x, level});
        if (stride > 0.0) {
          while (next_out <= t + 1e-12) next_out += stride;
        }
      }
    }
  }
  return traj;
}

/// Range-checked RK4 flow of a system.
inline Trajectory rk4_flow(const SystemSpec& sys, const Point3& x0, const PiecewiseControl& ctrl,
                           double h = kDefaultStep, double stride = 0.0) {
  ctrl.require_admissible(sys.range());
  return rk4_trajectory(LcsField{sys}, x0, ctrl, h, stride);
}

}  // namespace heisctl
