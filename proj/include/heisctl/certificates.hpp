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

/// \file certificates.hpp
/// Functions that increase along every trajectory of a one-point-set normal
/// form, and a checker that evaluates them along sampled trajectories.
///
///   F = 3 z sigma + y (y^2 - 2 x sigma),  dF/dt = 3 (u - sigma) y^2           (nilpotent form, a = 0)
///   G = z + sigma y + sigma^2 ln(y - sigma), dG/dt = mu (u - sigma) y^2 / (y - sigma)  (hyperbolic form)
///
/// Both need sigma < u for every admissible u, i.e. sigma < u_lo.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "heisctl/control.hpp"

namespace heisctl {

inline constexpr double kMonotoneTolerance = 1e-9;

inline double default_sigma(const ControlRange& range) { return range.lo() - 1.0; }

namespace detail {
inline double checked_sigma(const ControlRange& range, std::optional<double> sigma) {
  const double s = sigma.value_or(default_sigma(range));
  if (!(std::isfinite(s) && s < range.lo())) fail(ErrorKind::kInvalidArgument, "certificate needs sigma < u_lo");
  return s;
}
}  // namespace detail

struct CertificateF {
  double sigma = -2.0;

  static CertificateF make(const ControlRange& range, std::optional<double> sigma = std::nullopt) {
    return {detail::checked_sigma(range, sigma)};
  }

  double operator()(const Point3& p) const { return 3.0 * p.z * sigma + p.y * (p.y * p.y - 2.0 * p.x * sigma); }

  double rate(const Point3& p, double u) const { return 3.0 * (u - sigma) * p.y * p.y; }

  /// F(phi(t)) - F(p0) for constant u: ((u - sigma) / u) [(y0 + u t)^3 - y0^3],
  /// and -3 t y0^2 sigma when u = 0.
  double increment(double y0, double u, double t) const {
    if (u == 0.0) return -3.0 * t * y0 * y0 * sigma;
    const double y1 = y0 + u * t;
    return (u - sigma) / u * (y1 * y1 * y1 - y0 * y0 * y0);
  }
};

struct CertificateG {
  double sigma = -2.0;
  double mu = 1.0;

  static CertificateG make(const ControlRange& range, double mu, std::optional<double> sigma = std::nullopt) {
    if (!(mu > 0.0)) fail(ErrorKind::kInvalidArgument, "certificate G needs mu > 0");
    return {detail::checked_sigma(range, sigma), mu};
  }

  double operator()(const Point3& p) const {
    if (!(p.y > sigma)) fail(ErrorKind::kDomainViolation, "G needs y > sigma");
    return p.z + sigma * p.y + sigma * sigma * std::log(p.y - sigma);
  }

  double rate(const Point3& p, double u) const {
    if (!(p.y > sigma)) fail(ErrorKind::kDomainViolation, "G needs y > sigma");
    return mu * (u - sigma) * p.y * p.y / (p.y - sigma);
  }
};

struct MonotoneReport {
  double min_increment = std::numeric_limits<double>::infinity();
  long violations = 0;
  long steps = 0;
  bool ok() const { return violations == 0; }
};

/// Successive differences of cert along the samples; a difference below
/// -tolerance counts as a violation.
template <class Certificate>
MonotoneReport check_monotone(const Certificate& cert, const Trajectory& traj,
                              double tolerance = kMonotoneTolerance) {
  MonotoneReport report;
  if (traj.samples.empty()) return report;
  double prev = cert(traj.samples.front().state);
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const double cur = cert(traj.samples[k].state);
    const double inc = cur - prev;
    report.min_increment = std::min(report.min_increment, inc);
    if (inc < -tolerance) ++report.violations;
    ++report.steps;
    prev = cur;
  }
  return report;
}

}  // namespace heisctl
