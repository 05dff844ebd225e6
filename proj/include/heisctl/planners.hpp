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

/// \file planners.hpp
/// Constructive steering along fibers, built from planar steering arcs,
/// constant-control dwells, and loops. All plans live in normal-form
/// coordinates; because every coordinate change keeps u, the same control
/// drives the original system between the preimages of the endpoints.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "heisctl/steering.hpp"

namespace heisctl {

struct Plan {
  PiecewiseControl control;
  Point3 start;
  Point3 target;
  Point3 achieved;
  double error = 0.0;
  double radius = 0.0;  // max |state| along the verification run
  std::uint64_t seed = 0;
  double seconds = 0.0;
};

struct PlanOptions {
  SteeringOptions steering;
  double min_dwell = 0.1;
  double rho_fraction = 0.9;  // loop level for plan_fiber_imag, as a fraction of u^*
  double verify_step = 1e-4;
};

/// Integrates plan.control from plan.start with RK4 at the verification step
/// and fills achieved, error and radius.
template <ControlField F>
void verify_plan(Plan& plan, const F& field, double h = 1e-4) {
  Point3 x = plan.start;
  double radius = x.norm();
  for (const auto& seg : plan.control.segments()) {
    const long n = detail::steps_for(seg.duration, h);
    const double step = seg.duration / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      x = rk4_step(field, x, seg.u, step);
      radius = std::max(radius, x.norm());
    }
  }
  plan.achieved = x;
  plan.error = distance(plan.achieved, plan.target);
  plan.radius = radius;
}

namespace detail {

inline void require_kind(const NormalForm& nf, NormalFormKind kind, const char* who) {
  if (nf.kind() != kind) {
    fail(ErrorKind::kInvalidArgument, std::string(who) + " needs the " + to_string(kind) + " normal form, got " +
                                          to_string(nf.kind()));
  }
}

inline Plan finish(const NormalForm& nf, PiecewiseControl ctrl, Point3 start, Point3 target, const PlanOptions& opt,
                   std::chrono::steady_clock::time_point t0) {
  ctrl.require_admissible(nf.range());
  Plan plan;
  plan.control = std::move(ctrl);
  plan.start = start;
  plan.target = target;
  plan.seed = opt.steering.seed;
  verify_plan(plan, NormalFormField{&nf}, opt.verify_step);
  plan.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return plan;
}

/// Newton correction of one segment's duration so that the closed-form
/// endpoint fiber coordinate hits the target. rate is d(fiber)/d(duration).
inline void tune_duration(const PlanarView& view, PiecewiseControl& ctrl, std::size_t index, Vec2 w0, double fiber0,
                          double fiber_target, double rate) {
  for (int it = 0; it < 3; ++it) {
    const double got = fiber0 + view.fiber_shift(w0, ctrl);
    const double err = got - fiber_target;
    if (std::abs(err) < 1e-14 * std::max(1.0, std::abs(fiber_target))) return;
    std::vector<Segment> segs = ctrl.segments();
    segs[index].duration = std::max(segs[index].duration - err / rate, 1e-12);
    ctrl = PiecewiseControl(segs);
  }
}

}  // namespace detail

/// Nilpotent form with a != 0: (0, 0, z1) -> (0, 0, z2) by
/// steer to (x_v, 0) with a x_v > 0, dwell (z rises), steer to (-x_v, 0),
/// dwell (z falls), steer back to the origin.
inline Plan plan_fiber_case00(const NormalForm& nf, double z1, double z2, const PlanOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_kind(nf, NormalFormKind::kNilpotent, "plan_fiber_case00");
  const double a = nf.params().a;
  if (a == 0.0) fail(ErrorKind::kSteeringFailed, "a = 0: the fibers are one-point sets");
  const Point3 start{0, 0, z1};
  const Point3 target{0, 0, z2};
  if (z1 == z2) return detail::finish(nf, {}, start, target, opt, t0);

  const PlanarView view(nf);
  const ControlRange& range = nf.range();
  const double xv = std::copysign(0.5, a);
  const Vec2 origin{};
  const Vec2 right{xv, 0};
  const Vec2 left{-xv, 0};
  const PiecewiseControl arc_a = steer_double_integrator(origin, right, range);
  const PiecewiseControl arc_c = steer_double_integrator(right, left, range);
  const PiecewiseControl arc_e = steer_double_integrator(left, origin, range);
  const double arcs = view.fiber_shift(origin, arc_a) + view.fiber_shift(right, arc_c) + view.fiber_shift(left, arc_e);
  const double rate = a * xv;  // > 0 at (x_v, 0); the opposite at (-x_v, 0)
  const double r = (z2 - z1 - arcs) / rate;
  const double t_b = opt.min_dwell + std::max(r, 0.0);
  const double t_d = opt.min_dwell + std::max(-r, 0.0);

  PiecewiseControl ctrl;
  ctrl.append(arc_a).push(t_b, 0.0).append(arc_c);
  const std::size_t dwell_b = ctrl.size() - arc_c.size() - 1;
  ctrl.push(t_d, 0.0).append(arc_e);
  detail::tune_duration(view, ctrl, dwell_b, origin, z1, z2, rate);
  return detail::finish(nf, std::move(ctrl), start, target, opt, t0);
}

/// Trace-free form (det A != 0, eta = 0): (0, z1) -> (0, z2) by steering to
/// the equilibrium v(u), dwelling while the fiber drifts at rate p(u), and
/// steering back. With alpha = 0, p has one sign near u = 0 and the other
/// direction is refused. When the arcs alone overshoot, a second excursion to
/// an equilibrium drifting the other way absorbs the difference.
inline Plan plan_fiber_det(const NormalForm& nf, double z1, double z2, const PlanOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_kind(nf, NormalFormKind::kTraceFree, "plan_fiber_det");
  const SystemSpec& sys = nf.reduced();
  const Point3 start{0, 0, z1};
  const Point3 target{0, 0, z2};
  if (z1 == z2) return detail::finish(nf, {}, start, target, opt, t0);

  const double delta = z2 - z1;
  const double curvature = larc_factor(sys) / (2.0 * sys.det_a());
  if (sys.alpha() == 0.0 && delta * curvature < 0.0) {
    fail(ErrorKind::kDirectionUnreachable, "alpha = 0: the fiber drift p(u) = u^2 omega(A zeta, zeta) / (2 det A) "
                                           "has a single sign");
  }

  const PlanarView view(nf);
  const ControlRange& range = sys.range();
  const Vec2 origin{};
  struct Leg {
    PiecewiseControl in;
    PiecewiseControl out;
    double u;
    double p;
    double arcs;
  };
  std::vector<Leg> legs;
  for (const double frac : {0.5, 0.8, 0.3, 0.95, 0.15}) {
    for (const double side : {1.0, -1.0}) {
      const double u = frac * range.bound(side);
      const double p = drift_rate_p(sys, u);
      if (std::abs(p) < 1e-6) continue;
      const Vec2 ve = equilibrium_v(sys, u);
      try {
        Leg leg{steer_planar(view, origin, ve, opt.steering), steer_planar(view, ve, origin, opt.steering), u, p, 0.0};
        leg.arcs = view.fiber_shift(origin, leg.in) + view.fiber_shift(ve, leg.out);
        legs.push_back(std::move(leg));
      } catch (const Error&) {
      }
    }
  }

  // one excursion
  std::optional<PiecewiseControl> best;
  std::size_t best_dwell = 0;
  double best_rate = 0.0;
  for (const auto& leg : legs) {
    const double t1 = (delta - leg.arcs) / leg.p;
    if (t1 < 0.0) continue;
    PiecewiseControl ctrl = leg.in;
    ctrl.push(std::max(t1, 1e-9), leg.u);
    const std::size_t dwell = ctrl.size() - 1;
    ctrl.append(leg.out);
    if (!best || ctrl.total_duration() < best->total_duration()) {
      best = std::move(ctrl);
      best_dwell = dwell;
      best_rate = leg.p;
    }
  }

  // two excursions, one drifting up and one down
  if (!best) {
    const auto up = std::find_if(legs.begin(), legs.end(), [](const Leg& l) { return l.p > 0.0; });
    const auto down = std::find_if(legs.begin(), legs.end(), [](const Leg& l) { return l.p < 0.0; });
    if (up == legs.end() || down == legs.end()) fail(ErrorKind::kSteeringFailed, "no equilibrium with a usable drift rate");
    const double rest = delta - up->arcs - down->arcs - opt.min_dwell * (up->p + down->p);
    const double t_up = opt.min_dwell + std::max(rest, 0.0) / up->p;
    const double t_down = opt.min_dwell + std::max(-rest, 0.0) / -down->p;
    PiecewiseControl ctrl = up->in;
    ctrl.push(t_up, up->u).append(up->out).append(down->in).push(t_down, down->u);
    best_dwell = ctrl.size() - 1;
    best_rate = down->p;
    if (rest > 0.0) {
      best_dwell = up->in.size();
      best_rate = up->p;
    }
    ctrl.append(down->out);
    best = std::move(ctrl);
  }
  detail::tune_duration(view, *best, best_dwell, origin, z1, z2, best_rate);
  return detail::finish(nf, std::move(*best), start, target, opt, t0);
}

struct LoopInfo {
  PiecewiseControl loop;  // one closed planar loop through v_star
  Vec2 v_star;
  double rho = 0.0;
  double dz = 0.0;        // change of z over one loop
};

/// A = mu theta: a half turn around v(rho) with u = rho, then u = 0 until the
/// rotation about the origin closes the loop. v_star = v(rho) + s zeta is on
/// the bisector of 0 and 2 v(rho), so both pieces meet.
inline LoopInfo rotation_loop(const NormalForm& nf, double rho) {
  detail::require_kind(nf, NormalFormKind::kTraceFree, "rotation_loop");
  if (!nf.params().rotation) fail(ErrorKind::kInvalidArgument, "rotation_loop needs A = mu theta");
  const SystemSpec& sys = nf.reduced();
  const double mu = nf.params().mu;
  const Vec2 zeta = sys.zeta();
  const Vec2 ve = equilibrium_v(sys, rho);
  LoopInfo info;
  info.rho = rho;
  info.v_star = ve - (rho * std::numbers::pi / mu) * zeta;
  const Vec2 after_half = 2.0 * ve - info.v_star;
  // angle swept by u = 0, in the direction of rotation (the sign of mu)
  double angle = std::atan2(omega(after_half, info.v_star), dot(after_half, info.v_star));
  if (mu < 0.0) angle = -angle;
  if (angle <= 0.0) angle += 2.0 * std::numbers::pi;
  info.loop.push(std::numbers::pi / std::abs(mu), rho).push(angle / std::abs(mu), 0.0);
  const PlanarView view(nf);
  info.dz = view.fiber_shift(info.v_star, info.loop);
  return info;
}

/// A = mu theta, alpha = 0: loops move z one way, the dwell at v(rho) the
/// other, so every (0, z1) -> (0, z2) is reachable.
inline Plan plan_fiber_imag(const NormalForm& nf, double z_from, double z_to, const PlanOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_kind(nf, NormalFormKind::kTraceFree, "plan_fiber_imag");
  if (!nf.params().rotation) fail(ErrorKind::kInvalidArgument, "plan_fiber_imag needs A = mu theta");
  const SystemSpec& sys = nf.reduced();
  const Point3 start{0, 0, z_from};
  const Point3 target{0, 0, z_to};
  if (z_from == z_to) return detail::finish(nf, {}, start, target, opt, t0);

  const double rho = opt.rho_fraction * sys.range().hi();
  const LoopInfo info = rotation_loop(nf, rho);
  const double p = drift_rate_p(sys, rho);
  if (info.dz * p >= 0.0) fail(ErrorKind::kSteeringFailed, "loop and dwell move the fiber the same way");

  const PlanarView view(nf);
  const Vec2 origin{};
  const Vec2 ve = equilibrium_v(sys, rho);
  const PiecewiseControl arc_in = steer_planar(view, origin, info.v_star, opt.steering);
  const PiecewiseControl arc_mid = steer_planar(view, info.v_star, ve, opt.steering);
  const PiecewiseControl arc_out = steer_planar(view, ve, origin, opt.steering);
  const double arcs =
      view.fiber_shift(origin, arc_in) + view.fiber_shift(info.v_star, arc_mid) + view.fiber_shift(ve, arc_out);
  const double rest = z_to - z_from - arcs;
  // n loops of dz plus a dwell t >= min_dwell at rate p: n dz + t p = rest.
  const double need = (rest - opt.min_dwell * p) / info.dz;
  const long loops = std::max(0L, static_cast<long>(std::ceil(need)));
  const double t = (rest - static_cast<double>(loops) * info.dz) / p;

  PiecewiseControl ctrl = arc_in;
  for (long i = 0; i < loops; ++i) ctrl.append(info.loop);
  ctrl.append(arc_mid).push(t, rho);
  const std::size_t dwell = ctrl.size() - 1;
  ctrl.append(arc_out);
  detail::tune_duration(view, ctrl, dwell, origin, z_from, z_to, p);
  return detail::finish(nf, std::move(ctrl), start, target, opt, t0);
}

/// Picks u1, u2 with mu u1 > 0 > mu u2, inside Omega and away from -alpha.
inline std::pair<double, double> affine_levels(const NormalForm& nf) {
  const double mu = nf.params().mu;
  const double alpha = nf.params().alpha;
  const ControlRange& range = nf.range();
  auto pick = [&](double side) {
    for (const double frac : {0.5, 0.7, 0.3, 0.85, 0.2}) {
      const double u = frac * range.bound(side);
      if (std::abs(u + alpha) >= 0.1) return u;
    }
    fail(ErrorKind::kSteeringFailed, "no control level away from -alpha");
  };
  const double s = mu > 0.0 ? 1.0 : -1.0;
  return {pick(s), pick(-s)};
}

/// Affine form: (x_from, w(u1)) -> (x_to, w(u1)) by dwelling at w(u1) (x moves
/// with speed mu u1), steering to w(u2), dwelling there (x moves back), and
/// steering home.
inline Plan plan_fiber_degtrace(const NormalForm& nf, double x_from, double x_to, const PlanOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_kind(nf, NormalFormKind::kAffine, "plan_fiber_degtrace");
  const double mu = nf.params().mu;
  const double alpha = nf.params().alpha;
  const auto [u1, u2] = affine_levels(nf);
  const Vec2 w1 = affine_equilibrium(u1, alpha);
  const Vec2 w2 = affine_equilibrium(u2, alpha);
  const PlanarView view(nf);
  const Point3 start = view.embed(w1, x_from);
  const Point3 target = view.embed(w1, x_to);
  if (x_from == x_to) return detail::finish(nf, {}, start, target, opt, t0);

  const PiecewiseControl arc_b = steer_planar(view, w1, w2, opt.steering);
  const PiecewiseControl arc_d = steer_planar(view, w2, w1, opt.steering);
  const double arcs = view.fiber_shift(w1, arc_b) + view.fiber_shift(w2, arc_d);
  const double r = x_to - x_from - arcs;
  const double t_a = (opt.min_dwell + std::max(r, 0.0)) / (mu * u1);
  const double t_c = (opt.min_dwell + std::max(-r, 0.0)) / (-mu * u2);

  PiecewiseControl ctrl;
  ctrl.push(t_a, u1).append(arc_b).push(t_c, u2);
  // w(u2) is unstable when mu > 0: aim the last arc from where the dwell
  // really ends. The first dwell sits on w(u1) exactly, so retuning it later
  // leaves the planar part alone.
  const Vec2 w_end = view.flow(w1, ctrl);
  ctrl.append(steer_planar(view, w_end, w1, opt.steering));
  detail::tune_duration(view, ctrl, 0, w1, x_from, x_to, mu * u1);
  return detail::finish(nf, std::move(ctrl), start, target, opt, t0);
}

/// Base point of the fiber used by plan_between, and the fiber planner.
inline Vec2 fiber_base(const NormalForm& nf) {
  if (nf.kind() == NormalFormKind::kAffine) return affine_equilibrium(affine_levels(nf).first, nf.params().alpha);
  return {};
}

inline Plan plan_fiber(const NormalForm& nf, double from, double to, const PlanOptions& opt = {}) {
  switch (nf.kind()) {
    case NormalFormKind::kNilpotent: return plan_fiber_case00(nf, from, to, opt);
    case NormalFormKind::kAffine: return plan_fiber_degtrace(nf, from, to, opt);
    case NormalFormKind::kTraceFree:
      if (nf.params().rotation && nf.params().alpha == 0.0) return plan_fiber_imag(nf, from, to, opt);
      return plan_fiber_det(nf, from, to, opt);
    case NormalFormKind::kHyperbolic: break;
  }
  fail(ErrorKind::kSteeringFailed, "the fibers of this normal form are one-point sets");
}

/// Point to point in normal coordinates: planar arc to the fiber base, a
/// fiber plan, and a planar arc to the target.
inline Plan plan_between(const NormalForm& nf, const Point3& from, const Point3& to, const PlanOptions& opt = {}) {
  const auto t0 = std::chrono::steady_clock::now();
  if (from == to) return detail::finish(nf, {}, from, to, opt, t0);
  const PlanarView view(nf);
  const Vec2 base = fiber_base(nf);
  const PiecewiseControl arc_in = steer_planar(view, view.project(from), base, opt.steering);
  const PiecewiseControl arc_out = steer_planar(view, base, view.project(to), opt.steering);
  const double f1 = view.fiber(from) + view.fiber_shift(view.project(from), arc_in);
  const double f2 = view.fiber(to) - view.fiber_shift(base, arc_out);
  const Plan middle = plan_fiber(nf, f1, f2, opt);
  PiecewiseControl ctrl = arc_in;
  ctrl.append(middle.control).append(arc_out);
  return detail::finish(nf, std::move(ctrl), from, to, opt, t0);
}

}  // namespace heisctl
