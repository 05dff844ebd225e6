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

/// \file reachability.hpp
/// Monte-Carlo orbit clouds and numerical verification of a classification.
///
/// Sampling law: the segment count is 1 + Geometric(1/6) (mean 6), levels are
/// uniform on Omega, and the horizon is cut at sorted uniform points. Sample i
/// draws from its own stream seeded with splitmix64(splitmix64(seed) + i), so a
/// cloud does not depend on evaluation order and nearby seeds share no streams.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "heisctl/certificates.hpp"
#include "heisctl/classify.hpp"
#include "heisctl/planners.hpp"

namespace heisctl {

enum class Direction { kForward, kBackward };

inline std::string to_string(Direction d) { return d == Direction::kForward ? "forward" : "backward"; }

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct SamplingLaw {
  double mean_segments = 6.0;
  double step = 1e-2;                // RK4 step for cloud points
  std::optional<double> fixed_level;  // every segment at this level when set
};

struct OrbitCloud {
  Point3 base;
  Direction direction = Direction::kForward;
  double horizon = 0.0;
  std::vector<Point3> points;
  std::uint64_t seed = 0;
  SamplingLaw law;
};

/// One random admissible control of total duration horizon.
template <class Rng>
PiecewiseControl sample_control(Rng& rng, const ControlRange& range, double horizon, const SamplingLaw& law = {}) {
  std::geometric_distribution<int> extra(1.0 / law.mean_segments);
  const int n = 1 + extra(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cuts(n - 1);
  for (auto& c : cuts) c = horizon * unit(rng);
  std::sort(cuts.begin(), cuts.end());
  PiecewiseControl ctrl;
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double next = i + 1 < n ? cuts[i] : horizon;
    const double u = law.fixed_level ? *law.fixed_level : range.lo() + range.width() * unit(rng);
    ctrl.push(next - prev, u);
    prev = next;
  }
  return ctrl;
}

inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) + index));
}

/// Endpoints of n_samples random trajectories from x0. The backward cloud
/// integrates the negated field forward.
template <ControlField F>
OrbitCloud sample_orbit_of(const F& field, const ControlRange& range, const Point3& x0, Direction dir,
                           double horizon, long n_samples, std::uint64_t seed, const SamplingLaw& law = {}) {
  if (!(horizon > 0.0)) fail(ErrorKind::kInvalidArgument, "horizon must be positive");
  if (n_samples <= 0) fail(ErrorKind::kInvalidArgument, "n_samples must be positive");
  if (law.fixed_level && !range.contains(*law.fixed_level)) {
    fail(ErrorKind::kControlOutOfRange, "fixed sampling level outside Omega");
  }
  OrbitCloud cloud{x0, dir, horizon, {}, seed, law};
  cloud.points.reserve(static_cast<std::size_t>(n_samples));
  for (long i = 0; i < n_samples; ++i) {
    auto rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const PiecewiseControl ctrl = sample_control(rng, range, horizon, law);
    cloud.points.push_back(dir == Direction::kForward ? rk4_endpoint(field, x0, ctrl, law.step)
                                                      : rk4_endpoint(Reversed<F>{field}, x0, ctrl, law.step));
  }
  return cloud;
}

inline OrbitCloud sample_orbit(const SystemSpec& sys, const Point3& x0, Direction dir, double horizon,
                               long n_samples, std::uint64_t seed, const SamplingLaw& law = {}) {
  return sample_orbit_of(LcsField{sys}, sys.range(), x0, dir, horizon, n_samples, seed, law);
}

/// Centers of the 125 cubes of side 0.4 tiling [-1, 1]^3; 0.35 is about their
/// circumradius 0.2 sqrt(3).
inline std::vector<Point3> coverage_grid() {
  std::vector<Point3> out;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k) out.push_back({-0.8 + 0.4 * i, -0.8 + 0.4 * j, -0.8 + 0.4 * k});
  return out;
}

inline constexpr double kCoverageRadius = 0.35;

/// Grid centers with no cloud point within radius.
inline std::vector<Point3> uncovered_cells(const OrbitCloud& cloud, double radius = kCoverageRadius) {
  std::vector<Point3> missed;
  for (const auto& c : coverage_grid()) {
    const bool hit = std::any_of(cloud.points.begin(), cloud.points.end(),
                                 [&](const Point3& p) { return distance(p, c) <= radius; });
    if (!hit) missed.push_back(c);
  }
  return missed;
}

// ---------------------------------------------------------------------------
// Verification

struct VerificationBudget {
  long trajectories = 10000;  // certificate runs
  long orbit_samples = 5000;
  double horizon = 10.0;
  double certificate_horizon = 2.0;
};

struct Counterexample {
  std::string check;
  std::vector<Point3> points;
  std::string note;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  CaseTag tag = CaseTag::kRegularOutOfScope;  // the tag that was verified
  CaseTag classifier_tag = CaseTag::kRegularOutOfScope;
  std::vector<CheckResult> checks;
  std::vector<Counterexample> counterexamples;
  /// Global tag only: cells of coverage_grid() hit by the forward cloud of the
  /// origin. Diagnostic; pairs are what decide the verdict.
  std::optional<int> coverage_cells;
  VerificationBudget budget;
  std::uint64_t seed = 0;

  bool passed() const {
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
};

inline constexpr double kPlanTolerance = 1e-4;
inline constexpr double kReachEpsilon = 0.05;

namespace detail {

class Verifier {
 public:
  Verifier(const SystemSpec& sys, const Classification& cls, const VerificationBudget& budget, std::uint64_t seed)
      : sys_(sys), cls_(cls), budget_(budget), seed_(seed) {
    report_.tag = cls.tag;
    report_.budget = budget;
    report_.seed = seed;
    try {
      nf_.emplace(NormalForm::of(sys));
    } catch (const Error&) {
    }
  }

  VerificationReport run() {
    check_classifier();
    switch (cls_.tag) {
      case CaseTag::kGloballyControllable: verify_global(); break;
      case CaseTag::kPlaneOfOnePointSets:
      case CaseTag::kLineOfOnePointSets: verify_one_point(); break;
      case CaseTag::kCylinder: verify_cylinder(); break;
      case CaseTag::kPreimageOfAffineSet: verify_preimage(); break;
      case CaseTag::kRegularOutOfScope:
        fail(ErrorKind::kSingularCaseUnsupported, "nothing to verify in the regular case");
    }
    return std::move(report_);
  }

 private:
  void record(const std::string& name, bool ok, const std::string& detail) {
    report_.checks.push_back({name, ok, detail});
  }
  void counterexample(const std::string& check, std::vector<Point3> pts, const std::string& note) {
    report_.counterexamples.push_back({check, std::move(pts), note});
  }
  std::uint64_t stream(std::uint64_t salt) const { return splitmix64(seed_ ^ (salt * 0x100000001b3ULL)); }

  bool require_form(const std::string& check, NormalFormKind kind) {
    if (nf_ && nf_->kind() == kind) return true;
    const std::string got = nf_ ? to_string(nf_->kind()) : "none";
    record(check, false, "normal form is " + got + ", expected " + to_string(kind));
    counterexample(check, {}, "normal form is " + got);
    return false;
  }

  void check_classifier() {
    report_.classifier_tag = classify(sys_).tag;
    const bool ok = report_.classifier_tag == cls_.tag;
    record("classifier_agrees", ok, "classifier says " + to_string(report_.classifier_tag));
  }

  /// Plan in normal coordinates, then integrate the original system.
  double plan_error(const Point3& from, const Point3& to, std::uint64_t salt, std::string* why) {
    try {
      PlanOptions opt;
      opt.steering.seed = stream(salt);
      const Plan plan = plan_between(*nf_, nf_->to_normal(from), nf_->to_normal(to), opt);
      const Point3 end = rk4_endpoint(LcsField{sys_}, from, plan.control, 1e-4);
      return distance(end, to);
    } catch (const Error& e) {
      if (why) *why = e.what();
      return std::numeric_limits<double>::infinity();
    }
  }

  bool close_by_cloud(const Point3& from, const Point3& to, std::uint64_t salt) {
    const auto cloud = sample_orbit(sys_, from, Direction::kForward, budget_.horizon,
                                    std::max(1L, budget_.orbit_samples / 10), stream(salt));
    return std::any_of(cloud.points.begin(), cloud.points.end(),
                       [&](const Point3& p) { return distance(p, to) <= kReachEpsilon; });
  }

  void verify_global() {
    // origin -> p and p -> origin for the 3 x 3 x 3 grid: all pairs by concatenation
    std::vector<Point3> grid;
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int k = -1; k <= 1; ++k) grid.push_back({double(i), double(j), double(k)});
    long failed = 0;
    double worst = 0.0;
    std::uint64_t salt = 1;
    if (!nf_) {
      record("grid_pairs", false, "no normal form");
    } else {
      for (const auto& p : grid) {
        for (const auto& [a, b] : {std::pair{Point3{}, p}, std::pair{p, Point3{}}}) {
          if (a == b) continue;
          std::string why;
          const double err = plan_error(a, b, salt++, &why);
          if (err <= kPlanTolerance) {
            worst = std::max(worst, err);
            continue;
          }
          if (close_by_cloud(a, b, salt++)) continue;
          ++failed;
          if (failed <= 3) counterexample("grid_pairs", {a, b}, why.empty() ? "plan error too large" : why);
        }
      }
      std::ostringstream d;
      d << failed << " of " << 2 * (grid.size() - 1) << " pairs unconnected, worst plan error " << worst;
      record("grid_pairs", failed == 0, d.str());
    }

    const auto cloud = sample_orbit(sys_, {}, Direction::kForward, budget_.horizon, budget_.orbit_samples, stream(0));
    report_.coverage_cells = static_cast<int>(125 - uncovered_cells(cloud).size());
  }

  void verify_one_point() {
    const bool plane = cls_.tag == CaseTag::kPlaneOfOnePointSets;
    const auto kernel = derivation_kernel(sys_.derivation());
    const std::size_t want = plane ? 2 : 1;
    record("kernel_dimension", kernel.size() == want,
           "dim ker D = " + std::to_string(kernel.size()) + ", expected " + std::to_string(want));
    if (kernel.size() != want) {
      counterexample("kernel_dimension", kernel, "basis of ker D");
    }

    double worst_field = 0.0;
    for (const auto& k : kernel) {
      for (const double s : {-1.0, 0.5, 1.0}) worst_field = std::max(worst_field, lcs_field(sys_, s * k, 0.0).norm());
    }
    record("kernel_equilibria", worst_field <= 1e-9, "max |X(k)| on ker D = " + fmt(worst_field));

    const NormalFormKind kind = plane ? NormalFormKind::kNilpotent : NormalFormKind::kHyperbolic;
    const std::string name = plane ? "certificate_F" : "certificate_G";
    if (!require_form(name, kind)) return;
    if (plane) {
      const CertificateF f = CertificateF::make(sys_.range());
      certificate_runs(name, f, [](Draw3& d) { return d.point(1.0); });
      non_returnability(f, kernel);
    } else {
      if (!(nf_->params().mu > 0.0)) {
        record(name, false, "hyperbolic form with mu <= 0");
        return;
      }
      const CertificateG g = CertificateG::make(sys_.range(), nf_->params().mu);
      const ControlRange r = sys_.range();
      certificate_runs(name, g, [r](Draw3& d) {
        Point3 p = d.point(1.0);
        p.y = r.lo() + (p.y + 1.0) * 0.5 * r.width();
        return p;
      });
      non_returnability(g, kernel);
    }
  }

  struct Draw3 {
    std::mt19937_64 rng;
    Point3 point(double r) {
      std::uniform_real_distribution<double> u(-r, r);
      const double x = u(rng);
      const double y = u(rng);
      return {x, y, u(rng)};
    }
  };

  static std::string fmt(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  }

  /// Certificate evaluated in normal coordinates along trajectories of the
  /// original system; starts drawn in normal coordinates.
  template <class Cert, class Start>
  void certificate_runs(const std::string& name, const Cert& cert, Start start) {
    long violations = 0;
    long domain = 0;
    double min_inc = std::numeric_limits<double>::infinity();
    const double h = 1e-2;
    for (long i = 0; i < budget_.trajectories; ++i) {
      auto rng = sample_stream(stream(7), static_cast<std::uint64_t>(i));
      Draw3 d{std::mt19937_64(rng())};
      const Point3 q0 = start(d);
      const PiecewiseControl ctrl = sample_control(rng, sys_.range(), budget_.certificate_horizon);
      const Trajectory traj = rk4_trajectory(LcsField{sys_}, nf_->from_normal(q0), ctrl, h);
      Trajectory mapped;
      for (const auto& s : traj.samples) mapped.samples.push_back({s.t, nf_->to_normal(s.state), s.u});
      MonotoneReport r;
      try {
        r = check_monotone(cert, mapped);
      } catch (const Error&) {
        ++domain;
        if (domain <= 1) counterexample(name, {q0}, "trajectory left the certificate domain");
        continue;
      }
      min_inc = std::min(min_inc, r.min_increment);
      if (!r.ok()) {
        ++violations;
        if (violations <= 3) {
          std::ostringstream note;
          note << "certificate drops by " << -r.min_increment << " along a trajectory from this normal-form point";
          counterexample(name, {q0}, note.str());
        }
      }
    }
    std::ostringstream detail;
    detail << violations << " violations, " << domain << " domain exits in " << budget_.trajectories
           << " trajectories, min increment " << min_inc;
    record(name, violations == 0 && domain == 0, detail.str());
  }

  /// Forward clouds from kernel points never go below the certificate value there.
  template <class Cert>
  void non_returnability(const Cert& cert, const std::vector<Point3>& kernel) {
    long bad = 0;
    long samples = 0;
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      const Point3 k = 0.5 * kernel[j];
      const auto cloud = sample_orbit(sys_, k, Direction::kForward, budget_.certificate_horizon,
                                      std::max(1L, budget_.orbit_samples / 10), stream(11 + j));
      const double base = cert(nf_->to_normal(k));
      for (const auto& p : cloud.points) {
        ++samples;
        double value;
        try {
          value = cert(nf_->to_normal(p));
        } catch (const Error&) {
          value = -std::numeric_limits<double>::infinity();
        }
        if (value < base - kMonotoneTolerance) {
          ++bad;
          if (bad <= 1) counterexample("non_returnability", {k, p}, "forward point below the certificate level");
        }
      }
    }
    record("non_returnability", bad == 0, std::to_string(bad) + " of " + std::to_string(samples) + " below level");
  }

  /// (0, 0, 0) <-> (0, 0, 1) in normal coordinates for the z-fibered forms,
  /// (0, w, 0) <-> (1, w, 0) for the affine form.
  void fiber_both_ways(const std::string& name) {
    const PlanarView view(*nf_);
    const Vec2 base = fiber_base(*nf_);
    long failed = 0;
    std::string detail;
    for (const auto& [a, b] : {std::pair{0.0, 1.0}, std::pair{1.0, 0.0}}) {
      try {
        PlanOptions opt;
        opt.steering.seed = stream(a < b ? 21 : 22);
        const Plan plan = plan_fiber(*nf_, a, b, opt);
        const Point3 from = nf_->from_normal(view.embed(base, a));
        const Point3 to = nf_->from_normal(view.embed(base, b));
        const double err = distance(rk4_endpoint(LcsField{sys_}, from, plan.control, 1e-4), to);
        detail += "fiber " + fmt(a) + " -> " + fmt(b) + " error " + fmt(err) + "; ";
        if (err > kPlanTolerance) {
          ++failed;
          counterexample(name, {from, to}, "fiber plan error " + fmt(err));
        }
      } catch (const Error& e) {
        ++failed;
        detail += std::string(e.what()) + "; ";
        counterexample(name, {nf_->from_normal(view.embed(base, a)), nf_->from_normal(view.embed(base, b))},
                       e.what());
      }
    }
    record(name, failed == 0, detail);
  }

  /// Mutual planar reachability of the given points by shooting.
  void planar_mutual(const std::string& name, const std::vector<Vec2>& pts) {
    const PlanarView view(*nf_);
    long failed = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (const auto& [a, b] : {std::pair{pts[0], pts[i]}, std::pair{pts[i], pts[0]}}) {
        if (a == b) continue;
        SteeringOptions opt;
        opt.seed = stream(100 + i);
        try {
          const auto c = steer_planar(view, a, b, opt);
          if ((view.flow(a, c) - b).norm() <= 1e-6) continue;
        } catch (const Error&) {
        }
        ++failed;
        if (failed <= 3) counterexample(name, {view.embed(a, 0.0), view.embed(b, 0.0)}, "planar steering failed");
      }
    }
    record(name, failed == 0,
           std::to_string(failed) + " failures over " + std::to_string(2 * (pts.size() - 1)) + " planar pairs");
  }

  void verify_cylinder() {
    if (!require_form("fiber_plans", NormalFormKind::kTraceFree)) return;
    fiber_both_ways("fiber_plans");
    const NormalFormParams& p = nf_->params();
    const ControlRange& r = sys_.range();
    if (p.rotation) {
      std::vector<Vec2> pts{{0, 0}};
      for (int k = 0; k < 6; ++k) {
        const double t = k * std::numbers::pi / 3.0;
        pts.push_back({1.5 * std::cos(t), 1.5 * std::sin(t)});
      }
      planar_mutual("planar_set", pts);
      return;
    }
    // box in scaled eigen coordinates s = (mu v1 / zeta1, mu v2 / zeta2)
    const double c1 = p.zeta1 / p.mu;
    const double c2 = p.zeta2 / p.mu;
    const double mx = -0.5 * (r.lo() + r.hi());
    const double my = 0.5 * (r.lo() + r.hi());
    std::vector<Vec2> pts;
    for (const double fx : {0.0, -0.8, 0.8})
      for (const double fy : {0.0, -0.8, 0.8})
        pts.push_back({c1 * (mx + fx * 0.5 * r.width()), c2 * (my + fy * 0.5 * r.width())});
    planar_mutual("planar_set", pts);

    // forward orbits keep s2 in Omega, backward orbits keep s1 in -Omega
    const Point3 center{pts[0].x1, pts[0].x2, 0.0};
    const NormalFormField field{&*nf_};
    long escaped = 0;
    const long n = std::max(1L, budget_.orbit_samples / 10);
    const auto fwd = sample_orbit_of(field, r, center, Direction::kForward, budget_.horizon, n, stream(31));
    const auto bwd = sample_orbit_of(field, r, center, Direction::kBackward, budget_.horizon, n, stream(32));
    const double tol = 1e-9 * std::max(1.0, r.width());
    for (const auto& q : fwd.points) {
      const double s2 = q.y / c2;
      if (s2 < r.lo() - tol || s2 > r.hi() + tol) {
        if (++escaped <= 1) counterexample("box_invariance", {center, nf_->from_normal(q)}, "forward orbit left the strip");
      }
    }
    for (const auto& q : bwd.points) {
      const double s1 = q.x / c1;
      if (s1 < -r.hi() - tol || s1 > -r.lo() + tol) {
        if (++escaped <= 1) counterexample("box_invariance", {center, nf_->from_normal(q)}, "backward orbit left the strip");
      }
    }
    record("box_invariance", escaped == 0, std::to_string(escaped) + " escapes in " + std::to_string(2 * n));
  }

  void verify_preimage() {
    if (!require_form("fiber_plans", NormalFormKind::kAffine)) return;
    fiber_both_ways("fiber_plans");
    const auto [u1, u2] = affine_levels(*nf_);
    const double alpha = nf_->params().alpha;
    std::vector<Vec2> pts{affine_equilibrium(u1, alpha), affine_equilibrium(u2, alpha)};
    for (const double f : {0.25, -0.25, 0.6, -0.6}) {
      const double u = f * sys_.range().bound(f);
      if (std::abs(u + alpha) >= 0.05) pts.push_back(affine_equilibrium(u, alpha));
    }
    planar_mutual("planar_set", pts);
    const bool open = cls_.open.value_or(false);
    record("openness", open == (sys_.tr_a() > 0.0),
           std::string("claimed ") + (open ? "open" : "closed") + ", tr A = " + fmt(sys_.tr_a()));
  }

  const SystemSpec& sys_;
  const Classification& cls_;
  VerificationBudget budget_;
  std::uint64_t seed_;
  std::optional<NormalForm> nf_;
  VerificationReport report_;
};

}  // namespace detail

/// Evidence for cls on sys. Never throws on a mismatch; the report carries the
/// failed checks and counterexamples. Use require_verified to turn a failing
/// report into VerificationFailed.
inline VerificationReport verify_classification(const SystemSpec& sys, const Classification& cls,
                                                const VerificationBudget& budget = {}, std::uint64_t seed = 1) {
  if (!larc(sys)) fail(ErrorKind::kLarcViolated, "verification needs the LARC");
  return detail::Verifier(sys, cls, budget, seed).run();
}

inline const VerificationReport& require_verified(const VerificationReport& report) {
  if (!report.passed()) {
    std::string failed;
    for (const auto& c : report.checks) {
      if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
    }
    fail(ErrorKind::kVerificationFailed, to_string(report.tag) + ": " + failed);
  }
  return report;
}

}  // namespace heisctl
