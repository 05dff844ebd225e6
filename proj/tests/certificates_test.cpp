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

#include <cmath>

#include <gtest/gtest.h>

#include "support/random.hpp"

namespace heisctl {
namespace {

double dot3(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

TEST(CertificateF, Examples) {
  const CertificateF f{-1.0};
  EXPECT_NEAR(f({1, 1, 1}), 0.0, 1e-15);
  EXPECT_NEAR(f({1, 1, -1.0 / 3.0}), 4.0, 1e-14);
}

TEST(CertificateF, RisesAlongDriftExample) {
  const CertificateF f{-1.0};
  const Point3 p0{0, 1, 0};
  const Point3 p1 = flow_case00(p0, 0.0, 1.0, 0.0);
  EXPECT_NEAR(f(p0), 1.0, 1e-15);
  EXPECT_NEAR(f(p1), 4.0, 1e-14);
}

TEST(CertificateF, SigmaMustBeBelowRange) {
  EXPECT_THROW(CertificateF::make(ControlRange{}, -0.5), Error);
  EXPECT_THROW(CertificateF::make(ControlRange{}, -1.0), Error);
  EXPECT_EQ(CertificateF::make(ControlRange{}).sigma, -2.0);
}

TEST(CertificateF, RateMatchesFieldDerivative) {
  testing::Draw d(5);
  const CertificateF f{-1.5};
  for (int i = 0; i < 200; ++i) {
    const Point3 p = d.point3(2);
    const double u = d.uniform(-1, 1);
    const Point3 dp = NilpotentField{0.0}(p, u);
    // gradient of F
    const Point3 grad{-2.0 * p.y * f.sigma, 3.0 * p.y * p.y - 2.0 * p.x * f.sigma, 3.0 * f.sigma};
    EXPECT_NEAR(dot3(grad, dp), f.rate(p, u), 1e-12);
  }
}

TEST(CertificateF, IncrementLaw) {
  testing::Draw d(6);
  const CertificateF f{-2.0};
  for (int i = 0; i < 1000; ++i) {
    const Point3 p = d.point3(2);
    const double u = d.uniform(-1, 1);
    const double t = d.uniform(0, 3);
    const double got = f(flow_case00(p, u, t, 0.0)) - f(p);
    EXPECT_NEAR(got, f.increment(p.y, u, t), 1e-8);
  }
  EXPECT_NEAR(f(flow_case00({0.3, 0.7, 0.1}, 0.0, 2.0, 0.0)) - f({0.3, 0.7, 0.1}), f.increment(0.7, 0.0, 2.0), 1e-12);
}

TEST(CertificateF, MonotoneOnRandomTrajectories) {
  testing::Draw d(8);
  const ControlRange range;
  const CertificateF f = CertificateF::make(range);
  for (int i = 0; i < 500; ++i) {
    const auto traj = rk4_trajectory(NilpotentField{0.0}, d.point3(1), d.control(range, 6, 1.0), 1e-2);
    const auto report = check_monotone(f, traj);
    EXPECT_TRUE(report.ok()) << report.min_increment;
  }
}

TEST(CertificateG, Examples) {
  const CertificateG g{-2.0, 1.0};
  EXPECT_NEAR(g({0, 0, 0}), 4.0 * std::log(2.0), 1e-14);
  EXPECT_THROW(g({0, -2.0, 0}), Error);
  EXPECT_THROW(g.rate({0, -3.0, 0}, 0.0), Error);
  try {
    g({0, -2.0, 0});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDomainViolation);
  }
}

TEST(CertificateG, NeedsPositiveMu) {
  EXPECT_THROW(CertificateG::make(ControlRange{}, 0.0), Error);
  EXPECT_THROW(CertificateG::make(ControlRange{}, -1.0), Error);
}

TEST(CertificateG, RateMatchesFieldDerivative) {
  testing::Draw d(9);
  const CertificateG g{-2.0, 1.3};
  for (int i = 0; i < 200; ++i) {
    const Point3 p{d.uniform(-2, 2), d.uniform(-1, 1), d.uniform(-2, 2)};
    const double u = d.uniform(-1, 1);
    const Point3 dp = HyperbolicField{g.mu}(p, u);
    const Point3 grad{0.0, g.sigma + g.sigma * g.sigma / (p.y - g.sigma), 1.0};
    EXPECT_NEAR(dot3(grad, dp), g.rate(p, u), 1e-12);
  }
}

TEST(CertificateG, MonotoneAndStripInvariant) {
  testing::Draw d(10);
  const ControlRange range;
  const CertificateG g = CertificateG::make(range, 1.0);
  for (int i = 0; i < 500; ++i) {
    const Point3 p{d.uniform(-1, 1), d.uniform(range.lo(), range.hi()), d.uniform(-1, 1)};
    const auto traj = rk4_trajectory(HyperbolicField{1.0}, p, d.control(range, 6, 1.0), 1e-2);
    EXPECT_TRUE(check_monotone(g, traj).ok());
    for (const auto& s : traj.samples) {
      EXPECT_GE(s.state.y, range.lo() - 1e-9);
      EXPECT_LE(s.state.y, range.hi() + 1e-9);
    }
  }
}

TEST(CheckMonotone, CountsDrops) {
  Trajectory traj;
  traj.samples = {{0, {0, 0, 0}, 0}, {1, {0, 0, 1}, 0}, {2, {0, 0, 0.5}, 0}};
  struct Height {
    double operator()(const Point3& p) const { return p.z; }
  };
  const auto r = check_monotone(Height{}, traj);
  EXPECT_EQ(r.violations, 1);
  EXPECT_EQ(r.steps, 2);
  EXPECT_DOUBLE_EQ(r.min_increment, -0.5);
}

}  // namespace
}  // namespace heisctl
