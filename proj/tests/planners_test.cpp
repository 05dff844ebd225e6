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
#include <numbers>

#include <gtest/gtest.h>

#include "support/random.hpp"

namespace heisctl {
namespace {

SystemSpec sys_of(Mat2 a, Vec2 eta, Vec2 zeta, double alpha, ControlRange range = {}) {
  return SystemSpec::from_entries(Derivation{a, eta}, AlgebraElement{zeta, alpha}, range);
}

NormalForm nilpotent_form() { return NormalForm::of(sys_of({0, 1, 0, 0}, {1, 0}, {0, 1}, 0)); }
NormalForm rotation_form(double alpha) { return NormalForm::of(sys_of({0, -1, 1, 0}, {}, {1, 0}, alpha)); }
NormalForm affine_form() {
  // tr A = 1 > 0, alpha of the normal form is 0.5
  return NormalForm::of(SystemSpec::make(Derivation{{0, 0, 0, 1}, {0, -0.5}}, AlgebraElement{{1, 1}, 0},
                                         ControlRange{}, DeclaredZeros{true, false}));
}

void expect_plan(const Plan& plan, const ControlRange& range, double tol) {
  EXPECT_LE(plan.error, tol) << "achieved " << plan.achieved << " target " << plan.target;
  for (const auto& s : plan.control.segments()) {
    EXPECT_TRUE(range.contains(s.u));
    EXPECT_GT(s.duration, 0.0);
  }
}

TEST(PlanFiberCase00, Examples) {
  const NormalForm nf = nilpotent_form();
  ASSERT_NE(nf.params().a, 0.0);
  const Plan up = plan_fiber_case00(nf, 0.0, 1.0);
  expect_plan(up, nf.range(), 1e-6);
  const Plan down = plan_fiber_case00(nf, 1.0, 0.0);
  expect_plan(down, nf.range(), 1e-6);
  EXPECT_EQ(down.target, (Point3{0, 0, 0}));
  const Plan same = plan_fiber_case00(nf, 0.4, 0.4);
  EXPECT_TRUE(same.control.empty());
  EXPECT_EQ(same.error, 0.0);
}

TEST(PlanFiberCase00, RadiusBoundsTrajectory) {
  const NormalForm nf = nilpotent_form();
  const Plan plan = plan_fiber_case00(nf, -2.0, 3.0);
  const auto traj = rk4_trajectory(NormalFormField{&nf}, plan.start, plan.control, 1e-3);
  for (const auto& s : traj.samples) EXPECT_LE(s.state.norm(), plan.radius + 1e-6);
  EXPECT_TRUE(std::isfinite(plan.radius));
}

TEST(PlanFiberCase00, RefusesOnePointCase) {
  const NormalForm nf = NormalForm::of(sys_of({0, 1, 0, 0}, {}, {0, 1}, 0));
  EXPECT_EQ(nf.params().a, 0.0);
  EXPECT_THROW(plan_fiber_case00(nf, 0.0, 1.0), Error);
}

TEST(PlanFiberCase00, Composes) {
  const NormalForm nf = nilpotent_form();
  const Plan p1 = plan_fiber_case00(nf, 0.0, 1.5);
  const Plan p2 = plan_fiber_case00(nf, 1.5, -0.5);
  PiecewiseControl both = p1.control;
  both.append(p2.control);
  const Point3 end = rk4_endpoint(NormalFormField{&nf}, Point3{0, 0, 0}, both, 1e-4);
  EXPECT_LE(distance(end, {0, 0, -0.5}), p1.error + p2.error + 1e-9);
}

TEST(PlanFiberDet, RotationWithAlphaBothWays) {
  const NormalForm nf = rotation_form(0.5);
  expect_plan(plan_fiber_det(nf, 0.0, 1.0), nf.range(), 1e-6);
  expect_plan(plan_fiber_det(nf, 1.0, 0.0), nf.range(), 1e-6);
  EXPECT_TRUE(plan_fiber_det(nf, 2.0, 2.0).control.empty());
}

TEST(PlanFiberDet, SaddleWithAlphaBothWays) {
  const NormalForm nf = NormalForm::of(sys_of({0, 1, 1, 0}, {0, 1}, {1, 0}, 0));
  ASSERT_EQ(nf.kind(), NormalFormKind::kTraceFree);
  ASSERT_FALSE(nf.params().rotation);
  ASSERT_NE(nf.params().alpha, 0.0);
  expect_plan(plan_fiber_det(nf, 0.0, 1.0), nf.range(), 1e-6);
  expect_plan(plan_fiber_det(nf, 1.0, 0.0), nf.range(), 1e-6);
}

TEST(PlanFiberDet, AgainstDriftWithoutAlpha) {
  const NormalForm nf = rotation_form(0.0);
  // p(u) = -u^2 / 2 < 0: only descending is possible by dwelling.
  expect_plan(plan_fiber_det(nf, 1.0, 0.0), nf.range(), 1e-6);
  try {
    plan_fiber_det(nf, 0.0, 1.0);
    ADD_FAILURE() << "expected DirectionUnreachable";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDirectionUnreachable);
  }
}

TEST(RotationLoop, HalfTurnLoopAscends) {
  const NormalForm nf = rotation_form(0.0);
  const LoopInfo info = rotation_loop(nf, 1.0);
  // measured by integration, one loop raises z by pi/2 for mu = 1, zeta = (1, 0), rho = 1
  const Point3 start{info.v_star.x1, info.v_star.x2, 0.0};
  const Point3 end = rk4_endpoint(NormalFormField{&nf}, start, info.loop, 1e-4);
  EXPECT_LE((end.planar() - info.v_star).norm(), 1e-9);
  EXPECT_NEAR(end.z, std::numbers::pi / 2.0, 1e-9);
  EXPECT_NEAR(info.dz, std::numbers::pi / 2.0, 1e-12);
}

TEST(PlanFiberImag, Examples) {
  const NormalForm nf = rotation_form(0.0);
  PlanOptions opt;
  opt.rho_fraction = 1.0;
  const Plan down = plan_fiber_imag(nf, 3.0, 0.0, opt);
  expect_plan(down, nf.range(), 1e-5);
  const Plan up = plan_fiber_imag(nf, 0.0, 3.0, opt);
  expect_plan(up, nf.range(), 1e-5);
  // loops carry the ascent; the dwell at v(rho) only trims
  const LoopInfo info = rotation_loop(nf, 1.0);
  long loops = 0;
  for (std::size_t i = 0; i + 1 < up.control.size(); ++i) {
    if (up.control.segments()[i] == info.loop.segments()[0] && up.control.segments()[i + 1] == info.loop.segments()[1])
      ++loops;
  }
  EXPECT_GE(loops, static_cast<long>(std::ceil(3.0 / info.dz)));
  EXPECT_TRUE(plan_fiber_imag(nf, 1.0, 1.0).control.empty());
}

TEST(PlanFiberImag, NegativeRotationRate) {
  const NormalForm nf = NormalForm::of(sys_of({0, 2, -2, 0}, {}, {1, 0}, 0));
  ASSERT_TRUE(nf.params().rotation);
  expect_plan(plan_fiber_imag(nf, 0.0, 2.0), nf.range(), 1e-5);
  expect_plan(plan_fiber_imag(nf, 2.0, -1.0), nf.range(), 1e-5);
}

TEST(PlanFiberDegtrace, Examples) {
  const NormalForm nf = affine_form();
  ASSERT_EQ(nf.kind(), NormalFormKind::kAffine);
  EXPECT_DOUBLE_EQ(nf.params().mu, 1.0);
  EXPECT_DOUBLE_EQ(nf.params().alpha, 0.5);
  expect_plan(plan_fiber_degtrace(nf, 0.0, 2.0), nf.range(), 1e-5);
  expect_plan(plan_fiber_degtrace(nf, 2.0, 0.0), nf.range(), 1e-5);
  EXPECT_TRUE(plan_fiber_degtrace(nf, 1.0, 1.0).control.empty());
}

TEST(PlanFiberDegtrace, NegativeTrace) {
  const NormalForm nf = NormalForm::of(SystemSpec::make(Derivation{{-1, 0, 0, 0}, {0.5, -1}},
                                                        AlgebraElement{{1, 1}, 0}, ControlRange{},
                                                        DeclaredZeros{true, false}));
  ASSERT_EQ(nf.kind(), NormalFormKind::kAffine);
  EXPECT_LT(nf.params().mu, 0.0);
  expect_plan(plan_fiber_degtrace(nf, 0.0, 1.5), nf.range(), 1e-5);
  expect_plan(plan_fiber_degtrace(nf, 1.5, -1.0), nf.range(), 1e-5);
}

TEST(PlanFiber, RandomPairsAllCases) {
  testing::Draw d(2026);
  const NormalForm forms[] = {nilpotent_form(), rotation_form(0.5), rotation_form(0.0), affine_form()};
  for (const auto& nf : forms) {
    for (int i = 0; i < 5; ++i) {
      const double a = d.uniform(-3, 3);
      const double b = a + d.uniform(-5, 5);
      const Plan plan = plan_fiber(nf, a, b);
      expect_plan(plan, nf.range(), 1e-5);
      EXPECT_LT(plan.seconds, 1.0);
    }
  }
}

TEST(PlanBetween, OriginalCoordinates) {
  const SystemSpec sys = sys_of({0, 1, 0, 0}, {1, 0}, {0, 1}, 0);
  const NormalForm nf = NormalForm::of(sys);
  testing::Draw d(11);
  for (int i = 0; i < 5; ++i) {
    const Point3 from = d.point3(1);
    const Point3 to = d.point3(1);
    const Plan plan = plan_between(nf, nf.to_normal(from), nf.to_normal(to));
    const Point3 end = rk4_endpoint(LcsField{sys}, from, plan.control, 1e-4);
    EXPECT_LE(distance(end, to), 1e-5);
  }
}

TEST(PlanFiber, HyperbolicRefused) {
  const NormalForm nf = NormalForm::of(sys_of({1, 0, 0, -1}, {}, {1, 1}, 0));
  EXPECT_THROW(plan_fiber(nf, 0.0, 1.0), Error);
}

}  // namespace
}  // namespace heisctl
