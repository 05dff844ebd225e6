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

#include <gtest/gtest.h>

#include "support/random.hpp"

namespace heisctl {
namespace {

SystemSpec sys_of(Mat2 a, Vec2 eta, Vec2 zeta, double alpha, ControlRange range = {}) {
  return SystemSpec::from_entries(Derivation{a, eta}, AlgebraElement{zeta, alpha}, range);
}

TEST(DoubleIntegrator, BangBangUnitExample) {
  const auto c = steer_double_integrator({0, 0}, {1, 0}, ControlRange{});
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.segments()[0].u, 1.0);
  EXPECT_EQ(c.segments()[1].u, -1.0);
  EXPECT_NEAR(c.segments()[0].duration, 1.0, 1e-14);
  EXPECT_NEAR(c.segments()[1].duration, 1.0, 1e-14);
}

TEST(DoubleIntegrator, EqualEndpointsGiveEmptyControl) {
  EXPECT_TRUE(steer_double_integrator({0.3, -0.2}, {0.3, -0.2}, ControlRange{}).empty());
}

TEST(DoubleIntegrator, RandomPairsReachTarget) {
  testing::Draw d(7);
  for (int i = 0; i < 200; ++i) {
    const ControlRange range(d.uniform(-2, -0.2), d.uniform(0.2, 2));
    const Vec2 from = d.vec2(2);
    const Vec2 to = d.vec2(2);
    const auto c = steer_double_integrator(from, to, range);
    EXPECT_TRUE(c.admissible(range));
    const Point3 end = compose_flow([](const Point3& p, double u, double t) { return flow_case00(p, u, t, 0.0); },
                                    Point3{from.x1, from.x2, 0}, c);
    EXPECT_LE((end.planar() - to).norm(), 1e-10);
  }
}

TEST(Shooting, HyperbolicExampleWithinBox) {
  const auto sys = sys_of({1, 0, 0, -1}, {}, {1, 1}, 0);
  const NormalForm nf = NormalForm::of(sys);
  ASSERT_EQ(nf.kind(), NormalFormKind::kHyperbolic);
  const PlanarView view(nf);
  const Vec2 to{-0.5, 0.5};
  const auto c = steer_planar(view, {0, 0}, to);
  EXPECT_TRUE(c.admissible(nf.range()));
  EXPECT_LE(c.size(), 6u);
  const Point3 end = rk4_endpoint(NormalFormField{&nf}, Point3{}, c, 1e-4);
  EXPECT_LE((end.planar() - to).norm(), 1e-6);
}

TEST(Shooting, IsDeterministicForSeed) {
  const auto sys = sys_of({1, 0, 0, -1}, {}, {1, 1}, 0);
  const NormalForm nf = NormalForm::of(sys);
  const PlanarView view(nf);
  SteeringOptions opt;
  opt.seed = 99;
  EXPECT_EQ(steer_planar(view, {0.1, 0.2}, {-0.4, -0.3}, opt), steer_planar(view, {0.1, 0.2}, {-0.4, -0.3}, opt));
}

TEST(Shooting, RotationForm) {
  const auto sys = sys_of({0, -1, 1, 0}, {}, {1, 0}, 0.5);
  const NormalForm nf = NormalForm::of(sys);
  ASSERT_EQ(nf.kind(), NormalFormKind::kTraceFree);
  const PlanarView view(nf);
  testing::Draw d(3);
  for (int i = 0; i < 10; ++i) {
    const Vec2 from = d.vec2(1.5);
    const Vec2 to = d.vec2(1.5);
    const auto c = steer_planar(view, from, to);
    EXPECT_LE((view.flow(from, c) - to).norm(), 1e-8);
  }
}

TEST(Shooting, AffinePlanarPart) {
  const auto sys = SystemSpec::make(Derivation{{0, 0, 0, 1}, {0, 1}}, AlgebraElement{{1, 1}, 0},
                                    ControlRange{}, DeclaredZeros{true, false});
  const NormalForm nf = NormalForm::of(sys);
  ASSERT_EQ(nf.kind(), NormalFormKind::kAffine);
  const PlanarView view(nf);
  EXPECT_TRUE(view.fiber_is_x());
  const double alpha = nf.params().alpha;
  const Vec2 w1 = affine_equilibrium(0.5, alpha);
  const Vec2 w2 = affine_equilibrium(-0.5, alpha);
  for (const auto& [a, b] : {std::pair{w1, w2}, std::pair{w2, w1}}) {
    const auto c = steer_planar(view, a, b);
    EXPECT_LE((view.flow(a, c) - b).norm(), 1e-8);
  }
}

TEST(Shooting, UnreachableTargetFails) {
  // Outside the box, nothing brings the hyperbolic form back.
  const auto sys = sys_of({1, 0, 0, -1}, {}, {1, 1}, 0);
  const NormalForm nf = NormalForm::of(sys);
  const PlanarView view(nf);
  SteeringOptions opt;
  opt.restarts = 3;
  opt.max_iterations = 50;
  EXPECT_THROW(steer_planar(view, {3.0, 0.0}, {0.0, 0.0}, opt), Error);
}

TEST(PlanarView, FiberShiftIgnoresStartFiber) {
  const auto sys = sys_of({0, 1, 0, 0}, {1, 0}, {0, 1}, 0);
  const NormalForm nf = NormalForm::of(sys);
  const PlanarView view(nf);
  const PiecewiseControl c({{0.7, 0.5}, {0.4, -1.0}});
  const Vec2 w{0.2, -0.1};
  const Point3 end = nf.flow(view.embed(w, 3.0), c);
  EXPECT_NEAR(view.fiber(end) - 3.0, view.fiber_shift(w, c), 1e-12);
}

}  // namespace
}  // namespace heisctl
