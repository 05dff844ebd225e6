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

const Mat2 kNil{0, 1, 0, 0};

TEST(SystemSpec, Validation) {
  EXPECT_THROW(sys_of(Mat2::zero(), {}, {1, 0}, 0), Error);
  EXPECT_THROW(sys_of(kNil, {}, {}, 0), Error);
  EXPECT_THROW(ControlRange(0.0, 1.0), Error);
  EXPECT_THROW(ControlRange(-1.0, -0.5), Error);
  // Declared zeros must match the entries in both directions.
  EXPECT_THROW(SystemSpec::make({kNil, {}}, {{0, 1}, 0}, {}, DeclaredZeros{false, true}), Error);
  EXPECT_THROW(SystemSpec::make({Mat2::identity(), {}}, {{0, 1}, 0}, {}, DeclaredZeros{true, false}), Error);
  const auto ok = SystemSpec::make({{1e-13, 1, 0, -2e-13}, {}}, {{0, 1}, 0}, {}, DeclaredZeros{true, true});
  EXPECT_EQ(ok.tr_a(), 0.0);
  EXPECT_EQ(ok.det_a(), 0.0);
  EXPECT_EQ(ok.a().a22, -ok.a().a11);
}

TEST(Rhs, Examples) {
  const auto sys = sys_of(kNil, {1, 0}, {0, 1}, 0, ControlRange(-3, 3));
  EXPECT_EQ(rhs(sys, {}, 0.0), Point3{});
  EXPECT_EQ(rhs(sys, {3, 4, 7}, 2.0), (Point3{4, 2, 6}));
  const auto s2 = sys_of({1, 2, 3, 4}, {1, -1}, {0.5, 2}, -3);
  EXPECT_EQ(rhs(s2, {}, 1.0), (Point3{0.5, 2, -3}));
  EXPECT_THROW(rhs(s2, {}, 1.5), Error);
}

TEST(Rhs, IsDriftPlusInvariantField) {
  testing::Draw d(31);
  for (int i = 0; i < 500; ++i) {
    const auto sys = d.real_system(2);
    const Point3 p = d.point3(3);
    const double u = d.uniform(-1, 1);
    const Point3 expect = derivation_apply(sys.derivation(), p) +
                          u * left_invariant_field(sys.control_vector(), GroupElement::from_point(p));
    EXPECT_LE((rhs(sys, p, u) - expect).max_abs(), 1e-13);
  }
}

TEST(Larc, Examples) {
  EXPECT_TRUE(larc(sys_of(kNil, {}, {0, 1}, 0)));
  EXPECT_FALSE(larc(sys_of(Mat2::identity(), {}, {1, 0}, 0)));
  EXPECT_TRUE(larc(sys_of(Mat2::rotation_generator(), {}, {1, 0}, 0)));
  EXPECT_EQ(larc_factor(sys_of(Mat2::rotation_generator(), {}, {1, 0}, 0)), -1.0);
}

TEST(Adrank, Examples) {
  EXPECT_TRUE(adrank(sys_of(Mat2::rotation_generator(), {}, {1, 0}, 1)));
  EXPECT_FALSE(adrank(sys_of({1, 2, 3, 5}, {}, {1, 1}, 0)));
  EXPECT_TRUE(adrank(sys_of(kNil, {1, 0}, {0, 1}, 0)));
}

TEST(BruteRankOracle, Examples) {
  EXPECT_EQ(brute_rank_oracle(sys_of(kNil, {1, 0}, {}, 1)), (RankOracleResult{false, false}));
  EXPECT_EQ(brute_rank_oracle(sys_of(Mat2::rotation_generator(), {}, {1, 0}, 1)), (RankOracleResult{true, true}));
  EXPECT_EQ(brute_rank_oracle(sys_of(kNil, {}, {0, 1}, 0)), (RankOracleResult{true, false}));
}

TEST(BruteRankOracle, AgreesOnIntegerSystems) {
  testing::Draw d(32);
  int checked = 0;
  int disagreements = 0;
  while (checked < 1000) {
    const auto sys = d.integer_system(3);
    if (!sys) continue;
    ++checked;
    const auto oracle = brute_rank_oracle(*sys);
    if (oracle.larc != larc(*sys) || oracle.adrank != adrank(*sys)) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0);
}

TEST(BruteRankOracle, AgreesOnRealSystems) {
  testing::Draw d(33);
  for (int i = 0; i < 500; ++i) {
    const auto sys = d.real_system(2);
    if (std::abs(larc_factor(sys)) < 1e-6 || std::abs(adrank_factor(sys)) < 1e-6) continue;
    const auto oracle = brute_rank_oracle(sys);
    EXPECT_EQ(oracle.larc, larc(sys));
    EXPECT_EQ(oracle.adrank, adrank(sys));
  }
}

TEST(EliminateAlpha, Examples) {
  const auto sys = sys_of(Mat2::rotation_generator(), {}, {1, 0}, 4);
  const auto [out, psi] = eliminate_alpha(sys);
  EXPECT_EQ(psi.xi(), (Vec2{-1, 0}));
  EXPECT_EQ(psi.p(), 0.5 * Mat2::identity());
  EXPECT_EQ(out.alpha(), 0.0);
  EXPECT_THROW(eliminate_alpha(sys_of(kNil, {1, 0}, {}, 1)), Error);
}

TEST(EliminateAlpha, RawAlphaVanishesAndRoundTrips) {
  testing::Draw d(34);
  for (int i = 0; i < 500; ++i) {
    const auto sys = d.real_system(3);
    const auto [out, psi] = eliminate_alpha(sys);
    EXPECT_LE(std::abs(psi.apply(sys.control_vector()).alpha), 1e-12);
    const auto back = conjugate_system(psi.inverse(), out);
    EXPECT_LE((back.control_vector().point() - sys.control_vector().point()).max_abs(), 1e-10);
    EXPECT_LE(max_abs_diff(back.a(), sys.a()), 1e-10);
    EXPECT_LE((back.eta() - sys.eta()).norm(), 1e-10);
  }
}

TEST(EliminateEta, Examples) {
  const auto plain = sys_of(Mat2::rotation_generator(), {}, {1, 0}, 1);
  const auto [o1, p1] = eliminate_eta(plain);
  EXPECT_EQ(p1.xi(), Vec2{});
  EXPECT_EQ(o1.alpha(), 1.0);
  const auto with_eta = sys_of(Mat2::rotation_generator(), {1, 0}, {1, 0}, 0);
  const auto [o2, p2] = eliminate_eta(with_eta);
  EXPECT_EQ(o2.eta(), Vec2{});
  EXPECT_LE(conjugate_derivation(p2, with_eta.derivation()).eta.norm(), 1e-10);
  EXPECT_THROW(eliminate_eta(sys_of(kNil, {1, 0}, {0, 1}, 0)), Error);
}

TEST(EliminateEta, RawEtaVanishes) {
  testing::Draw d(35);
  for (int i = 0; i < 500; ++i) {
    const auto sys = d.real_system(3);
    const auto [out, psi] = eliminate_eta(sys);
    EXPECT_LE(conjugate_derivation(psi, sys.derivation()).eta.norm(), 1e-10 * std::max(1.0, sys.eta().norm()));
  }
}

TEST(DiagonalizeA, Examples) {
  const auto zt = sys_of(Mat2::diag(0, 2), {1, 1}, {1, 1}, 0);
  const auto [o1, p1] = diagonalize_a(zt);
  EXPECT_EQ(o1.a(), Mat2::diag(0, 2));
  EXPECT_LE(max_abs_diff(p1.p(), Mat2::identity()), 1e-15);

  const auto ones = sys_of({1, 1, 1, 1}, {}, {1, 0}, 0);
  const auto [o2, p2] = diagonalize_a(ones);
  EXPECT_LE(max_abs_diff(conjugate_derivation(p2, ones.derivation()).a, Mat2::diag(0, 2)), 1e-10);

  const auto rot = sys_of({0, 2, -2, 0}, {}, {1, 0}, 0);
  const auto [o3, p3] = diagonalize_a(rot);
  EXPECT_LE(max_abs_diff(conjugate_derivation(p3, rot.derivation()).a, 2.0 * Mat2::rotation_generator()), 1e-10);

  EXPECT_THROW(diagonalize_a(sys_of(kNil, {}, {0, 1}, 0)), Error);
}

TEST(DiagonalizeA, RawConjugateMatchesTarget) {
  testing::Draw d(36);
  for (int i = 0; i < 300; ++i) {
    for (int sign : {-1, 1}) {
      const auto sys = d.trace_free_system(2, sign, 0.0);
      const auto [out, psi] = diagonalize_a(sys);
      const Mat2 raw = conjugate_derivation(psi, sys.derivation()).a;
      EXPECT_LE(max_abs_diff(raw, out.a()), 1e-9 * std::max(1.0, sys.a().frobenius()));
    }
  }
}

TEST(Conjugation, TrajectoryEquivariance) {
  testing::Draw d(37);
  for (int i = 0; i < 50; ++i) {
    const auto sys = d.real_system(1);
    const Automorphism psi = d.automorphism(1.5);
    const auto conj = conjugate_system(psi, sys);
    const Point3 x0 = d.point3(1);
    const auto ctrl = d.control(sys.range(), 3, 0.7);
    const auto t1 = rk4_flow(sys, x0, ctrl);
    const auto t2 = rk4_flow(conj, psi.apply(x0), ctrl);
    ASSERT_EQ(t1.samples.size(), t2.samples.size());
    for (std::size_t k = 0; k < t1.samples.size(); ++k) {
      const Point3 a = psi.apply(t1.samples[k].state);
      const Point3 b = t2.samples[k].state;
      EXPECT_LE((a - b).max_abs(), 1e-6 * std::max(1.0, a.max_abs()));
    }
  }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(sys_of(kNil, {1, 0}, {0, 1}, 0)).tag, CaseTag::kGloballyControllable);
  const auto plane = classify(sys_of(kNil, {}, {0, 1}, 0));
  EXPECT_EQ(plane.tag, CaseTag::kPlaneOfOnePointSets);
  EXPECT_EQ(plane.kernel.size(), 2u);
  const auto line = classify(sys_of(Mat2::diag(1, -1), {}, {1, 1}, 0));
  EXPECT_EQ(line.tag, CaseTag::kLineOfOnePointSets);
  EXPECT_EQ(line.kernel.size(), 1u);
  EXPECT_THROW(classify(sys_of(Mat2::identity(), {}, {1, 0}, 0)), Error);
  EXPECT_EQ(classify(sys_of({1, 1, 0, 2}, {}, {0, 1}, 0)).tag, CaseTag::kRegularOutOfScope);
}

TEST(Classify, KernelVectorsAreAnnihilated) {
  testing::Draw d(38);
  for (int i = 0; i < 200; ++i) {
    const auto sys = d.integer_system(3);
    if (!sys || !larc(*sys)) continue;
    const auto c = classify(*sys);
    for (const auto& k : c.kernel) {
      EXPECT_NEAR(k.norm(), 1.0, 1e-12);
      EXPECT_LE(derivation_apply(sys->derivation(), k).max_abs(), 1e-10);
    }
    if (c.tag == CaseTag::kPlaneOfOnePointSets) EXPECT_EQ(c.kernel.size(), 2u);
    if (c.tag == CaseTag::kLineOfOnePointSets) EXPECT_EQ(c.kernel.size(), 1u);
  }
}

TEST(Classify, InvariantUnderConjugation) {
  testing::Draw d(39);
  int compared = 0;
  while (compared < 300) {
    const auto sys = d.integer_system(3);
    if (!sys || !larc(*sys)) continue;
    const DeclaredZeros z = sys->zeros();
    if (!z.det_a && !z.tr_a) continue;
    ++compared;
    const Automorphism psi = d.automorphism(2);
    const SystemSpec conj = conjugate_system(psi, *sys);
    EXPECT_EQ(classify(*sys).tag, classify(conj).tag);
  }
}

}  // namespace
}  // namespace heisctl
