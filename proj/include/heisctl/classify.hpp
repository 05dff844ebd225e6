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

/// \file classify.hpp
/// Control-set classification of singular systems.
///
///   det A = tr A = 0        ad-rank: the whole group; otherwise ker D is a plane of one-point sets
///   det A != 0, tr A = 0    ad-rank or det A > 0: (planar set) x R; det A < 0: ker D is a line of one-point sets
///   det A = 0, tr A != 0    preimage of the planar affine control set, open iff tr A > 0

#include <optional>
#include <string>
#include <vector>

#include <Eigen/SVD>

#include "heisctl/normal_form.hpp"

namespace heisctl {

enum class CaseTag {
  kGloballyControllable,
  kPlaneOfOnePointSets,
  kCylinder,
  kLineOfOnePointSets,
  kPreimageOfAffineSet,
  kRegularOutOfScope,
};

inline std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kGloballyControllable: return "GloballyControllable";
    case CaseTag::kPlaneOfOnePointSets: return "PlaneOfOnePointSets";
    case CaseTag::kCylinder: return "Cylinder";
    case CaseTag::kLineOfOnePointSets: return "LineOfOnePointSets";
    case CaseTag::kPreimageOfAffineSet: return "PreimageOfAffineSet";
    case CaseTag::kRegularOutOfScope: return "RegularOutOfScope";
  }
  return "unknown";
}

inline std::optional<CaseTag> case_tag_from_string(const std::string& s) {
  for (auto tag : {CaseTag::kGloballyControllable, CaseTag::kPlaneOfOnePointSets, CaseTag::kCylinder,
                   CaseTag::kLineOfOnePointSets, CaseTag::kPreimageOfAffineSet, CaseTag::kRegularOutOfScope}) {
    if (to_string(tag) == s) return tag;
  }
  return std::nullopt;
}

enum class PlanarSetKind {
  kNone,
  kBox,         // (-int Omega) x Omega in the scaled eigen coordinates (mu v1 / zeta1, mu v2 / zeta2)
  kWholePlane,  // rotation case
  kAffine,      // control set of the (y, z) affine subsystem
};

inline std::string to_string(PlanarSetKind kind) {
  switch (kind) {
    case PlanarSetKind::kNone: return "none";
    case PlanarSetKind::kBox: return "box";
    case PlanarSetKind::kWholePlane: return "whole_plane";
    case PlanarSetKind::kAffine: return "affine";
  }
  return "unknown";
}

struct PlanarControlSet {
  PlanarSetKind kind = PlanarSetKind::kNone;
  double mu = 0.0;
  ControlRange range;
  double alpha = 0.0;  // affine kind: equilibria (-u, u (u + alpha)), u in Omega
  bool open = false;   // affine kind

  /// Box kind: x in (-hi, -lo), y in [lo, hi].
  bool box_contains(Vec2 w, double slack = 0.0) const {
    return -range.hi() + slack < w.x1 && w.x1 < -range.lo() - slack && range.lo() - slack <= w.x2 &&
           w.x2 <= range.hi() + slack;
  }
};

struct Classification {
  CaseTag tag = CaseTag::kRegularOutOfScope;
  bool larc = false;
  bool adrank = false;
  double det_a = 0.0;
  double tr_a = 0.0;
  /// Orthonormal basis of ker D (one-point-set cases only).
  std::vector<Point3> kernel;
  PlanarControlSet planar;
  /// Openness of the control set, for the cases where it is known.
  std::optional<bool> open;

  /// Dimension of the described set of control sets: 3 for the group or a
  /// cylinder / preimage, otherwise dim ker D.
  int set_dimension() const {
    switch (tag) {
      case CaseTag::kPlaneOfOnePointSets:
      case CaseTag::kLineOfOnePointSets: return static_cast<int>(kernel.size());
      case CaseTag::kRegularOutOfScope: return 0;
      default: return 3;
    }
  }
};

inline constexpr double kKernelTolerance = 1e-10;

/// Orthonormal basis of the numerical null space of the 3x3 derivation matrix.
inline std::vector<Point3> derivation_kernel(const Derivation& d) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(d.matrix(), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::vector<Point3> out;
  for (int i = 0; i < 3; ++i) {
    if (s(i) < kKernelTolerance) out.push_back(from_eigen(svd.matrixV().col(i)));
  }
  return out;
}

inline Classification classify(const SystemSpec& sys) {
  Classification c;
  c.larc = larc(sys);
  if (!c.larc) fail(ErrorKind::kLarcViolated, "omega(A zeta, zeta) = 0");
  c.adrank = adrank(sys);
  c.det_a = sys.det_a();
  c.tr_a = sys.tr_a();
  c.planar.range = sys.range();
  const DeclaredZeros z = sys.zeros();

  if (z.det_a && z.tr_a) {
    if (c.adrank) {
      c.tag = CaseTag::kGloballyControllable;
      c.open = true;
    } else {
      c.tag = CaseTag::kPlaneOfOnePointSets;
      c.kernel = derivation_kernel(sys.derivation());
    }
  } else if (z.tr_a) {
    if (c.adrank || c.det_a > 0.0) {
      c.tag = CaseTag::kCylinder;
      c.planar.mu = std::sqrt(std::abs(c.det_a));
      c.planar.kind = c.det_a > 0.0 ? PlanarSetKind::kWholePlane : PlanarSetKind::kBox;
    } else {
      c.tag = CaseTag::kLineOfOnePointSets;
      c.kernel = derivation_kernel(sys.derivation());
    }
  } else if (z.det_a) {
    c.tag = CaseTag::kPreimageOfAffineSet;
    c.planar.kind = PlanarSetKind::kAffine;
    c.planar.mu = c.tr_a;
    c.planar.alpha = NormalForm::of(sys).params().alpha;
    c.planar.open = c.tr_a > 0.0;
    c.open = c.planar.open;
  } else {
    c.tag = CaseTag::kRegularOutOfScope;
  }
  return c;
}

}  // namespace heisctl
