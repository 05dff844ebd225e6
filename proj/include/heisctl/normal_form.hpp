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

/// \file normal_form.hpp
/// Reduction of a singular system to one of four normal forms, with the
/// composite coordinate change in both directions. Every step preserves the
/// control value, so a control found in normal coordinates drives the original
/// system along the image trajectory.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "heisctl/flows.hpp"
#include "heisctl/reduction.hpp"

namespace heisctl {

enum class NormalFormKind {
  kNilpotent,   // x' = y, y' = u, z' = a x + (2 x u - y^2) / 3
  kTraceFree,   // tr A = 0, det A != 0, eta = 0, A = mu theta or diag(mu, -mu); alpha kept
  kHyperbolic,  // x' = mu (x + u), y' = mu (-y + u), z' = u mu y
  kAffine,      // x' = mu u, y' = mu (y + u), z' = mu (z + u y + alpha y)
};

inline std::string to_string(NormalFormKind kind) {
  switch (kind) {
    case NormalFormKind::kNilpotent: return "nilpotent";
    case NormalFormKind::kTraceFree: return "trace_free";
    case NormalFormKind::kHyperbolic: return "hyperbolic";
    case NormalFormKind::kAffine: return "affine";
  }
  return "unknown";
}

struct NormalFormParams {
  double a = 0.0;       // nilpotent
  double b = 0.0;       // nilpotent shear
  double mu = 0.0;      // trace-free, hyperbolic, affine
  double zeta1 = 0.0;   // hyperbolic, affine
  double zeta2 = 0.0;
  double eta1 = 0.0;    // affine shear
  double alpha = 0.0;   // affine coefficient, or the kept alpha of the trace-free form
  bool rotation = false;  // trace-free with A = mu theta
};

/// A point map together with its inverse.
struct CoordinateChange {
  std::function<Point3(const Point3&)> forward;
  std::function<Point3(const Point3&)> inverse;
};

class NormalForm {
 public:
  NormalFormKind kind() const { return kind_; }
  const NormalFormParams& params() const { return params_; }
  /// The last system in native form before any nonlinear map. For the
  /// trace-free kind this is the normal form itself.
  const SystemSpec& reduced() const { return reduced_; }
  const ControlRange& range() const { return reduced_.range(); }

  Point3 to_normal(Point3 p) const {
    for (const auto& c : chain_) p = c.forward(p);
    return p;
  }
  Point3 from_normal(Point3 p) const {
    for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) p = it->inverse(p);
    return p;
  }

  Point3 field(const Point3& p, double u) const {
    switch (kind_) {
      case NormalFormKind::kNilpotent: return NilpotentField{params_.a}(p, u);
      case NormalFormKind::kTraceFree: return lcs_field(reduced_, p, u);
      case NormalFormKind::kHyperbolic: return HyperbolicField{params_.mu}(p, u);
      case NormalFormKind::kAffine: return DegTraceField{params_.mu, params_.alpha}(p, u);
    }
    return {};
  }

  /// Constant-control flow in closed form.
  Point3 flow(const Point3& p, double u, double t) const {
    switch (kind_) {
      case NormalFormKind::kNilpotent: return flow_case00(p, u, t, params_.a);
      case NormalFormKind::kTraceFree: return flow_tracefree(reduced_, p, u, t);
      case NormalFormKind::kHyperbolic: return flow_case_hyp(p, u, t, params_.mu);
      case NormalFormKind::kAffine: return flow_case_degtrace(p, u, t, params_.mu, params_.alpha);
    }
    return p;
  }

  Point3 flow(Point3 p, const PiecewiseControl& ctrl) const {
    for (const auto& s : ctrl.segments()) p = flow(p, s.u, s.duration);
    return p;
  }

  static NormalForm of(const SystemSpec& sys);

  NormalForm(NormalFormKind kind, NormalFormParams params, SystemSpec reduced, std::vector<CoordinateChange> chain)
      : kind_(kind), params_(params), reduced_(std::move(reduced)), chain_(std::move(chain)) {}

 private:
  NormalFormKind kind_;
  NormalFormParams params_;
  SystemSpec reduced_;
  std::vector<CoordinateChange> chain_;
};

/// Field wrapper so a normal form can be handed to the RK4 routines.
struct NormalFormField {
  const NormalForm* nf;
  Point3 operator()(const Point3& p, double u) const { return nf->field(p, u); }
};

namespace detail {

inline CoordinateChange automorphism_step(const Automorphism& psi) {
  const Automorphism inv = psi.inverse();
  return {[psi](const Point3& p) { return psi.apply(p); }, [inv](const Point3& p) { return inv.apply(p); }};
}

inline NormalForm reduce_nilpotent(const SystemSpec& sys, std::vector<CoordinateChange> chain);
inline NormalForm reduce_trace_free(const SystemSpec& sys, std::vector<CoordinateChange> chain);
inline NormalForm reduce_affine(const SystemSpec& sys, std::vector<CoordinateChange> chain);

}  // namespace detail

/// Requires the LARC. The regular case det A * tr A != 0 has no normal form
/// here and raises SingularCaseUnsupported.
inline NormalForm NormalForm::of(const SystemSpec& sys) {
  if (!larc(sys)) fail(ErrorKind::kLarcViolated, "normal forms need omega(A zeta, zeta) != 0");
  const DeclaredZeros z = sys.zeros();
  if (z.det_a && z.tr_a) return detail::reduce_nilpotent(sys, {});
  if (z.tr_a) return detail::reduce_trace_free(sys, {});
  if (z.det_a) return detail::reduce_affine(sys, {});
  fail(ErrorKind::kSingularCaseUnsupported, "det A * tr A != 0: regular case");
}

namespace detail {

inline NormalForm reduce_nilpotent(const SystemSpec& sys, std::vector<CoordinateChange> chain) {
  auto [s1, psi] = eliminate_alpha(sys);
  chain.push_back(automorphism_step(psi));

  const Vec2 a_zeta = s1.a() * s1.zeta();
  const Vec2 zeta = s1.zeta();
  const double w = omega(a_zeta, zeta);
  // v = x A zeta + y zeta, z' = 2 z / w.
  const Mat2 basis = Mat2::from_columns(a_zeta, zeta);
  const Mat2 basis_inv = inverse(basis);
  chain.push_back({[basis_inv, w](const Point3& p) {
                     const Vec2 c = basis_inv * Vec2{p.x, p.y};
                     return Point3{c.x1, c.x2, 2.0 * p.z / w};
                   },
                   [basis, w](const Point3& p) {
                     const Vec2 v = basis * Vec2{p.x, p.y};
                     return Point3{v.x1, v.x2, 0.5 * w * p.z};
                   }});

  NormalFormParams params;
  params.a = 2.0 * omega(a_zeta, theta(s1.eta())) / w;
  params.b = 2.0 * omega(zeta, theta(s1.eta())) / w;
  if (!adrank(sys)) params.a = 0.0;
  const double b = params.b;
  chain.push_back({[b](const Point3& p) { return conj_map_case00(p, b); },
                   [b](const Point3& p) { return conj_map_case00_inverse(p, b); }});
  return NormalForm(NormalFormKind::kNilpotent, params, s1, std::move(chain));
}

inline NormalForm reduce_trace_free(const SystemSpec& sys, std::vector<CoordinateChange> chain) {
  auto [s1, psi1] = eliminate_eta(sys);
  chain.push_back(automorphism_step(psi1));
  auto [s2, psi2] = diagonalize_a(s1);
  chain.push_back(automorphism_step(psi2));

  NormalFormParams params;
  const DiagonalForm form = diagonal_form_of(s2);
  params.rotation = form == DiagonalForm::kRotation;
  params.mu = params.rotation ? s2.a().a21 : s2.a().a11;
  params.alpha = s2.alpha();
  params.zeta1 = s2.zeta().x1;
  params.zeta2 = s2.zeta().x2;

  if (form == DiagonalForm::kSaddle && !adrank(sys)) {
    // alpha vanishes together with the ad-rank factor once eta = 0.
    const SystemSpec s3 = s2.with(s2.derivation(), AlgebraElement{s2.zeta(), 0.0});
    params.alpha = 0.0;
    const double mu = params.mu;
    const double z1 = params.zeta1;
    const double z2 = params.zeta2;
    chain.push_back({[=](const Point3& p) { return conj_map_hyp(p, mu, z1, z2); },
                     [=](const Point3& p) { return conj_map_hyp_inverse(p, mu, z1, z2); }});
    return NormalForm(NormalFormKind::kHyperbolic, params, s3, std::move(chain));
  }
  if (!adrank(sys)) {
    params.alpha = 0.0;
    s2 = s2.with(s2.derivation(), AlgebraElement{s2.zeta(), 0.0});
  }
  return NormalForm(NormalFormKind::kTraceFree, params, s2, std::move(chain));
}

inline NormalForm reduce_affine(const SystemSpec& sys, std::vector<CoordinateChange> chain) {
  auto [s1, psi1] = diagonalize_a(sys);
  chain.push_back(automorphism_step(psi1));
  auto [s2, psi2] = eliminate_alpha(s1);
  chain.push_back(automorphism_step(psi2));

  NormalFormParams params;
  params.mu = s2.tr_a();
  params.zeta1 = s2.zeta().x1;
  params.zeta2 = s2.zeta().x2;
  params.eta1 = s2.eta().x1;
  params.alpha = -s2.eta().x2 / params.zeta1;
  const double mu = params.mu;
  const double z1 = params.zeta1;
  const double z2 = params.zeta2;
  const double e1 = params.eta1;
  chain.push_back({[=](const Point3& p) { return conj_map_degtrace(p, mu, z1, z2, e1); },
                   [=](const Point3& p) { return conj_map_degtrace_inverse(p, mu, z1, z2, e1); }});
  return NormalForm(NormalFormKind::kAffine, params, s2, std::move(chain));
}

}  // namespace detail

}  // namespace heisctl
