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

/// \file reduction.hpp
/// Conjugation of a system by a group automorphism, and the three reductions
/// used to reach normal forms: removing alpha, removing eta, and putting A in
/// diagonal / rotation form.

#include <cmath>
#include <utility>

#include "heisctl/system.hpp"

namespace heisctl {

/// The system with derivation P D P^{-1} and control vector P Z. Its
/// trajectories are the images under psi of the original ones.
inline SystemSpec conjugate_system(const Automorphism& psi, const SystemSpec& sys) {
  return sys.with(conjugate_derivation(psi, sys.derivation()), psi.apply(sys.control_vector()));
}

using Reduction = std::pair<SystemSpec, Automorphism>;

/// P = I/2 and xi = -(alpha det P / |zeta|^2) zeta, which zeroes the alpha
/// component of P Z.
inline Reduction eliminate_alpha(const SystemSpec& sys) {
  const Vec2 zeta = sys.zeta();
  if (zeta.is_zero()) fail(ErrorKind::kZeroZeta, "eliminate_alpha needs zeta != 0");
  const Mat2 p = 0.5 * Mat2::identity();
  const Vec2 xi = -(sys.alpha() * p.det() / zeta.norm2()) * zeta;
  const Automorphism psi(p, xi);
  const SystemSpec out = conjugate_system(psi, sys);
  // The alpha component is zero up to rounding; store the exact value.
  return {out.with(out.derivation(), AlgebraElement{out.zeta(), 0.0}), psi};
}

/// P = I and xi solving (A - tr A I)^T xi = -eta; only possible when det A != 0
/// because det(A - tr A I) = det A.
inline Reduction eliminate_eta(const SystemSpec& sys) {
  if (sys.zeros().det_a) fail(ErrorKind::kSingularCaseUnsupported, "eliminate_eta needs det A != 0");
  const Mat2 shifted = sys.a() - sys.tr_a() * Mat2::identity();
  const Vec2 xi = solve2(shifted.transpose(), -sys.eta());
  const Automorphism psi(Mat2::identity(), xi);
  const SystemSpec out = conjugate_system(psi, sys);
  return {out.with(Derivation{out.a(), Vec2{}}, out.control_vector()), psi};
}

enum class DiagonalForm {
  kZeroAndTrace,   // diag(0, mu), mu = tr A
  kSaddle,         // diag(mu, -mu), mu = sqrt(-det A)
  kRotation,       // mu * theta, mu = sqrt(det A)
};

inline DiagonalForm diagonal_form_of(const SystemSpec& sys) {
  const DeclaredZeros z = sys.zeros();
  if (z.det_a && !z.tr_a) return DiagonalForm::kZeroAndTrace;
  if (z.tr_a && !z.det_a) return sys.det_a() < 0.0 ? DiagonalForm::kSaddle : DiagonalForm::kRotation;
  fail(ErrorKind::kNotDiagonalizable,
       z.det_a ? "A is nilpotent (det A = tr A = 0)" : "no singular normal form when det A * tr A != 0");
}

/// Conjugates by the change of basis to the eigen (or rotation) basis of A,
/// with xi = 0. The returned A is set to the exact normal form.
inline Reduction diagonalize_a(const SystemSpec& sys) {
  const DiagonalForm form = diagonal_form_of(sys);
  const Mat2& a = sys.a();
  Mat2 basis;
  Mat2 target;
  switch (form) {
    case DiagonalForm::kZeroAndTrace: {
      const double mu = sys.tr_a();
      basis = Mat2::from_columns(eigenvector(a, 0.0), eigenvector(a, mu));
      target = Mat2::diag(0.0, mu);
      break;
    }
    case DiagonalForm::kSaddle: {
      const double mu = std::sqrt(-sys.det_a());
      basis = Mat2::from_columns(eigenvector(a, mu), eigenvector(a, -mu));
      target = Mat2::diag(mu, -mu);
      break;
    }
    case DiagonalForm::kRotation: {
      const double mu = std::sqrt(sys.det_a());
      const Vec2 w{1.0, 0.0};
      basis = Mat2::from_columns(w, (1.0 / mu) * (a * w));
      target = mu * Mat2::rotation_generator();
      break;
    }
  }
  const Automorphism psi(inverse(basis), Vec2{});
  const SystemSpec out = conjugate_system(psi, sys);
  return {out.with(Derivation{target, out.eta()}, out.control_vector()), psi};
}

}  // namespace heisctl
