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

/// \file system.hpp
/// One-input linear control systems on the Heisenberg group:
///
///   v' = A v + u zeta
///   z' = z tr A + u alpha + omega(v, theta eta + u zeta / 2),   u in [u_lo, u_hi]
///
/// together with the closed-form LARC / ad-rank criteria and a brute-force
/// rank oracle that does not use them.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "heisctl/heisenberg.hpp"

namespace heisctl {

/// Closed control interval [lo, hi] with lo < 0 < hi.
class ControlRange {
 public:
  ControlRange() : ControlRange(-1.0, 1.0) {}
  ControlRange(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < 0.0 && 0.0 < hi)) {
      fail(ErrorKind::kInvalidSystem, "control range must satisfy lo < 0 < hi, got [" + std::to_string(lo) +
                                          ", " + std::to_string(hi) + "]");
    }
  }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  bool contains(double u) const { return lo_ <= u && u <= hi_; }
  /// Bound on the side of 0 given by the sign of s.
  double bound(double s) const { return s >= 0.0 ? hi_ : lo_; }

  friend bool operator==(const ControlRange&, const ControlRange&) = default;

 private:
  double lo_;
  double hi_;
};

struct DeclaredZeros {
  bool det_a = false;
  bool tr_a = false;
  friend bool operator==(const DeclaredZeros&, const DeclaredZeros&) = default;
};

inline constexpr double kDeclaredZeroTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-9;

class SystemSpec {
 public:
  /// Validated construction from user data. Declared zeros must match the
  /// entries; a declared zero trace is made exact by setting a22 = -a11.
  static SystemSpec make(const Derivation& d, const AlgebraElement& z, const ControlRange& range,
                         DeclaredZeros zeros) {
    const double det = d.a.det();
    const double tr = d.a.tr();
    if (zeros.det_a != (std::abs(det) < kDeclaredZeroTolerance)) {
      fail(ErrorKind::kInvalidSystem, zeros.det_a ? "det A declared zero but |det A| = " + std::to_string(det)
                                                  : "det A vanishes but was not declared zero");
    }
    if (zeros.tr_a != (std::abs(tr) < kDeclaredZeroTolerance)) {
      fail(ErrorKind::kInvalidSystem, zeros.tr_a ? "tr A declared zero but tr A = " + std::to_string(tr)
                                                 : "tr A vanishes but was not declared zero");
    }
    return SystemSpec(d, z, range, zeros);
  }

  /// Zeros inferred by exact comparison; meant for exact (integer) input.
  static SystemSpec from_entries(const Derivation& d, const AlgebraElement& z, const ControlRange& range) {
    return SystemSpec(d, z, range, DeclaredZeros{d.a.det() == 0.0, d.a.tr() == 0.0});
  }

  /// Same control range and declared zeros, new data. Used for conjugated
  /// copies, whose det and tr agree with this system's by similarity.
  SystemSpec with(const Derivation& d, const AlgebraElement& z) const { return SystemSpec(d, z, range_, zeros_); }

  const Derivation& derivation() const { return d_; }
  const Mat2& a() const { return d_.a; }
  Vec2 eta() const { return d_.eta; }
  const AlgebraElement& control_vector() const { return z_; }
  Vec2 zeta() const { return z_.zeta; }
  double alpha() const { return z_.alpha; }
  const ControlRange& range() const { return range_; }
  DeclaredZeros zeros() const { return zeros_; }

  double det_a() const { return zeros_.det_a ? 0.0 : d_.a.det(); }
  double tr_a() const { return zeros_.tr_a ? 0.0 : d_.a.tr(); }

  /// True when every entry is an integer, so the algebraic criteria can be
  /// decided by exact comparison with zero.
  bool exact() const {
    const double entries[] = {d_.a.a11, d_.a.a12, d_.a.a21, d_.a.a22, d_.eta.x1, d_.eta.x2,
                              z_.zeta.x1, z_.zeta.x2, z_.alpha};
    return std::all_of(std::begin(entries), std::end(entries),
                       [](double e) { return std::nearbyint(e) == e && std::abs(e) < 1e6; });
  }

 private:
  SystemSpec(const Derivation& d, const AlgebraElement& z, const ControlRange& range, DeclaredZeros zeros)
      : d_(d), z_(z), range_(range), zeros_(zeros) {
    if (d_.is_zero()) fail(ErrorKind::kInvalidSystem, "the derivation vanishes identically");
    if (z_.alpha == 0.0 && z_.zeta.is_zero()) fail(ErrorKind::kInvalidSystem, "alpha^2 + |zeta|^2 must be nonzero");
    if (zeros_.tr_a) d_.a.a22 = -d_.a.a11;
  }

  Derivation d_;
  AlgebraElement z_;
  ControlRange range_;
  DeclaredZeros zeros_;
};

/// Vector field of the system at p for control value u, without range check.
inline Point3 lcs_field(const SystemSpec& sys, const Point3& p, double u) {
  const Vec2 v{p.x, p.y};
  const Vec2 vdot = sys.a() * v + u * sys.zeta();
  const double zdot = dot(sys.eta(), v) + sys.tr_a() * p.z + u * sys.alpha() + 0.5 * u * omega(v, sys.zeta());
  return {vdot.x1, vdot.x2, zdot};
}

inline Point3 rhs(const SystemSpec& sys, const Point3& p, double u) {
  if (!sys.range().contains(u)) {
    fail(ErrorKind::kControlOutOfRange, "u = " + std::to_string(u) + " outside [" + std::to_string(sys.range().lo()) +
                                            ", " + std::to_string(sys.range().hi()) + "]");
  }
  return lcs_field(sys, p, u);
}

namespace detail {
inline bool nonzero(double value, bool exact) { return exact ? value != 0.0 : std::abs(value) > kRankTolerance; }
}  // namespace detail

/// omega(A zeta, zeta).
inline double larc_factor(const SystemSpec& sys) { return omega(sys.a() * sys.zeta(), sys.zeta()); }

/// alpha det A + omega(A zeta, theta eta).
inline double adrank_factor(const SystemSpec& sys) {
  return sys.alpha() * sys.det_a() + omega(sys.a() * sys.zeta(), theta(sys.eta()));
}

inline bool larc(const SystemSpec& sys) { return detail::nonzero(larc_factor(sys), sys.exact()); }

inline bool adrank(const SystemSpec& sys) {
  const bool exact = sys.exact();
  return detail::nonzero(larc_factor(sys), exact) && detail::nonzero(adrank_factor(sys), exact);
}

struct RankOracleResult {
  bool larc = false;
  bool adrank = false;
  friend bool operator==(const RankOracleResult&, const RankOracleResult&) = default;
};

namespace detail {

/// Rank of the vectors in `rows`. With exact input, fraction-free (Bareiss)
/// elimination keeps every intermediate an integer, so zero tests are exact.
inline int rank_exact(std::vector<Point3> rows) {
  std::vector<std::array<double, 3>> m;
  m.reserve(rows.size());
  for (const auto& r : rows) m.push_back({r.x, r.y, r.z});
  int rank = 0;
  double prev = 1.0;
  for (int col = 0; col < 3 && rank < static_cast<int>(m.size()); ++col) {
    int pivot = -1;
    for (int i = rank; i < static_cast<int>(m.size()); ++i) {
      if (m[i][col] != 0.0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int i = rank + 1; i < static_cast<int>(m.size()); ++i) {
      for (int j = col + 1; j < 3; ++j) m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
      m[i][col] = 0.0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

inline int rank_numeric(const std::vector<Point3>& rows) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = to_eigen(rows[i]).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double tol = kRankTolerance * std::max(1.0, s(0));
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > tol ? 1 : 0;
  return rank;
}

inline int rank_of(const std::vector<Point3>& rows, bool exact) {
  return exact ? rank_exact(rows) : rank_numeric(rows);
}

}  // namespace detail

/// Decides both conditions by building the spanning sets explicitly: the
/// smallest D-invariant subalgebra containing Z (closure under D and brackets)
/// and span{Z, DZ, D^2 Z}.
inline RankOracleResult brute_rank_oracle(const SystemSpec& sys) {
  const bool exact = sys.exact();
  const Derivation& d = sys.derivation();
  auto apply_d = [&](const Point3& p) {
    const Vec2 v{p.x, p.y};
    const Vec2 av = d.a * v;
    return Point3{av.x1, av.x2, dot(d.eta, v) + sys.tr_a() * p.z};
  };
  auto lie = [](const Point3& p, const Point3& q) { return Point3{0.0, 0.0, omega({p.x, p.y}, {q.x, q.y})}; };

  const Point3 z = sys.control_vector().point();
  std::vector<Point3> basis;
  std::vector<Point3> queue{z};
  while (!queue.empty() && static_cast<int>(basis.size()) < 3) {
    const Point3 w = queue.back();
    queue.pop_back();
    std::vector<Point3> trial = basis;
    trial.push_back(w);
    if (detail::rank_of(trial, exact) <= static_cast<int>(basis.size())) continue;
    for (const auto& s : basis) queue.push_back(lie(w, s));
    basis.push_back(w);
    queue.push_back(apply_d(w));
  }

  const Point3 dz = apply_d(z);
  const Point3 ddz = apply_d(dz);
  RankOracleResult out;
  out.larc = static_cast<int>(basis.size()) == 3;
  out.adrank = detail::rank_of({z, dz, ddz}, exact) == 3;
  return out;
}

}  // namespace heisctl
