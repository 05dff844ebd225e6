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

/// \file io.hpp
/// JSON for system files, classifications, plans and reports; CSV for clouds.
/// Kept out of heisctl.hpp so the core only needs Eigen.
///
/// Reals are written by nlohmann::json, which emits the shortest decimal that
/// parses back to the same double.

#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "heisctl/heisctl.hpp"

namespace heisctl {

using Json = nlohmann::ordered_json;

struct SystemFile {
  SystemSpec system;
  std::optional<CaseTag> claim;
};

namespace detail {

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::kInvalidArgument, std::string("missing key '") + key + "'");
  return j.at(key);
}

inline double real(const Json& j, const char* what) {
  if (!j.is_number()) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be finite");
  return v;
}

inline Vec2 vec2(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be a 2-array");
  return {real(j[0], what), real(j[1], what)};
}

inline bool boolean(const Json& j, const char* what) {
  if (!j.is_boolean()) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be true or false");
  return j.get<bool>();
}

}  // namespace detail

/// Reads a system file. declared_zeros is mandatory; a declared zero trace is
/// made exact by setting a22 = -a11.
inline SystemFile parse_system(const Json& j) {
  const Json& a = detail::member(j, "A");
  if (!a.is_array() || a.size() != 2) fail(ErrorKind::kInvalidArgument, "A must be a 2x2 array");
  const Vec2 r0 = detail::vec2(a[0], "A row");
  const Vec2 r1 = detail::vec2(a[1], "A row");
  Mat2 m{r0.x1, r0.x2, r1.x1, r1.x2};
  const Vec2 eta = detail::vec2(detail::member(j, "eta"), "eta");
  const Vec2 zeta = detail::vec2(detail::member(j, "zeta"), "zeta");
  const double alpha = detail::real(detail::member(j, "alpha"), "alpha");
  const Json& om = detail::member(j, "omega");
  const ControlRange range(detail::real(detail::member(om, "min"), "omega.min"),
                           detail::real(detail::member(om, "max"), "omega.max"));
  const Json& dz = detail::member(j, "declared_zeros");
  const DeclaredZeros zeros{detail::boolean(detail::member(dz, "det_A"), "declared_zeros.det_A"),
                            detail::boolean(detail::member(dz, "tr_A"), "declared_zeros.tr_A")};
  if (zeros.tr_a && std::abs(m.tr()) < kDeclaredZeroTolerance) m.a22 = -m.a11;

  SystemFile out{SystemSpec::make(Derivation{m, eta}, AlgebraElement{zeta, alpha}, range, zeros), std::nullopt};
  if (j.contains("claim")) {
    const Json& c = j.at("claim");
    if (!c.is_string()) fail(ErrorKind::kInvalidArgument, "claim must be a case tag string");
    out.claim = case_tag_from_string(c.get<std::string>());
    if (!out.claim) fail(ErrorKind::kInvalidArgument, "unknown case tag '" + c.get<std::string>() + "'");
  }
  return out;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInvalidArgument, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInvalidArgument, path + ": " + e.what());
  }
}

inline SystemFile load_system(const std::string& path) { return parse_system(read_json_file(path)); }

inline Json to_json(const Point3& p) { return Json::array({p.x, p.y, p.z}); }

inline Point3 point_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) fail(ErrorKind::kInvalidArgument, std::string(what) + " must be a 3-array");
  return {detail::real(j[0], what), detail::real(j[1], what), detail::real(j[2], what)};
}

inline Json system_to_json(const SystemSpec& sys) {
  const Mat2& a = sys.a();
  Json j;
  j["A"] = Json::array({Json::array({a.a11, a.a12}), Json::array({a.a21, a.a22})});
  j["eta"] = Json::array({sys.eta().x1, sys.eta().x2});
  j["zeta"] = Json::array({sys.zeta().x1, sys.zeta().x2});
  j["alpha"] = sys.alpha();
  j["omega"] = {{"min", sys.range().lo()}, {"max", sys.range().hi()}};
  j["declared_zeros"] = {{"det_A", sys.zeros().det_a}, {"tr_A", sys.zeros().tr_a}};
  return j;
}

inline Json check_to_json(const SystemSpec& sys) {
  Json j;
  const bool l = larc(sys);
  j["larc"] = l;
  j["adrank"] = adrank(sys);
  j["det_A"] = sys.det_a();
  j["tr_A"] = sys.tr_a();
  j["case"] = l ? Json(to_string(classify(sys).tag)) : Json(nullptr);
  return j;
}

inline Json to_json(const Classification& c) {
  Json j;
  j["tag"] = to_string(c.tag);
  j["larc"] = c.larc;
  j["adrank"] = c.adrank;
  j["det_A"] = c.det_a;
  j["tr_A"] = c.tr_a;
  j["set_dimension"] = c.set_dimension();
  Json kernel = Json::array();
  for (const auto& k : c.kernel) kernel.push_back(to_json(k));
  j["kernel"] = kernel;
  Json planar;
  planar["kind"] = to_string(c.planar.kind);
  planar["mu"] = c.planar.mu;
  planar["omega"] = {{"min", c.planar.range.lo()}, {"max", c.planar.range.hi()}};
  planar["alpha"] = c.planar.alpha;
  planar["open"] = c.planar.open;
  j["planar_set"] = planar;
  j["open"] = c.open ? Json(*c.open) : Json(nullptr);
  return j;
}

inline Json to_json(const PiecewiseControl& ctrl) {
  Json segs = Json::array();
  for (const auto& s : ctrl.segments()) segs.push_back({{"u", s.u}, {"duration", s.duration}});
  return segs;
}

inline PiecewiseControl control_from_json(const Json& segs) {
  if (!segs.is_array()) fail(ErrorKind::kInvalidArgument, "segments must be an array");
  PiecewiseControl c;
  for (const auto& s : segs) {
    const double d = detail::real(detail::member(s, "duration"), "duration");
    if (d < 0.0) fail(ErrorKind::kInvalidArgument, "duration must be >= 0");
    c.push(d, detail::real(detail::member(s, "u"), "u"));
  }
  return c;
}

inline Json to_json(const Plan& p) {
  Json j;
  j["segments"] = to_json(p.control);
  j["target"] = to_json(p.target);
  j["achieved"] = to_json(p.achieved);
  j["error"] = p.error;
  j["seed"] = p.seed;
  return j;
}

inline Plan plan_from_json(const Json& j) {
  Plan p;
  p.control = control_from_json(detail::member(j, "segments"));
  if (j.contains("target")) p.target = point_from_json(j.at("target"), "target");
  if (j.contains("achieved")) p.achieved = point_from_json(j.at("achieved"), "achieved");
  if (j.contains("error")) p.error = detail::real(j.at("error"), "error");
  if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
  return p;
}

inline Json to_json(const VerificationBudget& b) {
  return {{"trajectories", b.trajectories},
          {"orbit_samples", b.orbit_samples},
          {"horizon", b.horizon},
          {"certificate_horizon", b.certificate_horizon}};
}

inline Json to_json(const VerificationReport& r) {
  Json j;
  j["tag"] = to_string(r.tag);
  j["classifier_tag"] = to_string(r.classifier_tag);
  j["passed"] = r.passed();
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["checks"] = checks;
  Json ces = Json::array();
  for (const auto& c : r.counterexamples) {
    Json pts = Json::array();
    for (const auto& p : c.points) pts.push_back(to_json(p));
    ces.push_back({{"check", c.check}, {"points", pts}, {"note", c.note}});
  }
  j["counterexamples"] = ces;
  j["coverage_cells"] = r.coverage_cells ? Json(*r.coverage_cells) : Json(nullptr);
  j["budget"] = to_json(r.budget);
  j["seed"] = r.seed;
  return j;
}

/// Sidecar for a cloud CSV.
inline Json cloud_sidecar(const OrbitCloud& c) {
  Json j;
  j["base"] = to_json(c.base);
  j["direction"] = to_string(c.direction);
  j["horizon"] = c.horizon;
  j["samples"] = c.points.size();
  j["seed"] = c.seed;
  j["sampling_law"] = {{"segments", "1 + geometric, mean " + std::to_string(static_cast<int>(c.law.mean_segments))},
                       {"levels", "uniform on omega"},
                       {"durations", "sorted uniform cuts of the horizon"},
                       {"step", c.law.step},
                       {"stream", "mt19937_64 seeded with splitmix64(splitmix64(seed) + i)"}};
  return j;
}

/// CSV with header x,y,z and %.17g reals.
inline void write_cloud_csv(std::ostream& out, const OrbitCloud& c) {
  out << "x,y,z\n";
  char line[96];
  for (const auto& p : c.points) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.x, p.y, p.z);
    out << line;
  }
}

}  // namespace heisctl
