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

// Command dispatch for the heisctl tool. Lives in a header so the tests can
// run commands in-process.
//
// Exit codes: 0 ok, 1 input error or steering failure, 2 LARC fails,
// 3 regular case, 4 verification failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heisctl/io.hpp"

namespace heisctl::cli {

enum Exit : int { kOk = 0, kInputError = 1, kLarcFailure = 2, kRegularCase = 3, kVerificationFailure = 4 };

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kLarcViolated: return kLarcFailure;
    case ErrorKind::kSingularCaseUnsupported: return kRegularCase;
    case ErrorKind::kVerificationFailed: return kVerificationFailure;
    default: return kInputError;
  }
}

/// HEISCTL_SEED, or 1.
inline std::uint64_t default_seed() {
  if (const char* s = std::getenv("HEISCTL_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      fail(ErrorKind::kInvalidArgument, "HEISCTL_SEED must be an unsigned integer");
    }
  }
  return 1;
}

inline Point3 to_point(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

inline void print(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

/// Classification of a system that must have a control-set description.
inline Classification classify_in_scope(const SystemSpec& sys) {
  const Classification c = classify(sys);
  if (c.tag == CaseTag::kRegularOutOfScope) fail(ErrorKind::kSingularCaseUnsupported, "det A * tr A != 0");
  return c;
}

struct Options {
  std::string file;
  std::vector<double> x0{0, 0, 0};
  std::vector<double> from;
  std::vector<double> to;
  std::string plan_file;
  std::string out;
  std::string direction = "forward";
  double t = 1.0;
  double dt = kDefaultStep;
  double stride = 0.0;
  double horizon = 10.0;
  long samples = 1000;
  long budget = 10000;
  std::uint64_t seed = 1;
};

inline int cmd_check(const Options& o, std::ostream& out) {
  const SystemSpec sys = load_system(o.file).system;
  print(out, check_to_json(sys));
  return larc(sys) ? kOk : kLarcFailure;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  const SystemSpec sys = load_system(o.file).system;
  const Classification c = classify(sys);
  print(out, to_json(c));
  return c.tag == CaseTag::kRegularOutOfScope ? kRegularCase : kOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  const SystemSpec sys = load_system(o.file).system;
  PiecewiseControl ctrl;
  if (!o.plan_file.empty()) ctrl = plan_from_json(read_json_file(o.plan_file)).control;
  if (ctrl.empty()) {
    if (!(o.t >= 0.0)) fail(ErrorKind::kInvalidArgument, "--t must be >= 0");
    ctrl.push(o.t, 0.0);
  }
  const Trajectory traj = rk4_flow(sys, to_point(o.x0), ctrl, o.dt, o.stride);
  if (o.out.empty()) {
    write_csv(out, traj);
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) fail(ErrorKind::kInvalidArgument, "cannot write " + o.out);
    write_csv(f, traj);
  }
  return kOk;
}

/// Plans in normal coordinates and re-verifies the control on the system as
/// given: target, achieved and error are in the file's coordinates.
inline Plan plan_original(const SystemSpec& sys, const Point3& from, const Point3& to, std::uint64_t seed) {
  classify_in_scope(sys);
  const NormalForm nf = NormalForm::of(sys);
  PlanOptions opt;
  opt.steering.seed = seed;
  Plan plan = plan_between(nf, nf.to_normal(from), nf.to_normal(to), opt);
  plan.start = from;
  plan.target = to;
  verify_plan(plan, LcsField{sys}, opt.verify_step);
  return plan;
}

inline int cmd_plan(const Options& o, std::ostream& out) {
  const SystemSpec sys = load_system(o.file).system;
  const Plan plan = plan_original(sys, to_point(o.from), to_point(o.to), o.seed);
  print(out, to_json(plan));
  return kOk;
}

inline int cmd_reach(const Options& o, std::ostream& out) {
  const SystemSpec sys = load_system(o.file).system;
  const Direction dir = o.direction == "backward" ? Direction::kBackward : Direction::kForward;
  const OrbitCloud cloud = sample_orbit(sys, to_point(o.x0), dir, o.horizon, o.samples, o.seed);
  std::ofstream csv(o.out, std::ios::binary);
  if (!csv) fail(ErrorKind::kInvalidArgument, "cannot write " + o.out);
  write_cloud_csv(csv, cloud);
  const Json side = cloud_sidecar(cloud);
  std::ofstream js(std::filesystem::path(o.out).replace_extension(".json"), std::ios::binary);
  if (!js) fail(ErrorKind::kInvalidArgument, "cannot write the sidecar of " + o.out);
  js << side.dump(2) << '\n';
  print(out, side);
  return kOk;
}

inline VerificationBudget budget_of(long trajectories) {
  if (trajectories <= 0) fail(ErrorKind::kInvalidArgument, "--budget must be positive");
  VerificationBudget b;
  b.trajectories = trajectories;
  b.orbit_samples = std::max(100L, trajectories / 2);
  return b;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  const SystemFile file = load_system(o.file);
  Classification cls = classify_in_scope(file.system);
  if (file.claim) cls.tag = *file.claim;
  const VerificationReport report = verify_classification(file.system, cls, budget_of(o.budget), o.seed);
  print(out, to_json(report));
  return report.passed() ? kOk : kVerificationFailure;
}

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Control sets of singular linear control systems on the Heisenberg group", "heisctl"};
  app.require_subcommand(1);
  Options o;
  try {
    o.seed = default_seed();
  } catch (const Error& e) {
    err << "heisctl: " << e.what() << '\n';
    return kInputError;
  }

  auto file_arg = [&](CLI::App* c) { c->add_option("file", o.file, "system JSON file")->required(); };
  auto point = [](CLI::App* c, const char* name, std::vector<double>& v, const char* help) {
    return c->add_option(name, v, help)->delimiter(',')->expected(3);
  };

  auto* check = app.add_subcommand("check", "rank conditions and case");
  file_arg(check);
  auto* classify_cmd = app.add_subcommand("classify", "control-set classification");
  file_arg(classify_cmd);

  auto* simulate = app.add_subcommand("simulate", "integrate a plan (or u = 0 for --t) with RK4, CSV out");
  file_arg(simulate);
  point(simulate, "--x0", o.x0, "initial state x,y,z");
  simulate->add_option("--plan", o.plan_file, "plan JSON; empty or absent means u = 0");
  simulate->add_option("--t", o.t, "duration when the plan is empty");
  simulate->add_option("--dt", o.dt, "RK4 step")->check(CLI::PositiveNumber);
  simulate->add_option("--stride", o.stride, "output spacing in time, 0 = every step");
  simulate->add_option("--out", o.out, "CSV path (stdout if absent)");

  auto* plan = app.add_subcommand("plan", "steer between two points");
  file_arg(plan);
  point(plan, "--from", o.from, "start x,y,z")->required();
  point(plan, "--to", o.to, "target x,y,z")->required();
  plan->add_option("--seed", o.seed, "restart seed");

  auto* reach = app.add_subcommand("reach", "sample an orbit cloud, CSV plus JSON sidecar");
  file_arg(reach);
  point(reach, "--x0", o.x0, "base point x,y,z");
  reach->add_option("--dir", o.direction, "forward or backward")->check(CLI::IsMember({"forward", "backward"}));
  reach->add_option("--horizon", o.horizon, "total time per sample")->check(CLI::PositiveNumber);
  reach->add_option("--samples", o.samples, "number of trajectories")->check(CLI::PositiveNumber);
  reach->add_option("--seed", o.seed, "root seed");
  reach->add_option("--out", o.out, "CSV path; the sidecar takes the .json extension")->required();

  auto* verify = app.add_subcommand("verify", "numerical evidence for the classification or the file's claim");
  file_arg(verify);
  verify->add_option("--budget", o.budget, "certificate trajectories");
  verify->add_option("--seed", o.seed, "root seed");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "heisctl: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*check) return cmd_check(o, out);
    if (*classify_cmd) return cmd_classify(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*plan) return cmd_plan(o, out);
    if (*reach) return cmd_reach(o, out);
    if (*verify) return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "heisctl: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "heisctl: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace heisctl::cli
