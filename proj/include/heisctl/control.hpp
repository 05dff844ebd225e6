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

/// \file control.hpp
/// Piecewise-constant controls and sampled trajectories.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "heisctl/system.hpp"

namespace heisctl {

struct Segment {
  double duration = 0.0;
  double u = 0.0;
  friend bool operator==(const Segment&, const Segment&) = default;
};

class PiecewiseControl {
 public:
  PiecewiseControl() = default;
  explicit PiecewiseControl(std::vector<Segment> segments) {
    for (const auto& s : segments) push(s.duration, s.u);
  }

  /// Appends a segment; zero durations are dropped.
  PiecewiseControl& push(double duration, double u) {
    if (!(std::isfinite(duration) && duration >= 0.0) || !std::isfinite(u)) {
      fail(ErrorKind::kInvalidArgument, "segment needs a finite duration >= 0 and a finite level");
    }
    if (duration > 0.0) segments_.push_back({duration, u});
    return *this;
  }

  PiecewiseControl& append(const PiecewiseControl& other) {
    segments_.insert(segments_.end(), other.segments_.begin(), other.segments_.end());
    return *this;
  }

  const std::vector<Segment>& segments() const { return segments_; }
  bool empty() const { return segments_.empty(); }
  std::size_t size() const { return segments_.size(); }

  double total_duration() const {
    double t = 0.0;
    for (const auto& s : segments_) t += s.duration;
    return t;
  }

  bool admissible(const ControlRange& range) const {
    for (const auto& s : segments_) {
      if (!range.contains(s.u)) return false;
    }
    return true;
  }

  void require_admissible(const ControlRange& range) const {
    for (const auto& s : segments_) {
      if (!range.contains(s.u)) fail(ErrorKind::kControlOutOfRange, "segment level " + std::to_string(s.u));
    }
  }

  friend bool operator==(const PiecewiseControl&, const PiecewiseControl&) = default;

 private:
  std::vector<Segment> segments_;
};

struct Sample {
  double t = 0.0;
  Point3 state;
  double u = 0.0;  // control level on the interval starting at t
};

struct Trajectory {
  std::vector<Sample> samples;
  PiecewiseControl control;
  std::string system_id;

  const Point3& endpoint() const { return samples.back().state; }
  double duration() const { return samples.empty() ? 0.0 : samples.back().t; }
};

/// CSV with header `t,x,y,z,u`, %.12g, LF line endings.
inline void write_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,x,y,z,u\n";
  char line[160];
  for (const auto& s : traj.samples) {
    std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.state.x, s.state.y, s.state.z, s.u);
    out << line;
  }
}

}  // namespace heisctl
