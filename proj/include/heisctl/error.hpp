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

#include <stdexcept>
#include <string>
#include <string_view>

namespace heisctl {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidSystem,
  kSingularMatrix,
  kControlOutOfRange,
  kZeroZeta,
  kZeroZetaComponent,
  kSingularCaseUnsupported,
  kNotDiagonalizable,
  kLarcViolated,
  kDomainViolation,
  kSteeringFailed,
  kDirectionUnreachable,
  kVerificationFailed,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInvalidSystem: return "InvalidSystem";
    case ErrorKind::kSingularMatrix: return "SingularMatrix";
    case ErrorKind::kControlOutOfRange: return "ControlOutOfRange";
    case ErrorKind::kZeroZeta: return "ZeroZeta";
    case ErrorKind::kZeroZetaComponent: return "ZeroZetaComponent";
    case ErrorKind::kSingularCaseUnsupported: return "SingularCaseUnsupported";
    case ErrorKind::kNotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::kLarcViolated: return "LarcViolated";
    case ErrorKind::kDomainViolation: return "DomainViolation";
    case ErrorKind::kSteeringFailed: return "SteeringFailed";
    case ErrorKind::kDirectionUnreachable: return "DirectionUnreachable";
    case ErrorKind::kVerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace heisctl
