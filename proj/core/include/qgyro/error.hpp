// Copyright 2026 The qgyro Authors
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

namespace qgyro {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kConfig,
  kNegativeRate,
  kNullSpaceDegenerate,
  kNotPositive,
  kNoBracket,
  kSolutionRejected,
  kStepSizeUnderflow,
  kStateInvalid,
  kSeriesTooShort,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` distinguishes the cause.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for numerical failures (as opposed to bad input or configuration).
  bool is_solver_failure() const noexcept {
    switch (kind_) {
      case ErrorKind::kNullSpaceDegenerate:
      case ErrorKind::kNotPositive:
      case ErrorKind::kNoBracket:
      case ErrorKind::kSolutionRejected:
      case ErrorKind::kStepSizeUnderflow:
      case ErrorKind::kStateInvalid:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace qgyro
