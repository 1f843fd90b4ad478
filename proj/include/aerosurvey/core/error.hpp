// Copyright 2026 The aerosurvey Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aerosurvey {

/// Base of every error raised by the library. `kind()` is a stable short
/// identifier used by the CLI's structured error line.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define AEROSURVEY_DEFINE_ERROR(Name, Kind)                   \
  class Name : public Error {                                 \
   public:                                                    \
    explicit Name(const std::string& message) : Error(Kind, message) {} \
  }

// geom
AEROSURVEY_DEFINE_ERROR(HorizonError, "horizon");
AEROSURVEY_DEFINE_ERROR(BehindCameraError, "behind_camera");
AEROSURVEY_DEFINE_ERROR(NonConvergenceError, "non_convergence");
// calib
AEROSURVEY_DEFINE_ERROR(DegenerateConfigurationError, "degenerate_configuration");
AEROSURVEY_DEFINE_ERROR(InsufficientDataError, "insufficient_data");
AEROSURVEY_DEFINE_ERROR(MissingPoseError, "missing_pose");
// sync
AEROSURVEY_DEFINE_ERROR(ProtocolError, "protocol");
// sim
AEROSURVEY_DEFINE_ERROR(PlanError, "plan");
// detect
AEROSURVEY_DEFINE_ERROR(ConfigurationError, "configuration");
AEROSURVEY_DEFINE_ERROR(SizeError, "size");
// archive / io
AEROSURVEY_DEFINE_ERROR(ValidationError, "validation");
AEROSURVEY_DEFINE_ERROR(IoError, "io");

#undef AEROSURVEY_DEFINE_ERROR

/// Raised when a textual input does not conform; `position()` is the byte
/// offset of the first offending character.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error("parse", message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace aerosurvey
