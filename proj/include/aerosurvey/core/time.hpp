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

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace aerosurvey {

/// UTC instant with microsecond resolution, stored as integer microseconds
/// since the Unix epoch. Integer storage keeps filename timestamps and
/// trigger times bit-exact.
class Timestamp {
 public:
  constexpr Timestamp() = default;

  static constexpr Timestamp from_micros(std::int64_t us) { return Timestamp(us); }
  /// Rounds to the nearest microsecond.
  static Timestamp from_seconds(double seconds);
  /// Parses ISO-8601 "YYYY-MM-DDTHH:MM:SS[.ffffff][Z]".
  static Timestamp parse_iso8601(std::string_view text);
  /// Parses a decimal seconds string ("1744411407.981822") exactly.
  static Timestamp parse_seconds(std::string_view text);

  constexpr std::int64_t micros() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) * 1e-6; }

  /// "YYYY-MM-DDTHH:MM:SS.ffffffZ"
  std::string iso8601() const;
  /// Decimal seconds with exactly six fractional digits.
  std::string seconds_string() const;

  constexpr Timestamp operator+(std::int64_t us) const { return Timestamp(us_ + us); }
  constexpr Timestamp operator-(std::int64_t us) const { return Timestamp(us_ - us); }
  constexpr std::int64_t operator-(Timestamp other) const { return us_ - other.us_; }

  constexpr auto operator<=>(const Timestamp&) const = default;

 private:
  constexpr explicit Timestamp(std::int64_t us) : us_(us) {}
  std::int64_t us_ = 0;
};

/// Broken-down UTC calendar time.
struct CivilTime {
  int year = 1970;
  int month = 1;
  int day = 1;
  int hour = 0;
  int minute = 0;
  int second = 0;
  int microsecond = 0;
};

CivilTime to_civil(Timestamp t);
/// Throws ValidationError on out-of-range fields.
Timestamp from_civil(const CivilTime& c);

inline constexpr std::int64_t kMicrosPerSecond = 1'000'000;

inline std::int64_t seconds_to_micros(double s) {
  return static_cast<std::int64_t>(s * 1e6 + (s >= 0 ? 0.5 : -0.5));
}

}  // namespace aerosurvey
