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

#include "aerosurvey/core/time.hpp"

#include <fmt/format.h>

#include <cctype>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey {
namespace {

// Days-from-civil / civil-from-days (proleptic Gregorian), H. Hinnant.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2));
}

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return (m == 2 && leap) ? 29 : kDays[m - 1];
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

int parse_fixed(std::string_view text, std::size_t pos, std::size_t width) {
  if (pos + width > text.size()) throw ParseError("truncated timestamp", text.size());
  int v = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      throw ParseError("expected digit in timestamp", i);
    }
    v = v * 10 + (text[i] - '0');
  }
  return v;
}

}  // namespace

Timestamp Timestamp::from_seconds(double seconds) { return Timestamp(seconds_to_micros(seconds)); }

CivilTime to_civil(Timestamp t) {
  const std::int64_t us = t.micros();
  const std::int64_t secs = floor_div(us, kMicrosPerSecond);
  const std::int64_t days = floor_div(secs, 86400);
  const std::int64_t sod = secs - days * 86400;
  CivilTime c;
  civil_from_days(days, c.year, c.month, c.day);
  c.hour = static_cast<int>(sod / 3600);
  c.minute = static_cast<int>((sod % 3600) / 60);
  c.second = static_cast<int>(sod % 60);
  c.microsecond = static_cast<int>(us - secs * kMicrosPerSecond);
  return c;
}

Timestamp from_civil(const CivilTime& c) {
  if (c.month < 1 || c.month > 12) throw ValidationError(fmt::format("month {} out of range", c.month));
  if (c.day < 1 || c.day > days_in_month(c.year, c.month)) {
    throw ValidationError(fmt::format("day {} out of range", c.day));
  }
  if (c.hour < 0 || c.hour > 23 || c.minute < 0 || c.minute > 59 || c.second < 0 || c.second > 59) {
    throw ValidationError("time of day out of range");
  }
  if (c.microsecond < 0 || c.microsecond > 999999) throw ValidationError("microsecond out of range");
  const std::int64_t days =
      days_from_civil(c.year, static_cast<unsigned>(c.month), static_cast<unsigned>(c.day));
  const std::int64_t secs = days * 86400 + c.hour * 3600 + c.minute * 60 + c.second;
  return Timestamp::from_micros(secs * kMicrosPerSecond + c.microsecond);
}

std::string Timestamp::iso8601() const {
  const CivilTime c = to_civil(*this);
  return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:06d}Z", c.year, c.month, c.day,
                     c.hour, c.minute, c.second, c.microsecond);
}

std::string Timestamp::seconds_string() const {
  const std::int64_t secs = floor_div(us_, kMicrosPerSecond);
  const std::int64_t frac = us_ - secs * kMicrosPerSecond;
  return fmt::format("{}.{:06d}", secs, frac);
}

Timestamp Timestamp::parse_iso8601(std::string_view text) {
  CivilTime c;
  c.year = parse_fixed(text, 0, 4);
  if (text.size() < 19 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':' || text[16] != ':') {
    throw ParseError("malformed ISO-8601 timestamp", std::min<std::size_t>(text.size(), 4));
  }
  c.month = parse_fixed(text, 5, 2);
  c.day = parse_fixed(text, 8, 2);
  c.hour = parse_fixed(text, 11, 2);
  c.minute = parse_fixed(text, 14, 2);
  c.second = parse_fixed(text, 17, 2);
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    int frac = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits >= 6) throw ParseError("more than six fractional digits", pos);
      frac = frac * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) throw ParseError("empty fraction", pos);
    for (; digits < 6; ++digits) frac *= 10;
    c.microsecond = frac;
  }
  if (pos < text.size() && text[pos] == 'Z') ++pos;
  if (pos != text.size()) throw ParseError("trailing characters in timestamp", pos);
  return from_civil(c);
}

Timestamp Timestamp::parse_seconds(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
  }
  const std::size_t int_start = pos;
  std::int64_t whole = 0;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    whole = whole * 10 + (text[pos] - '0');
    ++pos;
  }
  if (pos == int_start) throw ParseError("expected seconds value", pos);
  std::int64_t frac = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits < 6) {
        frac = frac * 10 + (text[pos] - '0');
      } else if (digits == 6 && text[pos] >= '5') {
        frac += 1;  // round half up at the seventh digit
      }
      ++digits;
      ++pos;
    }
    for (int d = std::min(digits, 6); d < 6; ++d) frac *= 10;
  }
  if (pos != text.size()) throw ParseError("trailing characters in seconds value", pos);
  const std::int64_t us = whole * kMicrosPerSecond + frac;
  return from_micros(negative ? -us : us);
}

}  // namespace aerosurvey
