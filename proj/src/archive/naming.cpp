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


#include "aerosurvey/archive/naming.hpp"

#include <fmt/format.h>

#include <cctype>
#include <limits>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::archive {
namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool is_flight_token(std::string_view tok) {
  if (tok.size() < 3 || tok.substr(0, 2) != "fl") return false;
  for (char c : tok.substr(2)) {
    if (!is_digit(c)) return false;
  }
  return true;
}

int digits_at(std::string_view s, std::size_t pos, std::size_t width) {
  if (pos + width > s.size()) throw ParseError("image name truncated", s.size());
  int v = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!is_digit(s[i])) throw ParseError("expected digit in image name", i);
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

void expect(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size()) throw ParseError(fmt::format("image name truncated, expected '{}'", c), s.size());
  if (s[pos] != c) throw ParseError(fmt::format("expected '{}' in image name", c), pos);
}

}  // namespace

std::string_view to_string(CollectionMode m) {
  switch (m) {
    case CollectionMode::archive_all: return "archive_all";
    case CollectionMode::detection_triggered: return "detection_triggered";
    case CollectionMode::off: return "off";
  }
  return "off";
}

CollectionMode parse_collection_mode(std::string_view s) {
  if (s == "archive_all") return CollectionMode::archive_all;
  if (s == "detection_triggered") return CollectionMode::detection_triggered;
  if (s == "off") return CollectionMode::off;
  throw ValidationError(fmt::format("unknown collection mode '{}' (archive_all, detection_triggered, off)", s));
}

void FlightManifest::validate() const {
  if (effort.empty()) throw ValidationError("effort must not be empty");
  for (char c : effort) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
      throw ValidationError(fmt::format("effort '{}' contains '{}' (allowed: letters, digits, '_', '-')", effort, c));
    }
  }
  if (effort.front() == '_' || effort.back() == '_' || effort.find("__") != std::string::npos) {
    throw ValidationError(fmt::format("effort '{}' has an empty '_' token", effort));
  }
  const auto last = effort.rfind('_');
  const std::string_view tail = last == std::string::npos ? std::string_view(effort)
                                                          : std::string_view(effort).substr(last + 1);
  if (is_flight_token(tail)) {
    throw ValidationError(fmt::format("effort '{}' ends in a flight-like token '{}'", effort, tail));
  }
  if (flight < 0) throw ValidationError(fmt::format("flight number {} is negative", flight));
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw ValidationError(fmt::format("score threshold {} outside [0, 1]", score_threshold));
  }
  for (const auto& [view, deg] : mount_deg) {
    if (!(deg >= 0.0 && deg < 90.0)) {
      throw ValidationError(fmt::format("mount angle {} for view {} outside [0, 90)", deg, to_string(view)));
    }
  }
}

std::string FlightManifest::folder_name() const { return fmt::format("{}_fl{:03d}", effort, flight); }

std::string format_image_name(const ImageName& n) {
  if (n.effort.empty()) throw ValidationError("effort must not be empty");
  if (n.flight < 0) throw ValidationError(fmt::format("flight number {} is negative", n.flight));
  const CivilTime c = to_civil(n.time);
  if (c.year < 0 || c.year > 9999) throw ValidationError(fmt::format("year {} not representable", c.year));
  return fmt::format("{}_fl{:03d}_{}_{:04d}{:02d}{:02d}_{:02d}{:02d}{:02d}.{:06d}_{}", n.effort, n.flight,
                     geom::to_string(n.view), c.year, c.month, c.day, c.hour, c.minute, c.second, c.microsecond,
                     geom::to_string(n.band));
}

std::string format_image_name(const FlightManifest& manifest, geom::View view, Timestamp time, geom::Band band) {
  return format_image_name(ImageName{manifest.effort, manifest.flight, view, time, band});
}

ImageName parse_image_name(std::string_view s) {
  // Rightmost "_fl<digits>_" with at least one effort character before it.
  std::size_t anchor = std::string_view::npos;
  for (std::size_t pos = s.rfind("_fl"); pos != std::string_view::npos && pos > 0; pos = s.rfind("_fl", pos - 1)) {
    std::size_t end = pos + 3;
    while (end < s.size() && is_digit(s[end])) ++end;
    if (end > pos + 3 && end < s.size() && s[end] == '_') {
      anchor = pos;
      break;
    }
    if (pos == 0) break;
  }
  if (anchor == std::string_view::npos) throw ParseError("no '_fl<digits>_' flight token in image name", 0);

  ImageName out;
  out.effort = std::string(s.substr(0, anchor));
  std::size_t pos = anchor + 3;
  long long flight = 0;
  while (is_digit(s[pos])) {
    flight = flight * 10 + (s[pos] - '0');
    if (flight > std::numeric_limits<int>::max()) throw ParseError("flight number too large", pos);
    ++pos;
  }
  out.flight = static_cast<int>(flight);
  expect(s, pos++, '_');

  if (pos >= s.size()) throw ParseError("image name truncated before view", s.size());
  switch (s[pos]) {
    case 'L': out.view = geom::View::L; break;
    case 'C': out.view = geom::View::C; break;
    case 'R': out.view = geom::View::R; break;
    default: throw ParseError("view must be L, C or R", pos);
  }
  ++pos;
  expect(s, pos++, '_');

  CivilTime c;
  const std::size_t date_pos = pos;
  c.year = digits_at(s, pos, 4);
  c.month = digits_at(s, pos + 4, 2);
  c.day = digits_at(s, pos + 6, 2);
  pos += 8;
  expect(s, pos++, '_');
  c.hour = digits_at(s, pos, 2);
  c.minute = digits_at(s, pos + 2, 2);
  c.second = digits_at(s, pos + 4, 2);
  pos += 6;
  expect(s, pos++, '.');
  c.microsecond = digits_at(s, pos, 6);
  pos += 6;
  expect(s, pos++, '_');
  try {
    out.time = from_civil(c);
  } catch (const ValidationError& e) {
    throw ParseError(fmt::format("invalid date/time in image name: {}", e.what()), date_pos);
  }

  const std::string_view band = s.substr(std::min(pos, s.size()));
  if (band == "rgb") {
    out.band = geom::Band::rgb;
  } else if (band == "ir") {
    out.band = geom::Band::ir;
  } else if (band == "uv") {
    out.band = geom::Band::uv;
  } else {
    throw ParseError("band must be rgb, ir or uv", pos);
  }
  return out;
}

}  // namespace aerosurvey::archive
