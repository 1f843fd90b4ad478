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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/camera.hpp"

namespace aerosurvey::archive {

enum class CollectionMode { archive_all, detection_triggered, off };

std::string_view to_string(CollectionMode m);
/// Throws ValidationError.
CollectionMode parse_collection_mode(std::string_view s);

/// Identity and archiving policy of one flight.
struct FlightManifest {
  std::string effort = "survey";
  int flight = 1;
  std::string project;
  std::map<geom::View, double> mount_deg = {{geom::View::L, 30.0}, {geom::View::C, 0.0}, {geom::View::R, 30.0}};
  std::vector<std::string> cameras;
  CollectionMode collection_mode = CollectionMode::archive_all;
  double score_threshold = 0.5;

  /// Throws ValidationError.
  void validate() const;
  /// "<effort>_fl<NNN>"
  std::string folder_name() const;
};

/// Fields of an image file stem.
struct ImageName {
  std::string effort;
  int flight = 0;
  geom::View view = geom::View::C;
  Timestamp time;
  geom::Band band = geom::Band::rgb;

  bool operator==(const ImageName&) const = default;
};

/// `{effort}_fl{flight:03d}_{view}_{YYYYMMDD}_{HHMMSS.ffffff}_{band}` in UTC.
std::string format_image_name(const ImageName& name);
std::string format_image_name(const FlightManifest& manifest, geom::View view, Timestamp time, geom::Band band);

/// Inverse of format_image_name. The effort may contain underscores; the
/// rightmost "_fl<digits>_" token separates it from the rest. Throws
/// ParseError with the offending position.
ImageName parse_image_name(std::string_view name);

}  // namespace aerosurvey::archive
