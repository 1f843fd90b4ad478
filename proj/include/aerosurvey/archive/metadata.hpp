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
#include <string>
#include <string_view>

#include "json.hpp"

#include "aerosurvey/archive/naming.hpp"
#include "aerosurvey/geom/pose.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::archive {

/// Per-image metadata document, stored next to each archived image.
struct ImageMeta {
  std::string image_name;  ///< file stem, see format_image_name
  std::string camera_id;
  geom::Band band = geom::Band::rgb;
  geom::View view = geom::View::C;
  int width = 0;
  int height = 0;
  std::uint64_t frame_id = 0;
  Timestamp arrival_time;
  sync::CameraSettings settings;
  std::int64_t trigger_seq = 0;
  Timestamp event_time;  ///< trigger pulse time; also the filename time
  geom::InsPose ins;
  geom::GeoPoint location;  ///< GPS antenna position at the event
  bool pose_missing = false;
  bool partial = false;
  std::string effort;
  int flight = 0;
  std::string project;

  bool operator==(const ImageMeta&) const;
};

nlohmann::ordered_json to_json(const ImageMeta& meta);
/// Throws ValidationError on missing or mistyped fields.
ImageMeta image_meta_from_json(const nlohmann::json& j);

/// Pretty-printed single JSON document with a trailing newline.
std::string serialize(const ImageMeta& meta);
ImageMeta parse_image_meta(std::string_view text);

nlohmann::ordered_json to_json(const FlightManifest& manifest);
FlightManifest manifest_from_json(const nlohmann::json& j);

nlohmann::ordered_json to_json(const geom::InsPose& pose);
geom::InsPose ins_pose_from_json(const nlohmann::json& j);

}  // namespace aerosurvey::archive
