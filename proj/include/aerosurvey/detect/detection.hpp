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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aerosurvey/core/box.hpp"
#include "aerosurvey/geom/geodesy.hpp"

namespace aerosurvey::detect {

enum class Label { hot_spot, ringed_seal, bearded_seal, polar_bear };

std::string_view to_string(Label l);
/// Throws ValidationError.
Label parse_label(std::string_view s);

struct Detection {
  std::string camera_id;
  std::int64_t trigger_seq = 0;
  Box bbox;  ///< full-image pixels of `camera_id`
  double score = 0.0;
  Label label = Label::hot_spot;
  /// Geolocated bbox center; absent when the sample had no pose.
  std::optional<geom::GeoPoint> ground;

  bool operator==(const Detection&) const = default;
};

/// Orders by descending score, then trigger, camera and box position, so
/// equal scores never depend on input order.
bool detection_rank_less(const Detection& a, const Detection& b);

/// Greedy suppression within each (camera, trigger) image: a box is dropped
/// when its IoU with an already kept box exceeds `iou_threshold`. Output is
/// sorted by `detection_rank_less`. Throws ValidationError unless the
/// threshold lies in (0, 1).
std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold);

// CSV: trigger_seq,camera_id,x,y,w,h,score,label,lat,lon. lat/lon are empty
// for detections without a ground point.
void write_detections_csv(std::span<const Detection> detections, std::ostream& out);
void write_detections_csv(std::span<const Detection> detections, const std::filesystem::path& path);
std::vector<Detection> read_detections_csv(const std::filesystem::path& path);

/// One image name per line.
void write_processed_list(std::span<const std::string> image_names, const std::filesystem::path& path);

}  // namespace aerosurvey::detect
