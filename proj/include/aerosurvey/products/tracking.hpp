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


// Geolocation-based tracking of detections and the flight detection summary.

#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "aerosurvey/detect/detection.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/products/coverage.hpp"

namespace aerosurvey::products {

struct TrackParams {
  double radius_m = 2.0;
  std::int64_t max_gap = 2;  ///< triggers

  static TrackParams unbounded() {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<std::int64_t>::max()};
  }
};

struct Track {
  int id = 0;
  std::vector<detect::Detection> members;  ///< ordered by trigger
  /// Mean member ground point; absent for an ungeolocated detection.
  std::optional<geom::GeoPoint> location;
  detect::Label label = detect::Label::hot_spot;
  double best_score = 0.0;
  std::int64_t first_seq = 0;
  std::int64_t last_seq = 0;
};

/// Single-linkage association: two detections link when their triggers are
/// at most max_gap apart and their ground points lie within radius_m
/// (horizontal, in `frame`). radius 0 links nothing. Tracks are the
/// connected components, numbered by their first member. Detections without
/// a ground point become single-member tracks.
std::vector<Track> track_detections(std::span<const detect::Detection> detections, const TrackParams& params,
                                    const geom::LocalFrame& frame);

struct DetectionSummary {
  std::int64_t detections = 0;
  std::int64_t tracks = 0;
  std::map<detect::Label, std::int64_t> tracks_per_label;
  double coverage_km2 = 0.0;
  /// Tracks per km² of surveyed area; absent with no coverage.
  std::optional<double> density_per_km2;
  std::map<detect::Label, double> density_per_label;
  std::vector<Track> track_list;
};

DetectionSummary detection_summary(std::span<const Track> tracks, const CoverageSummary& coverage);

nlohmann::ordered_json to_json(const DetectionSummary& summary);
/// Point features with label, member count and best score.
nlohmann::ordered_json tracks_geojson(std::span<const Track> tracks);
std::string format_detection_table(const DetectionSummary& summary);

}  // namespace aerosurvey::products
