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


// Post-flight coverage: per-camera footprint unions and surveyed area.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "aerosurvey/geom/projection.hpp"

namespace aerosurvey::products {

using Ring = std::vector<Eigen::Vector2d>;

/// ENU polygon; rings are open (last vertex != first), outer ring
/// counterclockwise, holes clockwise.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

double area_m2(const Polygon& p);
double area_m2(std::span<const Polygon> polygons);

/// Union of simple polygons by balanced pairwise merging.
std::vector<Polygon> polygon_union(std::span<const Polygon> polygons);

struct SampleFootprint {
  std::int64_t trigger_seq = 0;
  geom::Footprint footprint;
};

Polygon to_polygon(const geom::Footprint& footprint);

struct CameraCoverage {
  std::string camera_id;
  std::vector<SampleFootprint> footprints;
  std::vector<Polygon> union_polygons;
  double union_area_km2 = 0.0;
  double footprint_area_sum_km2 = 0.0;
  std::int64_t first_seq = 0;
  std::int64_t last_seq = 0;
};

struct CoverageSummary {
  geom::GeoPoint origin;
  double ground_up = 0.0;
  std::map<std::string, CameraCoverage> cameras;
  std::vector<Polygon> union_polygons;  ///< all cameras
  double union_area_km2 = 0.0;
  double footprint_area_sum_km2 = 0.0;
  /// Zero-area or non-finite footprints left out of the union.
  std::int64_t degenerate_skipped = 0;
};

/// Footprints must come from one flight's frame; `frame` converts union
/// vertices back to geodetic for output.
CoverageSummary flight_summary(std::span<const SampleFootprint> footprints, const geom::LocalFrame& frame,
                               double ground_up = 0.0);

struct FootprintRequest {
  std::int64_t trigger_seq = 0;
  geom::InsPose pose;
  std::vector<std::string> cameras;
};

/// Projects every requested camera's image corners. Cameras without a model
/// throw ConfigurationError; corners above the horizon skip that footprint
/// and count it in `skipped`.
std::vector<SampleFootprint> compute_footprints(std::span<const FootprintRequest> requests,
                                                const std::map<std::string, geom::CameraModel>& models,
                                                double ground_up, const geom::LocalFrame& frame,
                                                std::int64_t* skipped = nullptr);

/// FeatureCollection: one Polygon per footprint (camera_id, trigger_seq,
/// area_m2) and one MultiPolygon for the camera's union (trigger range,
/// area_km2). Coordinates are [lon, lat].
nlohmann::ordered_json camera_geojson(const CameraCoverage& camera, const geom::LocalFrame& frame,
                                      double ground_up);

nlohmann::ordered_json to_json(const CoverageSummary& summary);
/// Fixed-width area table, one row per camera plus the flight total.
std::string format_area_table(const CoverageSummary& summary);

}  // namespace aerosurvey::products
