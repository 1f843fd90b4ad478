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

#include <Eigen/Core>

namespace aerosurvey::geom {

/// WGS-84 geodetic position. Degrees, meters above the ellipsoid.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double alt = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

/// Throws ValidationError when lat/lon are out of range or non-finite.
void validate(const GeoPoint& p);

/// Local east-north-up coordinates (meters) relative to a flight origin.
struct EnuPoint {
  double east = 0.0;
  double north = 0.0;
  double up = 0.0;

  Eigen::Vector3d vector() const { return {east, north, up}; }
  static EnuPoint from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
};

namespace wgs84 {
inline constexpr double kSemiMajor = 6378137.0;
inline constexpr double kFlattening = 1.0 / 298.257223563;
inline constexpr double kEccentricitySq = kFlattening * (2.0 - kFlattening);
}  // namespace wgs84

Eigen::Vector3d geodetic_to_ecef(const GeoPoint& p);
GeoPoint ecef_to_geodetic(const Eigen::Vector3d& ecef);

/// Straight-line (chord) distance in meters between two geodetic points.
double distance_m(const GeoPoint& a, const GeoPoint& b);

/// Tangent-plane frame anchored at a flight origin. This is the planar world
/// model that every projection in the library uses.
class LocalFrame {
 public:
  explicit LocalFrame(const GeoPoint& origin);

  const GeoPoint& origin() const { return origin_; }

  Eigen::Vector3d to_enu(const GeoPoint& p) const;
  GeoPoint to_geo(const Eigen::Vector3d& enu) const;

  EnuPoint to_enu_point(const GeoPoint& p) const { return EnuPoint::from(to_enu(p)); }
  GeoPoint to_geo(const EnuPoint& p) const { return to_geo(p.vector()); }

 private:
  GeoPoint origin_;
  Eigen::Vector3d origin_ecef_;
  Eigen::Matrix3d enu_from_ecef_;
};

}  // namespace aerosurvey::geom
