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

#include "aerosurvey/geom/geodesy.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::geom {
namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

void validate(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || !std::isfinite(p.alt)) {
    throw ValidationError("geo point has non-finite component");
  }
  if (p.lat < -90.0 || p.lat > 90.0) throw ValidationError(fmt::format("latitude {} out of range", p.lat));
  if (p.lon < -180.0 || p.lon > 180.0) {
    throw ValidationError(fmt::format("longitude {} out of range", p.lon));
  }
}

Eigen::Vector3d geodetic_to_ecef(const GeoPoint& p) {
  const double lat = p.lat * kDeg;
  const double lon = p.lon * kDeg;
  const double s = std::sin(lat);
  const double n = wgs84::kSemiMajor / std::sqrt(1.0 - wgs84::kEccentricitySq * s * s);
  const double c = std::cos(lat);
  return {(n + p.alt) * c * std::cos(lon), (n + p.alt) * c * std::sin(lon),
          (n * (1.0 - wgs84::kEccentricitySq) + p.alt) * s};
}

GeoPoint ecef_to_geodetic(const Eigen::Vector3d& ecef) {
  const double x = ecef.x();
  const double y = ecef.y();
  const double z = ecef.z();
  const double e2 = wgs84::kEccentricitySq;
  const double p = std::hypot(x, y);
  const double lon = std::atan2(y, x);
  double lat = std::atan2(z, p * (1.0 - e2));
  double h = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double s = std::sin(lat);
    const double n = wgs84::kSemiMajor / std::sqrt(1.0 - e2 * s * s);
    h = p * std::cos(lat) + (z + e2 * n * s) * s - n;
    const double next = std::atan2(z, p * (1.0 - e2 * n / (n + h)));
    const bool done = std::abs(next - lat) < 1e-16;
    lat = next;
    if (done) break;
  }
  const double s = std::sin(lat);
  const double n = wgs84::kSemiMajor / std::sqrt(1.0 - e2 * s * s);
  h = p * std::cos(lat) + (z + e2 * n * s) * s - n;
  return {lat / kDeg, lon / kDeg, h};
}

double distance_m(const GeoPoint& a, const GeoPoint& b) {
  return (geodetic_to_ecef(a) - geodetic_to_ecef(b)).norm();
}

LocalFrame::LocalFrame(const GeoPoint& origin) : origin_(origin), origin_ecef_(geodetic_to_ecef(origin)) {
  validate(origin);
  const double lat = origin.lat * kDeg;
  const double lon = origin.lon * kDeg;
  const double sl = std::sin(lat), cl = std::cos(lat);
  const double so = std::sin(lon), co = std::cos(lon);
  enu_from_ecef_ << -so, co, 0.0,             //
      -sl * co, -sl * so, cl,                 //
      cl * co, cl * so, sl;
}

Eigen::Vector3d LocalFrame::to_enu(const GeoPoint& p) const {
  return enu_from_ecef_ * (geodetic_to_ecef(p) - origin_ecef_);
}

GeoPoint LocalFrame::to_geo(const Eigen::Vector3d& enu) const {
  return ecef_to_geodetic(origin_ecef_ + enu_from_ecef_.transpose() * enu);
}

}  // namespace aerosurvey::geom
