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

#include "aerosurvey/geom/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace aerosurvey::geom {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double wrap_360(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

double wrap_180(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

}  // namespace

Attitude normalized(Attitude a) {
  double pitch = wrap_180(a.pitch);
  double roll = a.roll;
  double yaw = a.yaw;
  if (pitch > 90.0 || pitch < -90.0) {
    pitch = (pitch > 0.0 ? 180.0 : -180.0) - pitch;
    roll += 180.0;
    yaw += 180.0;
  }
  return {wrap_180(roll), pitch, wrap_360(yaw)};
}

Eigen::Matrix3d rotation_x(double deg) {
  return Eigen::AngleAxisd(deg * kDeg, Eigen::Vector3d::UnitX()).toRotationMatrix();
}
Eigen::Matrix3d rotation_y(double deg) {
  return Eigen::AngleAxisd(deg * kDeg, Eigen::Vector3d::UnitY()).toRotationMatrix();
}
Eigen::Matrix3d rotation_z(double deg) {
  return Eigen::AngleAxisd(deg * kDeg, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

Eigen::Matrix3d ned_from_body(const Attitude& a) {
  return rotation_z(a.yaw) * rotation_y(a.pitch) * rotation_x(a.roll);
}

Attitude attitude_from_rotation(const Eigen::Matrix3d& r) {
  const double pitch = std::asin(std::clamp(-r(2, 0), -1.0, 1.0));
  double roll = 0.0;
  double yaw = 0.0;
  if (std::abs(r(2, 0)) < 1.0 - 1e-12) {
    roll = std::atan2(r(2, 1), r(2, 2));
    yaw = std::atan2(r(1, 0), r(0, 0));
  } else {
    // Gimbal lock: fold everything into yaw.
    yaw = std::atan2(-r(0, 1), r(1, 1));
  }
  return normalized({roll / kDeg, pitch / kDeg, yaw / kDeg});
}

const Eigen::Matrix3d& enu_from_ned() {
  static const Eigen::Matrix3d m = [] {
    Eigen::Matrix3d s;
    s << 0, 1, 0, 1, 0, 0, 0, 0, -1;
    return s;
  }();
  return m;
}

Eigen::Matrix3d enu_from_body(const InsPose& pose) { return enu_from_ned() * ned_from_body(pose.orientation); }

InsPose interpolate(const InsPose& a, const InsPose& b, Timestamp t) {
  const std::int64_t span = b.time - a.time;
  double u = span > 0 ? static_cast<double>(t - a.time) / static_cast<double>(span) : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  InsPose out;
  out.time = t;
  out.position.lat = a.position.lat + u * (b.position.lat - a.position.lat);
  double dlon = b.position.lon - a.position.lon;
  if (dlon > 180.0) dlon -= 360.0;
  if (dlon < -180.0) dlon += 360.0;
  out.position.lon = wrap_180(a.position.lon + u * dlon);
  out.position.alt = a.position.alt + u * (b.position.alt - a.position.alt);
  out.velocity = a.velocity + u * (b.velocity - a.velocity);
  out.angular_rate = a.angular_rate + u * (b.angular_rate - a.angular_rate);
  const Eigen::Quaterniond qa(ned_from_body(a.orientation));
  const Eigen::Quaterniond qb(ned_from_body(b.orientation));
  out.orientation = attitude_from_rotation(qa.slerp(u, qb).toRotationMatrix());
  return out;
}

double rotation_angle_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const Eigen::AngleAxisd rel(a.transpose() * b);
  return std::abs(rel.angle()) / kDeg;
}

}  // namespace aerosurvey::geom
