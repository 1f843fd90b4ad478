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
#include <Eigen/Geometry>

#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/geodesy.hpp"

namespace aerosurvey::geom {

/// Body attitude in degrees. Body axes are x-forward, y-right, z-down; the
/// rotation body -> NED is Rz(yaw) * Ry(pitch) * Rx(roll). NED here is the
/// north-east-down companion of the flight's ENU tangent plane.
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  bool operator==(const Attitude&) const = default;
};

/// yaw in [0,360), pitch in [-90,90], roll in (-180,180]. Pitch beyond +-90
/// is folded into the equivalent attitude.
Attitude normalized(Attitude a);

Eigen::Matrix3d ned_from_body(const Attitude& a);
/// Inverse of ned_from_body; returns a normalized attitude.
Attitude attitude_from_rotation(const Eigen::Matrix3d& ned_from_body);

/// Constant axis swap NED -> ENU.
const Eigen::Matrix3d& enu_from_ned();

/// Timestamped 12-DOF navigation state.
struct InsPose {
  Timestamp time;
  GeoPoint position;
  Attitude orientation;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();      ///< NED, m/s
  Eigen::Vector3d angular_rate = Eigen::Vector3d::Zero();  ///< body p,q,r, deg/s
};

Eigen::Matrix3d enu_from_body(const InsPose& pose);

/// Interpolates between bracketing records: linear for position, velocity and
/// rates; spherical for orientation. `t` is clamped to [a.time, b.time].
InsPose interpolate(const InsPose& a, const InsPose& b, Timestamp t);

Eigen::Matrix3d rotation_x(double deg);
Eigen::Matrix3d rotation_y(double deg);
Eigen::Matrix3d rotation_z(double deg);

/// Angle in degrees of the relative rotation a^T b.
double rotation_angle_deg(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b);

}  // namespace aerosurvey::geom
