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

// Shared test fixtures: tiny helpers that build cameras and poses in the
// flight frame. Nothing here calls into the projection code.

#pragma once

#include <Eigen/Core>

#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::testing {

inline const geom::GeoPoint kOrigin{64.5011, -165.4064, 0.0};

inline geom::InsPose level_pose_at(const geom::LocalFrame& frame, const Eigen::Vector3d& enu,
                                   double yaw = 0.0, Timestamp t = Timestamp::from_micros(1'744'411'407'000'000)) {
  geom::InsPose p;
  p.time = t;
  p.position = frame.to_geo(enu);
  p.orientation = {0.0, 0.0, yaw};
  return p;
}

inline geom::CameraModel nadir_camera(geom::Band band, const geom::CameraIntrinsics& k,
                                      geom::View view = geom::View::C, double mount_deg = 0.0) {
  return geom::CameraModel::make(band, view, k,
                                 geom::RigTransform(geom::mount_rotation(view, mount_deg), Eigen::Vector3d::Zero()));
}

inline geom::CameraIntrinsics ir_640(double f = 1000.0) {
  geom::CameraIntrinsics k = geom::CameraIntrinsics::ideal(640, 512, f);
  return k;
}

}  // namespace aerosurvey::testing
