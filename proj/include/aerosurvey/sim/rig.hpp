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

#include <vector>

#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::sim {

/// Operator-adjustable camera parameters.
struct CameraControl {
  double gain_db = 0.0;
  double exposure_us = 500.0;
  double nuc_interval_s = 300.0;  ///< IR only

  bool operator==(const CameraControl&) const = default;
};

geom::CameraIntrinsics default_intrinsics(geom::Band band);
CameraControl default_control(geom::Band band);

/// Nine cameras: {ir, rgb, uv} x {L, C, R}. L and R roll out by
/// `mount_angle_deg` about the body x axis. Lever arms are a few decimetres.
std::vector<geom::CameraModel> default_rig(double mount_angle_deg = 30.0);

/// The default rig restricted to some bands and views.
std::vector<geom::CameraModel> select(const std::vector<geom::CameraModel>& rig,
                                      const std::vector<geom::Band>& bands,
                                      const std::vector<geom::View>& views = {geom::View::L, geom::View::C,
                                                                               geom::View::R});

}  // namespace aerosurvey::sim
