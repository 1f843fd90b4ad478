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


#include "aerosurvey/sim/rig.hpp"

#include <algorithm>

namespace aerosurvey::sim {

using geom::Band;
using geom::View;

geom::CameraIntrinsics default_intrinsics(Band band) {
  geom::CameraIntrinsics k;
  switch (band) {
    case Band::rgb:
      // 110 mm lens over 3.45 um pixels.
      k = geom::CameraIntrinsics::ideal(4096, 3072, 110e-3 / 3.45e-6);
      k.k1 = -0.05;
      k.k2 = 0.01;
      break;
    case Band::ir:
      k = geom::CameraIntrinsics::ideal(640, 512, 4400.0);
      k.k1 = -0.08;
      k.p1 = 1e-4;
      break;
    case Band::uv:
      k = geom::CameraIntrinsics::ideal(2048, 2048, 14000.0);
      k.k1 = -0.04;
      break;
  }
  return k;
}

CameraControl default_control(Band band) {
  switch (band) {
    case Band::rgb: return {0.0, 500.0, 0.0};
    case Band::uv: return {6.0, 2000.0, 0.0};
    case Band::ir: return {0.0, 300.0, 300.0};
  }
  return {};
}

std::vector<geom::CameraModel> default_rig(double mount_angle_deg) {
  std::vector<geom::CameraModel> out;
  for (Band b : {Band::ir, Band::rgb, Band::uv}) {
    const double along = b == Band::ir ? 0.10 : (b == Band::rgb ? 0.0 : -0.10);
    for (View v : {View::L, View::C, View::R}) {
      const double across = v == View::L ? -0.25 : (v == View::R ? 0.25 : 0.0);
      out.push_back(geom::CameraModel::make(
          b, v, default_intrinsics(b),
          geom::RigTransform(geom::mount_rotation(v, mount_angle_deg), Eigen::Vector3d(along, across, 0.05))));
    }
  }
  return out;
}

std::vector<geom::CameraModel> select(const std::vector<geom::CameraModel>& rig, const std::vector<Band>& bands,
                                      const std::vector<View>& views) {
  std::vector<geom::CameraModel> out;
  for (const auto& m : rig) {
    if (std::find(bands.begin(), bands.end(), m.band) != bands.end() &&
        std::find(views.begin(), views.end(), m.view) != views.end()) {
      out.push_back(m);
    }
  }
  return out;
}

}  // namespace aerosurvey::sim
