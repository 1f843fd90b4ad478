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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aerosurvey/geom/camera.hpp"

namespace YAML {
class Node;
}

namespace aerosurvey::geom {

/// One YAML document per camera with keys camera_id, band, view, width,
/// height, fx, fy, cx, cy, k1, k2, k3, p1, p2, rig_quaternion (w x y z),
/// rig_translation (x y z). Doubles are written with round-trip precision.
std::string camera_to_yaml(const CameraModel& model);
CameraModel camera_from_yaml(std::string_view text);
CameraModel camera_from_node(const YAML::Node& node);

void save_camera(const CameraModel& model, const std::filesystem::path& path);
CameraModel load_camera(const std::filesystem::path& path);

/// Writes `<dir>/<camera_id>.yaml` for each model.
void save_camera_set(const std::vector<CameraModel>& models, const std::filesystem::path& dir);
/// Loads every *.yaml in `dir`, sorted by camera_id.
std::vector<CameraModel> load_camera_set(const std::filesystem::path& dir);

}  // namespace aerosurvey::geom
