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

#include "aerosurvey/geom/camera_io.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::geom {
namespace {

template <typename T>
T required(const YAML::Node& node, const char* key) {
  const YAML::Node v = node[key];
  if (!v) throw ValidationError(fmt::format("camera model missing key '{}'", key));
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ValidationError(fmt::format("camera model key '{}': {}", key, e.what()));
  }
}

template <typename T>
T optional_value(const YAML::Node& node, const char* key, T fallback) {
  const YAML::Node v = node[key];
  return v ? v.as<T>() : fallback;
}

}  // namespace

std::string camera_to_yaml(const CameraModel& m) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "camera_id" << YAML::Value << m.camera_id;
  out << YAML::Key << "band" << YAML::Value << std::string(to_string(m.band));
  out << YAML::Key << "view" << YAML::Value << std::string(to_string(m.view));
  const CameraIntrinsics& k = m.intrinsics;
  out << YAML::Key << "width" << YAML::Value << k.width;
  out << YAML::Key << "height" << YAML::Value << k.height;
  out << YAML::Key << "fx" << YAML::Value << k.fx;
  out << YAML::Key << "fy" << YAML::Value << k.fy;
  out << YAML::Key << "cx" << YAML::Value << k.cx;
  out << YAML::Key << "cy" << YAML::Value << k.cy;
  out << YAML::Key << "k1" << YAML::Value << k.k1;
  out << YAML::Key << "k2" << YAML::Value << k.k2;
  out << YAML::Key << "k3" << YAML::Value << k.k3;
  out << YAML::Key << "p1" << YAML::Value << k.p1;
  out << YAML::Key << "p2" << YAML::Value << k.p2;
  const Eigen::Quaterniond& q = m.rig.rotation();
  out << YAML::Key << "rig_quaternion" << YAML::Value << YAML::Flow << YAML::BeginSeq << q.w() << q.x()
      << q.y() << q.z() << YAML::EndSeq;
  const Eigen::Vector3d& t = m.rig.translation();
  out << YAML::Key << "rig_translation" << YAML::Value << YAML::Flow << YAML::BeginSeq << t.x() << t.y()
      << t.z() << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

CameraModel camera_from_node(const YAML::Node& node) {
  CameraModel m;
  m.camera_id = required<std::string>(node, "camera_id");
  m.band = parse_band(required<std::string>(node, "band"));
  m.view = parse_view(required<std::string>(node, "view"));
  CameraIntrinsics& k = m.intrinsics;
  k.width = required<int>(node, "width");
  k.height = required<int>(node, "height");
  k.fx = required<double>(node, "fx");
  k.fy = required<double>(node, "fy");
  k.cx = required<double>(node, "cx");
  k.cy = required<double>(node, "cy");
  k.k1 = optional_value(node, "k1", 0.0);
  k.k2 = optional_value(node, "k2", 0.0);
  k.k3 = optional_value(node, "k3", 0.0);
  k.p1 = optional_value(node, "p1", 0.0);
  k.p2 = optional_value(node, "p2", 0.0);
  const auto q = required<std::vector<double>>(node, "rig_quaternion");
  const auto t = required<std::vector<double>>(node, "rig_translation");
  if (q.size() != 4) throw ValidationError("rig_quaternion must have 4 entries (w x y z)");
  if (t.size() != 3) throw ValidationError("rig_translation must have 3 entries");
  const Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  if (!(quat.norm() > 0.0)) throw ValidationError("rig_quaternion has zero norm");
  m.rig = RigTransform(quat, Eigen::Vector3d(t[0], t[1], t[2]));
  m.validate();
  return m;
}

CameraModel camera_from_yaml(std::string_view text) {
  try {
    return camera_from_node(YAML::Load(std::string(text)));
  } catch (const YAML::Exception& e) {
    throw ValidationError(fmt::format("camera YAML: {}", e.what()));
  }
}

void save_camera(const CameraModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << camera_to_yaml(model);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

CameraModel load_camera(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return camera_from_yaml(ss.str());
}

void save_camera_set(const std::vector<CameraModel>& models, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& m : models) save_camera(m, dir / (m.camera_id + ".yaml"));
}

std::vector<CameraModel> load_camera_set(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError(fmt::format("camera model directory '{}' not found", dir.string()));
  }
  std::vector<CameraModel> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".yaml") out.push_back(load_camera(entry.path()));
  }
  std::sort(out.begin(), out.end(),
            [](const CameraModel& a, const CameraModel& b) { return a.camera_id < b.camera_id; });
  return out;
}

}  // namespace aerosurvey::geom
