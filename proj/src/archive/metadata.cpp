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


#include "aerosurvey/archive/metadata.hpp"

#include <fmt/format.h>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::archive {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kSchema = "aerosurvey.image_meta/1";

const json& field(const json& j, const char* key) {
  if (!j.is_object()) throw ValidationError(fmt::format("expected an object holding '{}'", key));
  const auto it = j.find(key);
  if (it == j.end()) throw ValidationError(fmt::format("metadata missing field '{}'", key));
  return *it;
}

template <typename T>
T get(const json& j, const char* key) {
  const json& v = field(j, key);
  try {
    return v.get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(fmt::format("metadata field '{}': {}", key, e.what()));
  }
}

Timestamp get_time(const json& j, const char* key) {
  const std::string s = get<std::string>(j, key);
  try {
    return Timestamp::parse_iso8601(s);
  } catch (const ParseError& e) {
    throw ValidationError(fmt::format("metadata field '{}': {}", key, e.what()));
  }
}

ordered_json vec3(const Eigen::Vector3d& v) { return ordered_json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d get_vec3(const json& j, const char* key) {
  const auto v = get<std::vector<double>>(j, key);
  if (v.size() != 3) throw ValidationError(fmt::format("metadata field '{}' must have 3 entries", key));
  return {v[0], v[1], v[2]};
}

ordered_json geo(const geom::GeoPoint& p) { return {{"lat", p.lat}, {"lon", p.lon}, {"alt", p.alt}}; }

geom::GeoPoint get_geo(const json& j) {
  return {get<double>(j, "lat"), get<double>(j, "lon"), get<double>(j, "alt")};
}

bool same_pose(const geom::InsPose& a, const geom::InsPose& b) {
  return a.time == b.time && a.position == b.position && a.orientation == b.orientation &&
         a.velocity == b.velocity && a.angular_rate == b.angular_rate;
}

}  // namespace

bool ImageMeta::operator==(const ImageMeta& o) const {
  return image_name == o.image_name && camera_id == o.camera_id && band == o.band && view == o.view &&
         width == o.width && height == o.height && frame_id == o.frame_id && arrival_time == o.arrival_time &&
         settings == o.settings && trigger_seq == o.trigger_seq && event_time == o.event_time &&
         same_pose(ins, o.ins) && location == o.location && pose_missing == o.pose_missing &&
         partial == o.partial && effort == o.effort && flight == o.flight && project == o.project;
}

ordered_json to_json(const geom::InsPose& p) {
  return {{"time", p.time.iso8601()},
          {"lat", p.position.lat},
          {"lon", p.position.lon},
          {"alt", p.position.alt},
          {"roll", p.orientation.roll},
          {"pitch", p.orientation.pitch},
          {"yaw", p.orientation.yaw},
          {"velocity_ned", vec3(p.velocity)},
          {"angular_rate", vec3(p.angular_rate)}};
}

geom::InsPose ins_pose_from_json(const json& j) {
  geom::InsPose p;
  p.time = get_time(j, "time");
  p.position = get_geo(j);
  p.orientation = {get<double>(j, "roll"), get<double>(j, "pitch"), get<double>(j, "yaw")};
  p.velocity = get_vec3(j, "velocity_ned");
  p.angular_rate = get_vec3(j, "angular_rate");
  return p;
}

ordered_json to_json(const ImageMeta& m) {
  ordered_json j;
  j["schema"] = kSchema;
  j["image_name"] = m.image_name;
  j["camera_id"] = m.camera_id;
  j["band"] = geom::to_string(m.band);
  j["view"] = geom::to_string(m.view);
  j["width"] = m.width;
  j["height"] = m.height;
  j["frame_id"] = m.frame_id;
  j["arrival_time"] = m.arrival_time.iso8601();
  ordered_json settings = {{"gain_db", m.settings.gain_db}, {"exposure_us", m.settings.exposure_us}};
  settings["nuc_age_s"] = m.settings.nuc_age_s ? ordered_json(*m.settings.nuc_age_s) : ordered_json(nullptr);
  j["camera_settings"] = std::move(settings);
  j["daq_event"] = {{"trigger_seq", m.trigger_seq}, {"time", m.event_time.iso8601()}};
  j["ins"] = to_json(m.ins);
  j["gps"] = geo(m.location);
  j["pose_missing"] = m.pose_missing;
  j["partial"] = m.partial;
  j["effort"] = m.effort;
  j["flight"] = m.flight;
  j["project"] = m.project;
  return j;
}

ImageMeta image_meta_from_json(const json& j) {
  if (get<std::string>(j, "schema") != kSchema) {
    throw ValidationError(fmt::format("unsupported metadata schema '{}'", get<std::string>(j, "schema")));
  }
  ImageMeta m;
  m.image_name = get<std::string>(j, "image_name");
  m.camera_id = get<std::string>(j, "camera_id");
  m.band = geom::parse_band(get<std::string>(j, "band"));
  m.view = geom::parse_view(get<std::string>(j, "view"));
  m.width = get<int>(j, "width");
  m.height = get<int>(j, "height");
  m.frame_id = get<std::uint64_t>(j, "frame_id");
  m.arrival_time = get_time(j, "arrival_time");
  const json& s = field(j, "camera_settings");
  m.settings.gain_db = get<double>(s, "gain_db");
  m.settings.exposure_us = get<double>(s, "exposure_us");
  const json& nuc = field(s, "nuc_age_s");
  if (!nuc.is_null()) m.settings.nuc_age_s = get<double>(s, "nuc_age_s");
  const json& ev = field(j, "daq_event");
  m.trigger_seq = get<std::int64_t>(ev, "trigger_seq");
  m.event_time = get_time(ev, "time");
  m.ins = ins_pose_from_json(field(j, "ins"));
  m.location = get_geo(field(j, "gps"));
  m.pose_missing = get<bool>(j, "pose_missing");
  m.partial = get<bool>(j, "partial");
  m.effort = get<std::string>(j, "effort");
  m.flight = get<int>(j, "flight");
  m.project = get<std::string>(j, "project");
  return m;
}

std::string serialize(const ImageMeta& meta) { return to_json(meta).dump(2) + "\n"; }

ImageMeta parse_image_meta(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(fmt::format("metadata JSON: {}", e.what()), e.byte == 0 ? 0 : e.byte - 1);
  }
  return image_meta_from_json(j);
}

ordered_json to_json(const FlightManifest& m) {
  ordered_json mounts = ordered_json::object();
  for (const auto& [view, deg] : m.mount_deg) mounts[std::string(geom::to_string(view))] = deg;
  return {{"effort", m.effort},
          {"flight", m.flight},
          {"project", m.project},
          {"mount_deg", mounts},
          {"cameras", m.cameras},
          {"collection_mode", to_string(m.collection_mode)},
          {"score_threshold", m.score_threshold}};
}

FlightManifest manifest_from_json(const json& j) {
  FlightManifest m;
  m.effort = get<std::string>(j, "effort");
  m.flight = get<int>(j, "flight");
  m.project = get<std::string>(j, "project");
  m.mount_deg.clear();
  for (const auto& [view, deg] : field(j, "mount_deg").items()) {
    m.mount_deg[geom::parse_view(view)] = deg.get<double>();
  }
  m.cameras = get<std::vector<std::string>>(j, "cameras");
  m.collection_mode = parse_collection_mode(get<std::string>(j, "collection_mode"));
  m.score_threshold = get<double>(j, "score_threshold");
  m.validate();
  return m;
}

}  // namespace aerosurvey::archive
