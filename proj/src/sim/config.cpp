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


#include "aerosurvey/sim/config.hpp"

#include <fmt/format.h>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/camera_io.hpp"

namespace aerosurvey::sim {
namespace {

template <typename T>
T get(const YAML::Node& n, const char* key, T fallback) {
  if (!n || !n.IsMap()) return fallback;
  const YAML::Node v = n[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ValidationError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

geom::GeoPoint geo_from(const YAML::Node& n, const geom::GeoPoint& fallback) {
  if (!n) return fallback;
  geom::GeoPoint p{get(n, "lat", fallback.lat), get(n, "lon", fallback.lon), get(n, "alt", fallback.alt)};
  geom::validate(p);
  return p;
}

void check_keys(const YAML::Node& n, const char* section, std::initializer_list<const char*> allowed) {
  if (!n || !n.IsMap()) return;
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ValidationError(fmt::format("unknown key '{}' in '{}' section", key, section));
    }
  }
}

}  // namespace

YAML::Node load_config_documents(const std::vector<std::filesystem::path>& files) {
  YAML::Node merged(YAML::NodeType::Map);
  for (const auto& f : files) {
    YAML::Node doc;
    try {
      doc = YAML::LoadFile(f.string());
    } catch (const YAML::BadFile&) {
      throw IoError(fmt::format("cannot read config '{}'", f.string()));
    } catch (const YAML::Exception& e) {
      throw ValidationError(fmt::format("config '{}': {}", f.string(), e.what()));
    }
    if (!doc.IsMap()) throw ValidationError(fmt::format("config '{}' is not a mapping", f.string()));
    for (const auto& kv : doc) merged[kv.first.as<std::string>()] = kv.second;
  }
  return merged;
}

FlightPlan plan_from_yaml(const YAML::Node& n) {
  check_keys(n, "plan",
             {"pattern", "altitudes_m", "altitude_m", "speed_mps", "trigger_rate_hz", "duration_s", "origin",
              "start_time", "heading_deg", "ins_rate_hz", "max_bank_deg", "legs", "leg_length_m", "leg_spacing_m",
              "loop_radius_m", "loops_per_altitude"});
  FlightPlan p;
  if (!n) return p;
  if (n["pattern"]) p.pattern = parse_pattern(n["pattern"].as<std::string>());
  if (n["altitudes_m"]) p.altitudes_m = n["altitudes_m"].as<std::vector<double>>();
  if (n["altitude_m"]) p.altitudes_m = {n["altitude_m"].as<double>()};
  p.speed_mps = get(n, "speed_mps", p.speed_mps);
  p.trigger_rate_hz = get(n, "trigger_rate_hz", p.trigger_rate_hz);
  p.duration_s = get(n, "duration_s", p.duration_s);
  p.origin = geo_from(n["origin"], p.origin);
  if (n["start_time"]) p.start_time = Timestamp::parse_iso8601(n["start_time"].as<std::string>());
  p.heading_deg = get(n, "heading_deg", p.heading_deg);
  p.ins_rate_hz = get(n, "ins_rate_hz", p.ins_rate_hz);
  p.max_bank_deg = get(n, "max_bank_deg", p.max_bank_deg);
  p.legs = get(n, "legs", p.legs);
  p.leg_length_m = get(n, "leg_length_m", p.leg_length_m);
  p.leg_spacing_m = get(n, "leg_spacing_m", p.leg_spacing_m);
  p.loop_radius_m = get(n, "loop_radius_m", p.loop_radius_m);
  p.loops_per_altitude = get(n, "loops_per_altitude", p.loops_per_altitude);
  p.validate();
  return p;
}

SimConfig sim_config_from_yaml(const YAML::Node& root) {
  SimConfig cfg;
  cfg.seed = get<std::uint64_t>(root, "seed", 0);
  cfg.plan = plan_from_yaml(root["plan"]);

  const YAML::Node rig = root["rig"];
  check_keys(rig, "rig", {"mount_angle_deg", "models_dir", "cameras", "controls"});
  const double mount = get(rig, "mount_angle_deg", 30.0);
  if (rig && rig["models_dir"]) {
    cfg.rig = geom::load_camera_set(rig["models_dir"].as<std::string>());
  } else {
    cfg.rig = default_rig(mount);
  }
  if (rig && rig["cameras"]) {
    const auto keep = rig["cameras"].as<std::vector<std::string>>();
    std::vector<geom::CameraModel> selected;
    for (const auto& id : keep) {
      const auto it = std::find_if(cfg.rig.begin(), cfg.rig.end(),
                                   [&](const geom::CameraModel& m) { return m.camera_id == id; });
      if (it == cfg.rig.end()) throw ValidationError(fmt::format("rig.cameras names unknown camera '{}'", id));
      selected.push_back(*it);
    }
    cfg.rig = selected;
  }
  if (rig && rig["controls"]) {
    for (const auto& kv : rig["controls"]) {
      const auto id = kv.first.as<std::string>();
      const auto it = std::find_if(cfg.rig.begin(), cfg.rig.end(),
                                   [&](const geom::CameraModel& m) { return m.camera_id == id; });
      if (it == cfg.rig.end()) throw ValidationError(fmt::format("rig.controls names unknown camera '{}'", id));
      CameraControl c = default_control(it->band);
      c.gain_db = get(kv.second, "gain_db", c.gain_db);
      c.exposure_us = get(kv.second, "exposure_us", c.exposure_us);
      c.nuc_interval_s = get(kv.second, "nuc_interval_s", c.nuc_interval_s);
      cfg.controls[id] = c;
    }
  }

  const YAML::Node faults = root["faults"];
  check_keys(faults, "faults", {"jitter_s", "drop_probability", "stalls"});
  cfg.faults.jitter_s = get(faults, "jitter_s", 0.0);
  cfg.faults.drop_probability = get(faults, "drop_probability", 0.0);
  if (faults && faults["stalls"]) {
    for (const auto& s : faults["stalls"]) {
      Stall st;
      st.camera_id = s["camera_id"].as<std::string>();
      st.from_seq = get<std::int64_t>(s, "from_seq", 0);
      st.to_seq = get<std::int64_t>(s, "to_seq", INT64_MAX);
      cfg.faults.stalls.push_back(st);
    }
  }

  const YAML::Node noise = root["noise"];
  check_keys(noise, "noise",
             {"ir_baseline", "ir_sigma", "rgb_background", "rgb_sigma", "uv_baseline", "uv_sigma", "exposure_scaling"});
  cfg.noise.ir_baseline = get(noise, "ir_baseline", cfg.noise.ir_baseline);
  cfg.noise.ir_sigma = get(noise, "ir_sigma", cfg.noise.ir_sigma);
  if (noise && noise["rgb_background"]) {
    const auto v = noise["rgb_background"].as<std::vector<double>>();
    if (v.size() != 3) throw ValidationError("noise.rgb_background needs 3 values");
    cfg.noise.rgb_background = {v[0], v[1], v[2]};
  }
  cfg.noise.rgb_sigma = get(noise, "rgb_sigma", cfg.noise.rgb_sigma);
  cfg.noise.uv_baseline = get(noise, "uv_baseline", cfg.noise.uv_baseline);
  cfg.noise.uv_sigma = get(noise, "uv_sigma", cfg.noise.uv_sigma);
  cfg.noise.exposure_scaling = get(noise, "exposure_scaling", cfg.noise.exposure_scaling);

  const YAML::Node scene = root["scene"];
  check_keys(scene, "scene", {"targets", "scatter"});
  if (scene && scene["targets"]) {
    for (const auto& t : scene["targets"]) {
      Target x = species_template(parse_species(get<std::string>(t, "species", "ringed_seal")));
      x.id = get<std::string>(t, "id", fmt::format("T{:04d}", cfg.scene.targets.size()));
      x.ground = geo_from(t, cfg.plan.origin);
      if (!t["lat"] || !t["lon"]) throw ValidationError(fmt::format("target '{}' needs lat and lon", x.id));
      x.thermal_contrast = get(t, "thermal_contrast", x.thermal_contrast);
      x.body_radius_m = get(t, "body_radius_m", x.body_radius_m);
      x.uv_signature = get(t, "uv_signature", x.uv_signature);
      if (t["rgb_signature"]) {
        const auto v = t["rgb_signature"].as<std::vector<double>>();
        if (v.size() != 3) throw ValidationError("rgb_signature needs 3 values");
        x.rgb_signature = {v[0], v[1], v[2]};
      }
      if (x.thermal_contrast < 0.0) throw ValidationError(fmt::format("target '{}' has negative thermal contrast", x.id));
      cfg.scene.targets.push_back(x);
    }
  }
  if (scene && scene["scatter"]) {
    const YAML::Node s = scene["scatter"];
    check_keys(s, "scene.scatter", {"count", "seed", "mix", "min_separation_m", "margin_px", "cameras"});
    ScatterParams sp;
    sp.count = get(s, "count", sp.count);
    sp.min_separation_m = get(s, "min_separation_m", sp.min_separation_m);
    sp.margin_px = get(s, "margin_px", sp.margin_px);
    if (s["mix"]) {
      sp.mix.clear();
      for (const auto& kv : s["mix"]) sp.mix[parse_species(kv.first.as<std::string>())] = kv.second.as<double>();
    }
    std::vector<std::string> cams = {"ir_L", "ir_C", "ir_R"};
    if (s["cameras"]) cams = s["cameras"].as<std::vector<std::string>>();
    std::vector<geom::CameraModel> models;
    for (const auto& id : cams) {
      const auto it = std::find_if(cfg.rig.begin(), cfg.rig.end(),
                                   [&](const geom::CameraModel& m) { return m.camera_id == id; });
      if (it == cfg.rig.end()) throw ValidationError(fmt::format("scene.scatter names unknown camera '{}'", id));
      models.push_back(*it);
    }
    Scene scattered = scatter_targets(Trajectory(cfg.plan), models, sp, get<std::uint64_t>(s, "seed", cfg.seed));
    for (auto& t : scattered.targets) {
      t.id = fmt::format("S{:04d}", cfg.scene.targets.size());
      cfg.scene.targets.push_back(std::move(t));
    }
  }
  return cfg;
}

}  // namespace aerosurvey::sim
