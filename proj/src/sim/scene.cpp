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


#include "aerosurvey/sim/scene.hpp"

#include <fmt/format.h>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"
#include "aerosurvey/geom/projection.hpp"

namespace aerosurvey::sim {

std::string_view to_string(Species s) {
  switch (s) {
    case Species::ringed_seal: return "ringed_seal";
    case Species::bearded_seal: return "bearded_seal";
    case Species::polar_bear: return "polar_bear";
  }
  return "?";
}

Species parse_species(std::string_view s) {
  if (s == "ringed_seal") return Species::ringed_seal;
  if (s == "bearded_seal") return Species::bearded_seal;
  if (s == "polar_bear") return Species::polar_bear;
  throw ValidationError(fmt::format("unknown species '{}'", s));
}

Target species_template(Species s) {
  Target t;
  t.species = s;
  switch (s) {
    case Species::ringed_seal:
      t.thermal_contrast = 40.0;
      t.body_radius_m = 0.6;
      t.rgb_signature = {70.0, 65.0, 60.0};
      t.uv_signature = -40.0;
      break;
    case Species::bearded_seal:
      t.thermal_contrast = 45.0;
      t.body_radius_m = 1.0;
      t.rgb_signature = {125.0, 95.0, 70.0};
      t.uv_signature = -50.0;
      break;
    case Species::polar_bear:
      t.thermal_contrast = 8.0;
      t.body_radius_m = 1.1;
      t.rgb_signature = {238.0, 232.0, 212.0};
      t.uv_signature = -90.0;
      break;
  }
  return t;
}

Scene scatter_targets(const Trajectory& trajectory, const std::vector<geom::CameraModel>& cameras,
                      const ScatterParams& params, std::uint64_t seed) {
  if (cameras.empty()) throw ValidationError("scatter_targets needs at least one camera");
  const auto triggers = generate_triggers(trajectory);
  if (triggers.empty()) throw PlanError("plan produces no triggers");
  double total = 0.0;
  for (const auto& [sp, w] : params.mix) total += w;
  if (!(total > 0.0)) throw ValidationError("species mix has no positive weight");

  Rng rng(seed);
  Scene scene;
  std::vector<Eigen::Vector3d> placed;
  const geom::LocalFrame& frame = trajectory.frame();
  int attempts = 0;
  while (static_cast<int>(scene.targets.size()) < params.count) {
    if (++attempts > 1000 * std::max(1, params.count)) {
      throw PlanError(fmt::format("could not place {} targets {} m apart", params.count, params.min_separation_m));
    }
    const auto& trig = triggers[rng.below(triggers.size())];
    const auto& cam = cameras[rng.below(cameras.size())];
    const geom::InsPose pose = trajectory.evaluate(trig.time);
    const auto& k = cam.intrinsics;
    const Eigen::Vector2d px(rng.uniform(params.margin_px, k.width - params.margin_px),
                             rng.uniform(params.margin_px, k.height - params.margin_px));
    // Species draw happens before any rejection so the stream stays aligned.
    double pick = rng.uniform(0.0, total);
    Species sp = params.mix.begin()->first;
    for (const auto& [s, w] : params.mix) {
      if (pick < w) {
        sp = s;
        break;
      }
      pick -= w;
    }
    const Eigen::Vector3d g = geom::project_to_ground_enu(cam, geom::camera_world_pose(cam.rig, pose, frame), px, 0.0);
    bool clear = true;
    for (const auto& p : placed) clear = clear && (p - g).norm() >= params.min_separation_m;
    if (!clear) continue;
    Target t = species_template(sp);
    t.id = fmt::format("T{:04d}", scene.targets.size());
    t.ground = frame.to_geo(g);
    scene.targets.push_back(t);
    placed.push_back(g);
  }
  return scene;
}

}  // namespace aerosurvey::sim
