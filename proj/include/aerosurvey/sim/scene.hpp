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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/sim/plan.hpp"

namespace aerosurvey::sim {

enum class Species { ringed_seal, bearded_seal, polar_bear };

std::string_view to_string(Species s);
Species parse_species(std::string_view s);

struct Target {
  std::string id;
  Species species = Species::ringed_seal;
  geom::GeoPoint ground;
  double thermal_contrast = 40.0;  ///< IR counts above background
  double body_radius_m = 0.6;
  std::array<double, 3> rgb_signature{70.0, 65.0, 60.0};  ///< pelt color, 8-bit
  double uv_signature = -40.0;  ///< UV counts relative to background

  bool operator==(const Target&) const = default;
};

/// Nominal appearance of a species. Polar bears are warm-furred (weak IR
/// contrast), white in the visible and dark in the UV.
Target species_template(Species s);

struct Scene {
  std::vector<Target> targets;
};

struct ScatterParams {
  int count = 50;
  std::map<Species, double> mix = {{Species::ringed_seal, 0.7}, {Species::bearded_seal, 0.3}};
  /// Minimum ground separation between targets.
  double min_separation_m = 6.0;
  /// Keep targets this many pixels inside the frame they are placed in.
  double margin_px = 40.0;
};

/// Places targets under randomly chosen trigger poses, each inside one of
/// the given cameras' frames, so every target is imaged at least once.
Scene scatter_targets(const Trajectory& trajectory, const std::vector<geom::CameraModel>& cameras,
                      const ScatterParams& params, std::uint64_t seed);

}  // namespace aerosurvey::sim
