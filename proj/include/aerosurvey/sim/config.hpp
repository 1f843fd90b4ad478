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
#include <vector>

#include <yaml-cpp/yaml.h>

#include "aerosurvey/sim/simulator.hpp"

namespace aerosurvey::sim {

/// Reads YAML or JSON documents and merges their top-level sections; later
/// files replace earlier sections of the same name.
YAML::Node load_config_documents(const std::vector<std::filesystem::path>& files);

/// Builds a simulation from the `plan`, `scene`, `rig`, `faults`, `noise`
/// and `seed` sections. A `scene.scatter` block places random targets under
/// the planned trajectory. Throws ValidationError or PlanError.
SimConfig sim_config_from_yaml(const YAML::Node& root);

FlightPlan plan_from_yaml(const YAML::Node& node);

}  // namespace aerosurvey::sim
