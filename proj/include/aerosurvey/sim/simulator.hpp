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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aerosurvey/sim/plan.hpp"
#include "aerosurvey/sim/render.hpp"
#include "aerosurvey/sim/rig.hpp"
#include "aerosurvey/sim/scene.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::sim {

/// Frames from `camera_id` are withheld for seq in [from_seq, to_seq].
struct Stall {
  std::string camera_id;
  std::int64_t from_seq = 0;
  std::int64_t to_seq = INT64_MAX;

  bool operator==(const Stall&) const = default;
};

struct Faults {
  double jitter_s = 0.0;  ///< arrival offset uniform in [-jitter, +jitter]
  double drop_probability = 0.0;
  std::vector<Stall> stalls;

  bool operator==(const Faults&) const = default;
};

struct SimConfig {
  FlightPlan plan;
  Scene scene;
  std::vector<geom::CameraModel> rig = default_rig();
  std::map<std::string, CameraControl> controls;  ///< overrides of default_control
  Faults faults;
  NoiseParams noise;
  std::uint64_t seed = 0;
  double ground_up = 0.0;
};

struct InjectedDrop {
  std::string camera_id;
  std::int64_t seq = 0;
  bool stalled = false;

  bool operator==(const InjectedDrop&) const = default;
};

struct FrameTruth {
  std::uint64_t frame_id = 0;
  std::string camera_id;
  Timestamp arrival_time;
};

struct SampleTruth {
  std::int64_t seq = 0;
  Timestamp time;
  geom::InsPose pose;
  std::vector<FrameTruth> frames;         ///< frames actually emitted
  std::vector<InjectedDrop> drops;
  std::vector<TargetSighting> sightings;  ///< every camera, dropped frames included
};

struct GroundTruth {
  std::map<std::uint64_t, std::int64_t> frame_trigger;  ///< true frame -> seq
  std::vector<InjectedDrop> drops;
  std::vector<SampleTruth> samples;
};

/// Incremental simulator: one trigger per step. Camera controls set between
/// steps apply from the next trigger on.
class FlightSimulator {
 public:
  explicit FlightSimulator(SimConfig config);

  struct Step {
    sync::TriggerEvent trigger;
    std::vector<geom::InsPose> ins;       ///< records in [t_k, t_{k+1})
    std::vector<sync::FrameHeader> frames;  ///< arrival order
    SampleTruth truth;
  };

  bool done() const { return next_ >= triggers_.size(); }
  std::size_t trigger_count() const { return triggers_.size(); }
  Step step();

  const SimConfig& config() const { return config_; }
  const Trajectory& trajectory() const { return trajectory_; }
  const std::vector<sync::TriggerEvent>& triggers() const { return triggers_; }
  const CameraControl& control(const std::string& camera_id) const;
  /// Throws ValidationError for unknown cameras.
  void set_control(const std::string& camera_id, const CameraControl& control);
  /// NUC age of an IR camera at `t`.
  double nuc_age_s(const std::string& camera_id, Timestamp t) const;

 private:
  std::size_t index_of(const std::string& camera_id) const;

  SimConfig config_;
  Trajectory trajectory_;
  std::vector<sync::TriggerEvent> triggers_;
  std::vector<geom::InsPose> ins_;
  std::size_t next_ = 0;
  std::size_t next_pose_ = 0;
  std::vector<CameraControl> controls_;
  std::vector<Timestamp> nuc_reference_;
};

struct SimulatedFlight {
  std::vector<sync::TriggerEvent> triggers;
  std::vector<sync::FrameHeader> frames;  ///< arrival order across all cameras
  std::vector<geom::InsPose> ins;
  GroundTruth truth;
};

SimulatedFlight simulate_flight(const SimConfig& config);

/// One JSON object per trigger: seq, time, frames (id, camera, arrival),
/// dropped cameras, and target sightings.
void write_ground_truth_jsonl(const GroundTruth& truth, std::ostream& out);

}  // namespace aerosurvey::sim
