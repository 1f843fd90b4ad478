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


// Trigger/INS/frame streams feeding a flight run: live from the simulator or
// replayed from a recorded stream directory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/sim/simulator.hpp"

namespace aerosurvey::service {

class StreamSource {
 public:
  virtual ~StreamSource() = default;

  virtual bool done() const = 0;
  /// The trigger the next step() delivers.
  virtual std::optional<sync::TriggerEvent> peek() const = 0;
  /// Trigger k, the INS records in [t_k, t_k+1) and the frames emitted for it.
  virtual sim::FlightSimulator::Step step() = 0;
  virtual sim::CameraControl control(const std::string& camera_id) const = 0;
  /// False when the source cannot change the camera (a recording).
  virtual bool set_control(const std::string& camera_id, const sim::CameraControl& control) = 0;
};

std::unique_ptr<StreamSource> simulator_source(const sim::SimConfig& config);

/// What a recorded stream carries besides the streams themselves.
struct StreamInfo {
  geom::GeoPoint origin;
  double ground_up = 0.0;
  double trigger_rate_hz = 1.0;
  std::uint64_t seed = 0;
  Timestamp start_time;
  std::vector<geom::CameraModel> rig;
};

struct RecordSummary {
  std::int64_t triggers = 0;
  std::int64_t frames = 0;
  std::int64_t images = 0;
  std::int64_t poses = 0;
};

/// Writes stream.json, cameras/<id>.yaml, triggers.csv, ins.jsonl,
/// frames.csv and ground_truth.jsonl into `dir`; with `images`, also every
/// frame losslessly as frames/<frame_id>.png|.tif. Times are integer
/// microseconds so a replay is exact.
RecordSummary record_stream(const sim::SimConfig& config, const std::filesystem::path& dir, bool images);

/// Throws IoError or ValidationError.
StreamInfo read_stream_info(const std::filesystem::path& dir);
/// Replays a recording made with images. Frame pixels load lazily.
std::unique_ptr<StreamSource> recorded_source(const std::filesystem::path& dir);

}  // namespace aerosurvey::service
