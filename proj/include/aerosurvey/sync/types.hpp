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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aerosurvey/core/payload.hpp"
#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::sync {

/// One DAQ pulse, timestamped by the INS.
struct TriggerEvent {
  std::int64_t seq = 0;
  Timestamp time;

  bool operator==(const TriggerEvent&) const = default;
};

/// Camera parameters in force when a frame was exposed.
struct CameraSettings {
  double gain_db = 0.0;
  double exposure_us = 0.0;
  std::optional<double> nuc_age_s;  ///< IR only

  bool operator==(const CameraSettings&) const = default;
};

struct FrameHeader {
  std::uint64_t frame_id = 0;  ///< unique within a run
  std::string camera_id;
  Timestamp arrival_time;
  CameraSettings settings;
  PayloadRef payload;
};

/// Frames of all cameras sharing one trigger.
struct Sample {
  TriggerEvent trigger;
  std::map<std::string, FrameHeader> frames;
  geom::InsPose ins;
  bool pose_missing = false;
  bool partial = false;
};

struct CameraDrops {
  std::int64_t emitted = 0;   ///< frames handed to the assembler
  std::int64_t expected = 0;  ///< finalized samples
  std::int64_t received = 0;  ///< frames placed in a sample
  std::vector<std::int64_t> missing_seqs;
  std::int64_t orphans = 0;     ///< no trigger within tolerance
  std::int64_t duplicates = 0;  ///< second frame for an occupied slot
  std::int64_t late = 0;        ///< matched a trigger already finalized without it

  bool operator==(const CameraDrops&) const = default;
};

struct OrphanFrame {
  std::uint64_t frame_id = 0;
  std::string camera_id;
  Timestamp arrival_time;

  bool operator==(const OrphanFrame&) const = default;
};

struct DropReport {
  std::map<std::string, CameraDrops> cameras;
  std::vector<OrphanFrame> orphan_frames;

  std::int64_t total_missing() const;
  std::int64_t total_orphans() const;
  /// expected == received + missing and
  /// emitted == received + orphans + duplicates + late, for every camera.
  bool reconciles() const;

  bool operator==(const DropReport&) const = default;
};

/// Index into `triggers` of the trigger nearest to `arrival`, if within
/// `tolerance_us`. Ties go to the earlier trigger. `triggers` must be
/// time-ordered.
std::optional<std::size_t> assign_frame(Timestamp arrival, std::span<const TriggerEvent> triggers,
                                        std::int64_t tolerance_us);

/// Sequence number variant of assign_frame.
std::optional<std::int64_t> assign_frame_seq(const FrameHeader& frame, std::span<const TriggerEvent> triggers,
                                             std::int64_t tolerance_us);

struct PoseLookup {
  geom::InsPose pose;
  bool missing = false;
};

/// Pose at `t` from a time-ordered stream. Missing when `t` is not bracketed
/// or the bracketing records are more than `max_gap_us` apart; the nearest
/// record (if any) is returned in that case.
PoseLookup pose_at(std::span<const geom::InsPose> poses, Timestamp t, std::int64_t max_gap_us);

}  // namespace aerosurvey::sync
