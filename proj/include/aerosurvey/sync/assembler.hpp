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

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::sync {

struct AssemblerConfig {
  std::int64_t tolerance_us = 250'000;
  /// Extra wait for a silent camera, beyond the tolerance. Unset means one
  /// trigger period, taken from the most recent trigger spacing.
  std::optional<std::int64_t> grace_us;
  /// Bracketing INS records further apart than this leave the pose missing.
  std::int64_t max_pose_gap_us = 200'000;
};

/// Streaming sample assembler. Feeds may be interleaved in any order that
/// respects per-stream order; a sample is emitted once every camera has
/// reported or moved past it, or once the newest data on any stream is a
/// grace window beyond it (a stalled camera). Samples come out in trigger
/// order.
///
/// Frame-to-trigger assignment is decided by timestamps alone. Finalization
/// by the grace window assumes feeds are never pushed more than one grace
/// window out of data-time order with each other; within that bound the
/// output does not depend on interleaving.
class SampleAssembler {
 public:
  SampleAssembler(std::vector<std::string> cameras, AssemblerConfig config = {});

  /// Throws ProtocolError on non-increasing seq or time, or spacing not
  /// greater than twice the tolerance.
  void push_trigger(const TriggerEvent& trigger);
  /// Throws ProtocolError for an unregistered camera or per-camera arrival
  /// times going backwards.
  void push_frame(FrameHeader frame);
  /// Throws ProtocolError on non-increasing pose time.
  void push_pose(const geom::InsPose& pose);

  /// Samples finalized since the last call.
  std::vector<Sample> poll();
  /// Ends all streams and finalizes everything still open.
  std::vector<Sample> finish();

  const DropReport& report() const { return report_; }
  const std::vector<std::string>& cameras() const { return cameras_; }

 private:
  struct Slot {
    TriggerEvent trigger;
    std::uint64_t present = 0;  ///< bit per camera
    bool finalized = false;
    Sample sample;
  };

  std::size_t camera_index(const std::string& id) const;
  void place(FrameHeader&& frame, std::size_t cam);
  void place_pending();
  void try_finalize();
  bool ready(const Slot& slot) const;
  void finalize(Slot& slot);
  Timestamp data_watermark() const;
  std::int64_t grace() const;

  std::vector<std::string> cameras_;
  AssemblerConfig config_;

  std::vector<Slot> slots_;  ///< every trigger seen, in order
  std::vector<TriggerEvent> triggers_;
  std::size_t next_open_ = 0;
  std::deque<std::pair<FrameHeader, std::size_t>> pending_;
  std::vector<std::optional<Timestamp>> camera_watermark_;
  std::optional<Timestamp> trigger_watermark_;
  std::vector<geom::InsPose> poses_;
  std::optional<Timestamp> pose_watermark_;
  std::optional<std::int64_t> last_period_;
  bool closed_ = false;

  std::vector<Sample> ready_;
  DropReport report_;
};

struct Assembly {
  std::vector<Sample> samples;
  DropReport report;
};

/// Batch form: merges the streams by timestamp and runs the assembler.
Assembly assemble(std::span<const TriggerEvent> triggers, std::span<const FrameHeader> frames,
                  const std::vector<std::string>& cameras, std::span<const geom::InsPose> poses,
                  const AssemblerConfig& config = {});

}  // namespace aerosurvey::sync
