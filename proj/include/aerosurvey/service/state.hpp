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


// Live system state: one owner publishes versions, any number of readers
// take immutable snapshots or follow the version stream.

#pragma once

#include <array>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aerosurvey/archive/naming.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::service {

inline constexpr int kHistogramBins = 64;

struct Histogram {
  double lo = 0.0;  ///< lower edge of bin 0
  double hi = 0.0;  ///< upper edge of the last bin
  std::array<std::int64_t, kHistogramBins> counts{};
};

struct CameraState {
  std::string camera_id;
  std::string thumbnail_ref;  ///< URL path of the latest frame's thumbnail
  std::uint64_t last_frame_id = 0;
  std::optional<std::int64_t> last_frame_seq;
  Histogram histogram;
  double gain_db = 0.0;
  double exposure_us = 0.0;
  std::optional<double> nuc_age_s;
  std::optional<double> nuc_interval_s;
  bool streaming = true;
};

struct Counters {
  std::int64_t frames_collected = 0;
  std::int64_t frames_processed = 0;  ///< frames a detector ran on
  std::int64_t frames_detected = 0;   ///< frames with at least one detection
  std::int64_t frames_dropped = 0;
  std::int64_t detections = 0;
  std::int64_t samples_seen = 0;
  std::int64_t samples_archived = 0;
  std::int64_t samples_skipped = 0;
  std::int64_t bytes_archived = 0;
  std::int64_t disk_space_remaining = 0;
};

struct SystemState {
  std::uint64_t version = 0;
  std::string run_status = "idle";  ///< idle, running, finished, failed
  std::string error;
  std::map<std::string, CameraState> cameras;
  std::optional<geom::InsPose> ins;
  std::optional<std::int64_t> last_seq;
  Counters counters;
  archive::CollectionMode collection_mode = archive::CollectionMode::off;
  double score_threshold = 0.5;
  std::string pipeline;
};

nlohmann::ordered_json to_json(const SystemState& state);

/// Version-stamped state with a bounded history for event streams.
class StateStore {
 public:
  explicit StateStore(std::size_t history = 4096);

  /// Applies `mutate` to a copy of the latest state and publishes it as the
  /// next version. Returns that version.
  std::uint64_t publish(const std::function<void(SystemState&)>& mutate);
  SystemState snapshot() const;

  /// Versions after `after`, oldest first, waiting up to `timeout` when
  /// none is available. `truncated` is set when older versions were
  /// already evicted from the history.
  std::vector<SystemState> since(std::uint64_t after, std::chrono::milliseconds timeout,
                                 bool* truncated = nullptr) const;
  /// Wakes every waiter in since().
  void close();
  bool closed() const;

 private:
  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::deque<SystemState> history_;
  std::size_t capacity_;
  bool closed_ = false;
};

}  // namespace aerosurvey::service
