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


#include "aerosurvey/service/state.hpp"

#include "aerosurvey/archive/metadata.hpp"

namespace aerosurvey::service {
namespace {

template <typename T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const SystemState& s) {
  nlohmann::ordered_json cams = nlohmann::ordered_json::object();
  for (const auto& [id, c] : s.cameras) {
    cams[id] = {{"camera_id", c.camera_id},
                {"thumbnail", c.thumbnail_ref},
                {"last_frame_id", c.last_frame_id},
                {"last_frame_seq", opt(c.last_frame_seq)},
                {"histogram", {{"lo", c.histogram.lo}, {"hi", c.histogram.hi}, {"counts", c.histogram.counts}}},
                {"gain_db", c.gain_db},
                {"exposure_us", c.exposure_us},
                {"nuc_age_s", opt(c.nuc_age_s)},
                {"nuc_interval_s", opt(c.nuc_interval_s)},
                {"streaming", c.streaming}};
  }
  const Counters& k = s.counters;
  return {{"version", s.version},
          {"run_status", s.run_status},
          {"error", s.error},
          {"collection_mode", archive::to_string(s.collection_mode)},
          {"score_threshold", s.score_threshold},
          {"pipeline", s.pipeline},
          {"last_seq", opt(s.last_seq)},
          {"ins", s.ins ? archive::to_json(*s.ins) : nlohmann::ordered_json(nullptr)},
          {"counters",
           {{"frames_collected", k.frames_collected},
            {"frames_processed", k.frames_processed},
            {"frames_detected", k.frames_detected},
            {"frames_dropped", k.frames_dropped},
            {"detections", k.detections},
            {"samples_seen", k.samples_seen},
            {"samples_archived", k.samples_archived},
            {"samples_skipped", k.samples_skipped},
            {"bytes_archived", k.bytes_archived},
            {"disk_space_remaining", k.disk_space_remaining}}},
          {"cameras", cams}};
}

StateStore::StateStore(std::size_t history) : capacity_(std::max<std::size_t>(history, 1)) {
  history_.push_back(SystemState{});
}

std::uint64_t StateStore::publish(const std::function<void(SystemState&)>& mutate) {
  std::uint64_t v = 0;
  {
    std::lock_guard lock(mutex_);
    SystemState next = history_.back();
    mutate(next);
    next.version = history_.back().version + 1;
    v = next.version;
    history_.push_back(std::move(next));
    while (history_.size() > capacity_) history_.pop_front();
  }
  changed_.notify_all();
  return v;
}

SystemState StateStore::snapshot() const {
  std::lock_guard lock(mutex_);
  return history_.back();
}

std::vector<SystemState> StateStore::since(std::uint64_t after, std::chrono::milliseconds timeout,
                                           bool* truncated) const {
  std::unique_lock lock(mutex_);
  changed_.wait_for(lock, timeout, [&] { return closed_ || history_.back().version > after; });
  if (truncated) *truncated = history_.front().version > after + 1;
  std::vector<SystemState> out;
  for (const auto& s : history_) {
    if (s.version > after) out.push_back(s);
  }
  return out;
}

void StateStore::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  changed_.notify_all();
}

bool StateStore::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

}  // namespace aerosurvey::service
