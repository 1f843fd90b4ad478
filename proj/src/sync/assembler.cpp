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


#include "aerosurvey/sync/assembler.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <tuple>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::sync {

std::int64_t DropReport::total_missing() const {
  std::int64_t n = 0;
  for (const auto& [id, c] : cameras) n += static_cast<std::int64_t>(c.missing_seqs.size());
  return n;
}

std::int64_t DropReport::total_orphans() const {
  std::int64_t n = 0;
  for (const auto& [id, c] : cameras) n += c.orphans;
  return n;
}

bool DropReport::reconciles() const {
  for (const auto& [id, c] : cameras) {
    if (c.expected != c.received + static_cast<std::int64_t>(c.missing_seqs.size())) return false;
    if (c.emitted != c.received + c.orphans + c.duplicates + c.late) return false;
    if (c.expected < 0 || c.received < 0 || c.orphans < 0 || c.duplicates < 0 || c.late < 0) return false;
  }
  return true;
}

std::optional<std::size_t> assign_frame(Timestamp arrival, std::span<const TriggerEvent> triggers,
                                        std::int64_t tolerance_us) {
  if (triggers.empty()) return std::nullopt;
  const auto it = std::lower_bound(triggers.begin(), triggers.end(), arrival,
                                   [](const TriggerEvent& t, Timestamp a) { return t.time < a; });
  std::optional<std::size_t> best;
  std::int64_t best_d = 0;
  auto consider = [&](std::size_t i) {
    const std::int64_t d = std::abs(arrival - triggers[i].time);
    // Candidates are visited earlier-first, so strict < keeps the earlier on ties.
    if (d <= tolerance_us && (!best || d < best_d)) {
      best = i;
      best_d = d;
    }
  };
  const auto i = static_cast<std::size_t>(it - triggers.begin());
  if (i > 0) consider(i - 1);
  if (i < triggers.size()) consider(i);
  return best;
}

std::optional<std::int64_t> assign_frame_seq(const FrameHeader& frame, std::span<const TriggerEvent> triggers,
                                             std::int64_t tolerance_us) {
  const auto i = assign_frame(frame.arrival_time, triggers, tolerance_us);
  if (!i) return std::nullopt;
  return triggers[*i].seq;
}

PoseLookup pose_at(std::span<const geom::InsPose> poses, Timestamp t, std::int64_t max_gap_us) {
  PoseLookup out;
  if (poses.empty()) {
    out.missing = true;
    out.pose.time = t;
    return out;
  }
  const auto it = std::lower_bound(poses.begin(), poses.end(), t,
                                   [](const geom::InsPose& p, Timestamp x) { return p.time < x; });
  if (it != poses.end() && it->time == t) {
    out.pose = *it;
    return out;
  }
  if (it == poses.begin() || it == poses.end()) {
    out.pose = it == poses.end() ? poses.back() : poses.front();
    out.missing = true;
    return out;
  }
  const geom::InsPose& a = *(it - 1);
  const geom::InsPose& b = *it;
  if (b.time - a.time > max_gap_us) {
    out.pose = (t - a.time) <= (b.time - t) ? a : b;
    out.missing = true;
    return out;
  }
  out.pose = geom::interpolate(a, b, t);
  return out;
}

SampleAssembler::SampleAssembler(std::vector<std::string> cameras, AssemblerConfig config)
    : cameras_(std::move(cameras)), config_(config), camera_watermark_(cameras_.size()) {
  if (cameras_.empty()) throw ValidationError("assembler needs at least one camera");
  if (cameras_.size() > 64) throw ValidationError("assembler supports at most 64 cameras");
  if (config_.tolerance_us <= 0) throw ValidationError("sync tolerance must be positive");
  std::vector<std::string> sorted = cameras_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("duplicate camera id in assembler camera set");
  }
  for (const auto& id : cameras_) report_.cameras[id] = CameraDrops{};
}

std::size_t SampleAssembler::camera_index(const std::string& id) const {
  const auto it = std::find(cameras_.begin(), cameras_.end(), id);
  if (it == cameras_.end()) throw ProtocolError(fmt::format("frame from unregistered camera '{}'", id));
  return static_cast<std::size_t>(it - cameras_.begin());
}

std::int64_t SampleAssembler::grace() const {
  if (config_.grace_us) return *config_.grace_us;
  return last_period_.value_or(kMicrosPerSecond);
}

Timestamp SampleAssembler::data_watermark() const {
  std::optional<Timestamp> w = trigger_watermark_;
  auto bump = [&w](const std::optional<Timestamp>& x) {
    if (x && (!w || *x > *w)) w = x;
  };
  bump(pose_watermark_);
  for (const auto& c : camera_watermark_) bump(c);
  return w.value_or(Timestamp::from_micros(INT64_MIN / 2));
}

void SampleAssembler::push_trigger(const TriggerEvent& trigger) {
  if (closed_) throw ProtocolError("trigger after end of stream");
  if (!slots_.empty()) {
    const TriggerEvent& last = slots_.back().trigger;
    if (trigger.seq <= last.seq) {
      throw ProtocolError(fmt::format("trigger seq {} does not follow {}", trigger.seq, last.seq));
    }
    if (trigger.time <= last.time) {
      throw ProtocolError(fmt::format("trigger {} time {} not after {}", trigger.seq, trigger.time.iso8601(),
                                      last.time.iso8601()));
    }
    const std::int64_t period = trigger.time - last.time;
    if (period <= 2 * config_.tolerance_us) {
      throw ProtocolError(fmt::format("trigger spacing {} us is not above twice the tolerance {} us", period,
                                      config_.tolerance_us));
    }
    last_period_ = period;
  }
  Slot slot;
  slot.trigger = trigger;
  slot.sample.trigger = trigger;
  slots_.push_back(std::move(slot));
  triggers_.push_back(trigger);
  trigger_watermark_ = trigger.time;
  place_pending();
  try_finalize();
}

void SampleAssembler::push_frame(FrameHeader frame) {
  if (closed_) throw ProtocolError("frame after end of stream");
  const std::size_t cam = camera_index(frame.camera_id);
  auto& wm = camera_watermark_[cam];
  if (wm && frame.arrival_time < *wm) {
    throw ProtocolError(fmt::format("{} frame {} arrives before its predecessor", frame.camera_id, frame.frame_id));
  }
  wm = frame.arrival_time;
  ++report_.cameras[frame.camera_id].emitted;
  place(std::move(frame), cam);
  try_finalize();
}

void SampleAssembler::push_pose(const geom::InsPose& pose) {
  if (closed_) throw ProtocolError("pose after end of stream");
  if (pose_watermark_ && pose.time <= *pose_watermark_) {
    throw ProtocolError(fmt::format("INS record at {} is not after {}", pose.time.iso8601(),
                                    pose_watermark_->iso8601()));
  }
  poses_.push_back(pose);
  pose_watermark_ = pose.time;
  try_finalize();
}

void SampleAssembler::place(FrameHeader&& frame, std::size_t cam) {
  CameraDrops& drops = report_.cameras[frame.camera_id];
  const auto idx = assign_frame(frame.arrival_time, triggers_, config_.tolerance_us);
  if (idx) {
    Slot& slot = slots_[*idx];
    const std::uint64_t bit = std::uint64_t{1} << cam;
    if (slot.present & bit) {
      ++drops.duplicates;
    } else if (slot.finalized) {
      ++drops.late;
    } else {
      slot.present |= bit;
      std::string id = frame.camera_id;
      slot.sample.frames.emplace(std::move(id), std::move(frame));
    }
    return;
  }
  if (closed_ || (trigger_watermark_ && *trigger_watermark_ >= frame.arrival_time + config_.tolerance_us)) {
    ++drops.orphans;
    // Kept sorted so the report does not depend on feed interleaving.
    OrphanFrame o{frame.frame_id, frame.camera_id, frame.arrival_time};
    auto key = [](const OrphanFrame& x) { return std::tie(x.arrival_time, x.camera_id, x.frame_id); };
    auto& list = report_.orphan_frames;
    list.insert(std::upper_bound(list.begin(), list.end(), o,
                                 [&](const OrphanFrame& a, const OrphanFrame& b) { return key(a) < key(b); }),
                std::move(o));
    return;
  }
  pending_.emplace_back(std::move(frame), cam);
}

void SampleAssembler::place_pending() {
  std::deque<std::pair<FrameHeader, std::size_t>> waiting;
  waiting.swap(pending_);
  for (auto& [frame, cam] : waiting) place(std::move(frame), cam);
}

bool SampleAssembler::ready(const Slot& slot) const {
  if (closed_) return true;
  const Timestamp t = slot.trigger.time;
  const bool stalled = data_watermark() >= t + (config_.tolerance_us + grace());
  if (stalled) return true;
  if (!pose_watermark_ || *pose_watermark_ < t) return false;
  for (std::size_t c = 0; c < cameras_.size(); ++c) {
    if (slot.present & (std::uint64_t{1} << c)) continue;
    const auto& wm = camera_watermark_[c];
    if (!wm || *wm <= t + config_.tolerance_us) return false;
  }
  return true;
}

void SampleAssembler::finalize(Slot& slot) {
  Sample& s = slot.sample;
  const PoseLookup lookup = pose_at(poses_, s.trigger.time, config_.max_pose_gap_us);
  s.ins = lookup.pose;
  s.pose_missing = lookup.missing;
  // Keep the last record at or before this trigger; later triggers bracket from it.
  const auto keep = std::upper_bound(poses_.begin(), poses_.end(), s.trigger.time,
                                     [](Timestamp x, const geom::InsPose& p) { return x < p.time; });
  if (keep != poses_.begin()) poses_.erase(poses_.begin(), keep - 1);
  for (std::size_t c = 0; c < cameras_.size(); ++c) {
    CameraDrops& d = report_.cameras[cameras_[c]];
    ++d.expected;
    if (slot.present & (std::uint64_t{1} << c)) {
      ++d.received;
    } else {
      d.missing_seqs.push_back(s.trigger.seq);
    }
  }
  s.partial = s.frames.size() < cameras_.size();
  slot.finalized = true;
  ready_.push_back(std::move(s));
  s = Sample{};
}

void SampleAssembler::try_finalize() {
  while (next_open_ < slots_.size() && ready(slots_[next_open_])) {
    finalize(slots_[next_open_]);
    ++next_open_;
  }
}

std::vector<Sample> SampleAssembler::poll() {
  std::vector<Sample> out;
  out.swap(ready_);
  return out;
}

std::vector<Sample> SampleAssembler::finish() {
  closed_ = true;
  place_pending();
  try_finalize();
  return poll();
}

Assembly assemble(std::span<const TriggerEvent> triggers, std::span<const FrameHeader> frames,
                  const std::vector<std::string>& cameras, std::span<const geom::InsPose> poses,
                  const AssemblerConfig& config) {
  // (time, stream, index); poses before triggers before frames at equal times.
  std::vector<std::tuple<Timestamp, int, std::size_t>> order;
  order.reserve(triggers.size() + frames.size() + poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) order.emplace_back(poses[i].time, 0, i);
  for (std::size_t i = 0; i < triggers.size(); ++i) order.emplace_back(triggers[i].time, 1, i);
  for (std::size_t i = 0; i < frames.size(); ++i) order.emplace_back(frames[i].arrival_time, 2, i);
  std::sort(order.begin(), order.end());

  SampleAssembler assembler(cameras, config);
  Assembly out;
  for (const auto& [t, stream, i] : order) {
    switch (stream) {
      case 0: assembler.push_pose(poses[i]); break;
      case 1: assembler.push_trigger(triggers[i]); break;
      default: assembler.push_frame(frames[i]); break;
    }
    for (auto& s : assembler.poll()) out.samples.push_back(std::move(s));
  }
  for (auto& s : assembler.finish()) out.samples.push_back(std::move(s));
  out.report = assembler.report();
  return out;
}

}  // namespace aerosurvey::sync
