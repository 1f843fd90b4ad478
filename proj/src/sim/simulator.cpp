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


#include "aerosurvey/sim/simulator.hpp"

#include <fmt/format.h>
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"

namespace aerosurvey::sim {

FlightSimulator::FlightSimulator(SimConfig config)
    : config_(std::move(config)), trajectory_(config_.plan) {
  if (config_.rig.empty()) throw ValidationError("simulation rig is empty");
  for (const auto& m : config_.rig) m.validate();
  for (const auto& [id, c] : config_.controls) index_of(id);
  if (config_.faults.jitter_s < 0.0 || config_.faults.drop_probability < 0.0 ||
      config_.faults.drop_probability > 1.0) {
    throw ValidationError("fault parameters out of range");
  }
  triggers_ = generate_triggers(trajectory_);
  ins_ = sample_trajectory(trajectory_);
  for (const auto& m : config_.rig) {
    const auto it = config_.controls.find(m.camera_id);
    controls_.push_back(it != config_.controls.end() ? it->second : default_control(m.band));
    nuc_reference_.push_back(trajectory_.start());
  }
}

std::size_t FlightSimulator::index_of(const std::string& camera_id) const {
  for (std::size_t i = 0; i < config_.rig.size(); ++i) {
    if (config_.rig[i].camera_id == camera_id) return i;
  }
  throw ValidationError(fmt::format("unknown camera '{}'", camera_id));
}

const CameraControl& FlightSimulator::control(const std::string& camera_id) const {
  return controls_[index_of(camera_id)];
}

void FlightSimulator::set_control(const std::string& camera_id, const CameraControl& control) {
  const std::size_t i = index_of(camera_id);
  if (control.nuc_interval_s != controls_[i].nuc_interval_s) {
    // A new NUC schedule starts with a correction at the next trigger.
    nuc_reference_[i] = next_ < triggers_.size() ? triggers_[next_].time : trajectory_.end();
  }
  controls_[i] = control;
}

double FlightSimulator::nuc_age_s(const std::string& camera_id, Timestamp t) const {
  const std::size_t i = index_of(camera_id);
  const double interval = controls_[i].nuc_interval_s;
  const double since = static_cast<double>(t - nuc_reference_[i]) * 1e-6;
  if (!(interval > 0.0)) return since;
  return std::fmod(std::max(since, 0.0), interval);
}

FlightSimulator::Step FlightSimulator::step() {
  if (done()) throw ValidationError("simulation already finished");
  const std::size_t k = next_++;
  Step st;
  st.trigger = triggers_[k];
  const Timestamp t = st.trigger.time;
  const Timestamp until = k + 1 < triggers_.size() ? triggers_[k + 1].time : trajectory_.end() + 1;
  while (next_pose_ < ins_.size() && ins_[next_pose_].time < until) st.ins.push_back(ins_[next_pose_++]);

  const geom::InsPose pose = trajectory_.evaluate(t);
  const geom::LocalFrame& frame = trajectory_.frame();
  st.truth.seq = st.trigger.seq;
  st.truth.time = t;
  st.truth.pose = pose;

  const auto seq_u = static_cast<std::uint64_t>(st.trigger.seq);
  Rng rng(hash_combine(config_.seed, seq_u + 1));
  const std::size_t n = config_.rig.size();
  for (std::size_t c = 0; c < n; ++c) {
    const geom::CameraModel& cam = config_.rig[c];
    const bool drop = rng.bernoulli(config_.faults.drop_probability);
    const double jitter = rng.uniform(-config_.faults.jitter_s, config_.faults.jitter_s);
    const bool stalled = std::any_of(config_.faults.stalls.begin(), config_.faults.stalls.end(), [&](const Stall& s) {
      return s.camera_id == cam.camera_id && st.trigger.seq >= s.from_seq && st.trigger.seq <= s.to_seq;
    });
    auto sightings = visible_targets(cam, pose, frame, config_.scene, config_.ground_up);
    if (drop || stalled) {
      st.truth.drops.push_back({cam.camera_id, st.trigger.seq, stalled});
    } else {
      sync::FrameHeader f;
      f.frame_id = seq_u * n + c + 1;
      f.camera_id = cam.camera_id;
      f.arrival_time = t + seconds_to_micros(jitter);
      const CameraControl& ctl = controls_[c];
      f.settings.gain_db = ctl.gain_db;
      f.settings.exposure_us = ctl.exposure_us;
      if (cam.band == geom::Band::ir) f.settings.nuc_age_s = nuc_age_s(cam.camera_id, t);
      const std::uint64_t key = hash_combine(hash_combine(config_.seed, c + 1), seq_u);
      f.payload = std::make_shared<SimPayload>(
          std::make_shared<const FrameSpec>(make_frame_spec(cam, ctl, sightings, config_.scene, config_.noise, key)));
      st.truth.frames.push_back({f.frame_id, f.camera_id, f.arrival_time});
      st.frames.push_back(std::move(f));
    }
    for (auto& s : sightings) st.truth.sightings.push_back(std::move(s));
  }
  std::stable_sort(st.frames.begin(), st.frames.end(), [](const sync::FrameHeader& a, const sync::FrameHeader& b) {
    return a.arrival_time < b.arrival_time;
  });
  return st;
}

SimulatedFlight simulate_flight(const SimConfig& config) {
  FlightSimulator sim(config);
  SimulatedFlight out;
  out.triggers = sim.triggers();
  while (!sim.done()) {
    FlightSimulator::Step st = sim.step();
    for (auto& p : st.ins) out.ins.push_back(std::move(p));
    for (auto& f : st.frames) out.frames.push_back(std::move(f));
    for (const auto& f : st.truth.frames) out.truth.frame_trigger[f.frame_id] = st.truth.seq;
    for (const auto& d : st.truth.drops) out.truth.drops.push_back(d);
    out.truth.samples.push_back(std::move(st.truth));
  }
  // Jitter can reorder frames across adjacent triggers only if it exceeds half
  // a period; sort anyway so the stream is in arrival order.
  std::stable_sort(out.frames.begin(), out.frames.end(), [](const sync::FrameHeader& a, const sync::FrameHeader& b) {
    return a.arrival_time < b.arrival_time;
  });
  return out;
}

void write_ground_truth_jsonl(const GroundTruth& truth, std::ostream& out) {
  for (const auto& s : truth.samples) {
    nlohmann::ordered_json j;
    j["seq"] = s.seq;
    j["time"] = s.time.iso8601();
    auto& frames = j["frames"] = nlohmann::ordered_json::array();
    for (const auto& f : s.frames) {
      frames.push_back({{"frame_id", f.frame_id}, {"camera_id", f.camera_id}, {"arrival", f.arrival_time.seconds_string()}});
    }
    auto& drops = j["drops"] = nlohmann::ordered_json::array();
    for (const auto& d : s.drops) drops.push_back({{"camera_id", d.camera_id}, {"stalled", d.stalled}});
    auto& sight = j["sightings"] = nlohmann::ordered_json::array();
    for (const auto& t : s.sightings) {
      sight.push_back({{"target_id", t.target_id},
                       {"species", std::string(to_string(t.species))},
                       {"camera_id", t.camera_id},
                       {"center", {t.center.x(), t.center.y()}},
                       {"bbox", {t.bbox.x, t.bbox.y, t.bbox.w, t.bbox.h}},
                       {"lat", t.ground.lat},
                       {"lon", t.ground.lon}});
    }
    out << j.dump() << '\n';
  }
}

}  // namespace aerosurvey::sim
