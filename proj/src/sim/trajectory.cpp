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


#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/sim/plan.hpp"

namespace aerosurvey::sim {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

Eigen::Vector2d direction(double heading_deg) {
  return {std::sin(heading_deg * kDeg), std::cos(heading_deg * kDeg)};
}

Eigen::Vector2d right_normal(double heading_deg) {
  return {std::cos(heading_deg * kDeg), -std::sin(heading_deg * kDeg)};
}

}  // namespace

std::string_view to_string(Pattern p) { return p == Pattern::transects ? "transects" : "figure_eight"; }

Pattern parse_pattern(std::string_view s) {
  if (s == "transects" || s == "survey-transects" || s == "survey_transects") return Pattern::transects;
  if (s == "figure_eight" || s == "figure-eight") return Pattern::figure_eight;
  throw ValidationError(fmt::format("unknown flight pattern '{}'", s));
}

double min_turn_radius(double speed_mps, double max_bank_deg) {
  return speed_mps * speed_mps / (kGravity * std::tan(max_bank_deg * kDeg));
}

void FlightPlan::validate() const {
  if (altitudes_m.empty()) throw PlanError("plan needs at least one altitude");
  for (double a : altitudes_m) {
    if (!(a > 0.0)) throw PlanError(fmt::format("altitude {} m must be positive", a));
  }
  if (!(speed_mps > 0.0)) throw PlanError("speed must be positive");
  if (!(trigger_rate_hz > 0.0)) throw PlanError("trigger rate must be positive");
  if (!(ins_rate_hz >= 50.0)) throw PlanError("INS rate must be at least 50 Hz");
  if (!(duration_s >= 0.0)) throw PlanError("duration must be non-negative");
  if (!(max_bank_deg > 0.0 && max_bank_deg < 90.0)) throw PlanError("max bank must be in (0, 90) degrees");
  geom::validate(origin);
  const double r_min = min_turn_radius(speed_mps, max_bank_deg);
  if (pattern == Pattern::transects) {
    if (legs < 1) throw PlanError("transect plan needs at least one leg");
    if (legs == 1 && leg_length_m == 0.0 && duration_s == 0.0) {
      throw PlanError("single open-ended leg needs a duration");
    }
    if (legs > 1) {
      if (!(leg_length_m > 0.0)) throw PlanError("multi-leg plan needs a positive leg length");
      if (leg_spacing_m / 2.0 < r_min) {
        throw PlanError(fmt::format("turn radius {:.1f} m is below the {:.1f} m minimum for {} m/s at {} deg bank",
                                    leg_spacing_m / 2.0, r_min, speed_mps, max_bank_deg));
      }
    }
  } else {
    if (loops_per_altitude < 1) throw PlanError("figure-eight plan needs at least one loop per altitude");
    if (loop_radius_m < r_min) {
      throw PlanError(fmt::format("loop radius {:.1f} m is below the {:.1f} m minimum for {} m/s at {} deg bank",
                                  loop_radius_m, r_min, speed_mps, max_bank_deg));
    }
  }
}

Trajectory::Trajectory(const FlightPlan& plan) : plan_(plan), frame_(plan.origin) {
  plan_.validate();
  const double alt = plan_.altitudes_m.front();
  if (plan_.pattern == Pattern::transects) {
    if (plan_.legs == 1 && plan_.leg_length_m == 0.0) {
      add_line(plan_.speed_mps * plan_.duration_s, alt);
    } else {
      const double r = plan_.leg_spacing_m / 2.0;
      for (int i = 0; i < plan_.legs; ++i) {
        add_line(plan_.leg_length_m, alt);
        if (i + 1 < plan_.legs) add_arc(r, i % 2 == 0 ? +1 : -1, std::numbers::pi, alt, alt);
      }
    }
  } else {
    const double r = plan_.loop_radius_m;
    const auto& alts = plan_.altitudes_m;
    for (std::size_t level = 0; level < alts.size(); ++level) {
      for (int k = 0; k < plan_.loops_per_altitude; ++k) {
        add_arc(r, +1, 2.0 * std::numbers::pi, alts[level], alts[level]);
        add_arc(r, -1, 2.0 * std::numbers::pi, alts[level], alts[level]);
      }
      if (level + 1 < alts.size()) add_arc(r, +1, 2.0 * std::numbers::pi, alts[level], alts[level + 1]);
    }
  }
  const double path_s = path_length_ / plan_.speed_mps;
  const double dur = plan_.duration_s > 0.0 ? std::min(plan_.duration_s, path_s) : path_s;
  duration_us_ = seconds_to_micros(dur);
}

void Trajectory::add_line(double length, double alt) {
  Segment s;
  if (!segments_.empty()) {
    const State end = state_at(path_length_);
    s.start = end.pos;
    s.heading_deg = end.heading_deg;
  } else {
    s.heading_deg = plan_.heading_deg;
  }
  s.length = length;
  s.alt0 = s.alt1 = alt;
  seg_start_.push_back(path_length_);
  segments_.push_back(s);
  path_length_ += length;
}

void Trajectory::add_arc(double radius, int turn, double angle_rad, double alt0, double alt1) {
  Segment s;
  if (!segments_.empty()) {
    const State end = state_at(path_length_);
    s.start = end.pos;
    s.heading_deg = end.heading_deg;
  } else {
    s.heading_deg = plan_.heading_deg;
  }
  s.arc = true;
  s.radius = radius;
  s.turn = turn;
  s.length = radius * angle_rad;
  s.alt0 = alt0;
  s.alt1 = alt1;
  seg_start_.push_back(path_length_);
  segments_.push_back(s);
  path_length_ += s.length;
}

Trajectory::State Trajectory::state_at(double s) const {
  std::size_t i = 0;
  while (i + 1 < segments_.size() && s >= seg_start_[i + 1]) ++i;
  const Segment& seg = segments_[i];
  const double u = std::clamp(s - seg_start_[i], 0.0, seg.length);
  State st;
  st.seg = &seg;
  st.gradient = seg.length > 0.0 ? (seg.alt1 - seg.alt0) / seg.length : 0.0;
  st.alt = seg.alt0 + st.gradient * u;
  if (!seg.arc) {
    st.pos = seg.start + u * direction(seg.heading_deg);
    st.heading_deg = seg.heading_deg;
  } else {
    const Eigen::Vector2d center = seg.start + seg.turn * seg.radius * right_normal(seg.heading_deg);
    st.heading_deg = seg.heading_deg + seg.turn * (u / seg.radius) / kDeg;
    st.pos = center - seg.turn * seg.radius * right_normal(st.heading_deg);
  }
  return st;
}

Eigen::Vector3d Trajectory::position_enu(Timestamp t) const {
  const double s = plan_.speed_mps * static_cast<double>(t - plan_.start_time) * 1e-6;
  const State st = state_at(s);
  return {st.pos.x(), st.pos.y(), st.alt};
}

double Trajectory::heading_deg(Timestamp t) const {
  const double s = plan_.speed_mps * static_cast<double>(t - plan_.start_time) * 1e-6;
  return geom::normalized({0.0, 0.0, state_at(s).heading_deg}).yaw;
}

geom::InsPose Trajectory::evaluate(Timestamp t) const {
  const double v = plan_.speed_mps;
  const double s = v * static_cast<double>(t - plan_.start_time) * 1e-6;
  const State st = state_at(s);
  geom::InsPose p;
  p.time = t;
  p.position = frame_.to_geo(Eigen::Vector3d(st.pos.x(), st.pos.y(), st.alt));
  const double pitch = std::atan(st.gradient);
  double roll = 0.0;
  double yaw_rate = 0.0;  // rad/s
  if (st.seg->arc) {
    roll = st.seg->turn * std::atan(v * v / (kGravity * st.seg->radius));
    yaw_rate = st.seg->turn * v / st.seg->radius;
  }
  p.orientation = geom::normalized({roll / kDeg, pitch / kDeg, st.heading_deg});
  const double psi = st.heading_deg * kDeg;
  p.velocity = Eigen::Vector3d(v * std::cos(psi), v * std::sin(psi), -v * st.gradient);
  p.angular_rate = Eigen::Vector3d(0.0, yaw_rate * std::sin(roll) * std::cos(pitch),
                                   yaw_rate * std::cos(roll) * std::cos(pitch)) /
                   kDeg;
  return p;
}

std::vector<geom::InsPose> sample_trajectory(const Trajectory& trajectory) {
  const auto step = static_cast<std::int64_t>(std::llround(1e6 / trajectory.plan().ins_rate_hz));
  std::vector<geom::InsPose> out;
  const std::int64_t span = trajectory.end() - trajectory.start();
  out.reserve(static_cast<std::size_t>(span / step + 1));
  for (std::int64_t k = 0; k * step <= span; ++k) out.push_back(trajectory.evaluate(trajectory.start() + k * step));
  return out;
}

std::vector<geom::InsPose> generate_trajectory(const FlightPlan& plan) {
  return sample_trajectory(Trajectory(plan));
}

std::vector<sync::TriggerEvent> generate_triggers(const Trajectory& trajectory) {
  const double rate = trajectory.plan().trigger_rate_hz;
  const double dur = static_cast<double>(trajectory.end() - trajectory.start()) * 1e-6;
  const auto n = static_cast<std::int64_t>(std::floor(dur * rate + 1e-9));
  std::vector<sync::TriggerEvent> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t k = 0; k < n; ++k) {
    const auto us = static_cast<std::int64_t>(std::llround(static_cast<double>(k) * 1e6 / rate));
    out.push_back({k, trajectory.start() + us});
  }
  return out;
}

std::vector<sync::TriggerEvent> generate_triggers(const FlightPlan& plan) {
  return generate_triggers(Trajectory(plan));
}

}  // namespace aerosurvey::sim
