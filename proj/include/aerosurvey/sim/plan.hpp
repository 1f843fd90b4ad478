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

#include <vector>

#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/geom/pose.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::sim {

enum class Pattern { transects, figure_eight };

std::string_view to_string(Pattern p);
Pattern parse_pattern(std::string_view s);

struct FlightPlan {
  Pattern pattern = Pattern::transects;
  std::vector<double> altitudes_m = {305.0};
  double speed_mps = 77.0;
  double trigger_rate_hz = 1.0;
  /// Flight time. Zero means the full length of the planned path.
  double duration_s = 300.0;
  geom::GeoPoint origin{64.5011, -165.4064, 0.0};
  Timestamp start_time = Timestamp::from_micros(1'744'411'407'000'000);
  double heading_deg = 0.0;
  double ins_rate_hz = 50.0;
  double max_bank_deg = 30.0;

  // Transects. legs == 1 with leg_length_m == 0 is one straight leg.
  int legs = 1;
  double leg_length_m = 0.0;
  double leg_spacing_m = 2500.0;

  // Figure eights: two tangent loops, repeated per altitude, joined by a
  // climbing loop.
  double loop_radius_m = 1200.0;
  int loops_per_altitude = 1;

  /// Throws PlanError.
  void validate() const;
};

inline constexpr double kGravity = 9.80665;

/// Smallest turn radius at `speed_mps` and bank limit.
double min_turn_radius(double speed_mps, double max_bank_deg);

/// Horizontal path of the plan, evaluated by time. Position is C1; attitude
/// follows the coordinated-turn bank for the local curvature.
class Trajectory {
 public:
  explicit Trajectory(const FlightPlan& plan);

  const FlightPlan& plan() const { return plan_; }
  const geom::LocalFrame& frame() const { return frame_; }
  Timestamp start() const { return plan_.start_time; }
  Timestamp end() const { return plan_.start_time + duration_us_; }
  double path_length_m() const { return path_length_; }

  geom::InsPose evaluate(Timestamp t) const;
  /// Horizontal ENU position and heading (deg) at time t.
  Eigen::Vector3d position_enu(Timestamp t) const;
  double heading_deg(Timestamp t) const;

 private:
  struct Segment {
    bool arc = false;
    Eigen::Vector2d start = Eigen::Vector2d::Zero();
    double heading_deg = 0.0;
    double length = 0.0;
    double radius = 0.0;
    int turn = 0;  ///< +1 right (clockwise), -1 left
    double alt0 = 0.0;
    double alt1 = 0.0;
  };
  struct State {
    Eigen::Vector2d pos;
    double heading_deg;
    double alt;
    double gradient;
    const Segment* seg;
  };

  void add_line(double length, double alt);
  void add_arc(double radius, int turn, double angle_rad, double alt0, double alt1);
  State state_at(double s) const;

  FlightPlan plan_;
  geom::LocalFrame frame_;
  std::vector<Segment> segments_;
  std::vector<double> seg_start_;
  double path_length_ = 0.0;
  std::int64_t duration_us_ = 0;
};

/// INS records at plan.ins_rate_hz from start to end inclusive.
std::vector<geom::InsPose> generate_trajectory(const FlightPlan& plan);
std::vector<geom::InsPose> sample_trajectory(const Trajectory& trajectory);

/// floor(duration * rate) pulses, seq from 0, at exact microsecond times.
std::vector<sync::TriggerEvent> generate_triggers(const FlightPlan& plan);
std::vector<sync::TriggerEvent> generate_triggers(const Trajectory& trajectory);

}  // namespace aerosurvey::sim
