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


// Evaluation counts and ratios.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aerosurvey/detect/detection.hpp"

namespace aerosurvey::detect {

/// Ratios whose denominator is zero are absent rather than 0.
struct Metrics {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::optional<double> recall;
  std::optional<double> precision;
  std::optional<double> f1;
};

/// Throws ValidationError on negative counts.
Metrics metrics_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);

struct TruthObject {
  std::string camera_id;
  std::int64_t trigger_seq = 0;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  Label label = Label::hot_spot;
  std::string target_id;
};

struct Match {
  std::size_t prediction = 0;
  std::size_t truth = 0;
  double distance_px = 0.0;
};

struct Evaluation {
  Metrics metrics;
  std::vector<Match> matches;
};

/// Greedy matching by descending prediction score: each prediction takes the
/// nearest unmatched truth in the same image within `match_radius_px` (and
/// with the same label when `class_aware`).
Evaluation evaluate(std::span<const Detection> predictions, std::span<const TruthObject> truth,
                    double match_radius_px = 10.0, bool class_aware = false);

}  // namespace aerosurvey::detect
