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


#include "aerosurvey/detect/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::detect {

Metrics metrics_from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  if (tp < 0 || fp < 0 || fn < 0) throw ValidationError(fmt::format("negative counts {}/{}/{}", tp, fp, fn));
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  const auto t = static_cast<double>(tp);
  if (tp + fn > 0) m.recall = t / static_cast<double>(tp + fn);
  if (tp + fp > 0) m.precision = t / static_cast<double>(tp + fp);
  if (m.recall && m.precision && *m.recall + *m.precision > 0.0) {
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  } else if (m.recall && m.precision) {
    m.f1 = 0.0;
  }
  return m;
}

Evaluation evaluate(std::span<const Detection> predictions, std::span<const TruthObject> truth, double match_radius_px,
                    bool class_aware) {
  std::map<std::pair<std::int64_t, std::string>, std::vector<std::size_t>> by_image;
  for (std::size_t i = 0; i < truth.size(); ++i) by_image[{truth[i].trigger_seq, truth[i].camera_id}].push_back(i);
  std::vector<std::size_t> order(predictions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detection_rank_less(predictions[a], predictions[b]);
  });
  std::vector<bool> taken(truth.size(), false);
  Evaluation ev;
  for (std::size_t pi : order) {
    const Detection& p = predictions[pi];
    const auto it = by_image.find({p.trigger_seq, p.camera_id});
    if (it == by_image.end()) continue;
    const Eigen::Vector2d c = p.bbox.center();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t ti : it->second) {
      if (taken[ti] || (class_aware && truth[ti].label != p.label)) continue;
      const double d = (truth[ti].center - c).norm();
      if (d <= match_radius_px && d < best) {
        best = d;
        best_i = ti;
      }
    }
    if (std::isfinite(best)) {
      taken[best_i] = true;
      ev.matches.push_back({pi, best_i, best});
    }
  }
  const auto tp = static_cast<std::int64_t>(ev.matches.size());
  ev.metrics = metrics_from_counts(tp, static_cast<std::int64_t>(predictions.size()) - tp,
                                   static_cast<std::int64_t>(truth.size()) - tp);
  return ev;
}

}  // namespace aerosurvey::detect
