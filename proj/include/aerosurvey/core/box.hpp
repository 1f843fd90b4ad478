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

#include <algorithm>

#include <Eigen/Core>

namespace aerosurvey {

/// Axis-aligned box in continuous pixel coordinates; pixel i spans [i, i+1).
struct Box {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Eigen::Vector2d center() const { return {x + 0.5 * w, y + 0.5 * h}; }
  double area() const { return w * h; }
  Box offset(double dx, double dy) const { return {x + dx, y + dy, w, h}; }
  Box clamped(double width, double height) const {
    const double x0 = std::clamp(x, 0.0, width);
    const double y0 = std::clamp(y, 0.0, height);
    const double x1 = std::clamp(x + w, 0.0, width);
    const double y1 = std::clamp(y + h, 0.0, height);
    return {x0, y0, x1 - x0, y1 - y0};
  }
  static Box around(const Eigen::Vector2d& c, double half_w, double half_h) {
    return {c.x() - half_w, c.y() - half_h, 2.0 * half_w, 2.0 * half_h};
  }

  bool operator==(const Box&) const = default;
};

inline double intersection_area(const Box& a, const Box& b) {
  const double w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const double h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return (w > 0.0 && h > 0.0) ? w * h : 0.0;
}

inline double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace aerosurvey
