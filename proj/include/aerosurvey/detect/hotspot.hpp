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


// Reference thermal hot-spot detector: robust background statistics, a
// sigma threshold, and 8-connected components.

#pragma once

#include <vector>

#include "aerosurvey/core/image.hpp"
#include "aerosurvey/detect/detection.hpp"

namespace aerosurvey::detect {

struct DetectorParams {
  double threshold_sigmas = 6.0;
  int min_area = 4;
  int max_area = 10000;
  /// Score = min(1, peak contrast / (score_sigmas * sigma)).
  double score_sigmas = 20.0;
  /// Lower bound on the background sigma so flat frames do not explode.
  double min_sigma = 0.5;

  /// Throws ValidationError.
  void validate() const;
};

struct BackgroundStats {
  double median = 0.0;
  double mad = 0.0;    ///< median absolute deviation
  double sigma = 0.0;  ///< 1.4826 * mad, floored at min_sigma
};

/// Median and MAD of a single-channel image, treating each integer level as
/// spread uniformly over [v - 0.5, v + 0.5). Runs off a histogram.
template <typename T>
BackgroundStats background_stats(const Image<T>& frame, double min_sigma);

/// Throws ValidationError for multi-channel frames. Detections carry bbox,
/// score and the hot_spot label; the caller fills camera, trigger and ground.
std::vector<Detection> detect_hotspots(const ImageBuffer& frame, const DetectorParams& params);

// Connected components over a boolean mask, 8-connectivity. Pixel indices are
// y * width + x in scan order of discovery.
struct Component {
  std::vector<int> pixels;
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  ///< inclusive extent

  int area() const { return static_cast<int>(pixels.size()); }
};
std::vector<Component> connected_components(const std::vector<std::uint8_t>& mask, int width, int height);

}  // namespace aerosurvey::detect
