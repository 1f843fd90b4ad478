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


#include "aerosurvey/detect/hotspot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::detect {
namespace {

// Piecewise-linear CDF over integer levels lo..hi, each level's mass spread
// uniformly over [v - 0.5, v + 0.5).
class LevelCdf {
 public:
  LevelCdf(std::vector<std::uint32_t> hist, int lo, std::size_t total) : lo_(lo), total_(static_cast<double>(total)) {
    cum_.resize(hist.size() + 1, 0.0);
    for (std::size_t i = 0; i < hist.size(); ++i) cum_[i + 1] = cum_[i] + hist[i];
  }

  double operator()(double x) const {
    const double u = x - (lo_ - 0.5);
    if (u <= 0.0) return 0.0;
    const auto n = static_cast<double>(cum_.size() - 1);
    if (u >= n) return 1.0;
    const auto i = static_cast<std::size_t>(u);
    const double frac = u - static_cast<double>(i);
    return (cum_[i] + frac * (cum_[i + 1] - cum_[i])) / total_;
  }

  double quantile(double q) const {
    const double target = q * total_;
    const auto it = std::lower_bound(cum_.begin() + 1, cum_.end(), target);
    const auto i = static_cast<std::size_t>(it - cum_.begin()) - 1;
    const double mass = cum_[i + 1] - cum_[i];
    const double frac = mass > 0.0 ? (target - cum_[i]) / mass : 0.0;
    return lo_ - 0.5 + static_cast<double>(i) + frac;
  }

  double span() const { return static_cast<double>(cum_.size() - 1); }

 private:
  int lo_;
  double total_;
  std::vector<double> cum_;
};

template <typename T>
std::vector<Detection> detect_impl(const Image<T>& im, const DetectorParams& p) {
  const BackgroundStats bg = background_stats(im, p.min_sigma);
  const double threshold = bg.median + p.threshold_sigmas * bg.sigma;
  const int w = im.width();
  const int h = im.height();
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(w) * h, 0);
  const auto px = im.pixels();
  bool any = false;
  for (std::size_t i = 0; i < px.size(); ++i) {
    const bool hot = static_cast<double>(px[i]) > threshold;
    mask[i] = hot;
    any = any || hot;
  }
  std::vector<Detection> out;
  if (!any) return out;
  for (const Component& c : connected_components(mask, w, h)) {
    if (c.area() < p.min_area || c.area() > p.max_area) continue;
    double sw = 0.0, sx = 0.0, sy = 0.0, peak = 0.0;
    for (int idx : c.pixels) {
      const double v = static_cast<double>(px[static_cast<std::size_t>(idx)]) - bg.median;
      const double x = idx % w + 0.5;
      const double y = idx / w + 0.5;
      sw += v;
      sx += v * x;
      sy += v * y;
      peak = std::max(peak, v);
    }
    const Eigen::Vector2d centroid(sx / sw, sy / sw);
    Detection d;
    const double bw = c.x1 - c.x0 + 1;
    const double bh = c.y1 - c.y0 + 1;
    d.bbox = Box::around(centroid, bw / 2.0, bh / 2.0).clamped(w, h);
    d.score = std::min(1.0, peak / (p.score_sigmas * bg.sigma));
    d.label = Label::hot_spot;
    out.push_back(d);
  }
  std::sort(out.begin(), out.end(), detection_rank_less);
  return out;
}

}  // namespace

void DetectorParams::validate() const {
  if (!(threshold_sigmas > 0.0)) throw ValidationError("threshold_sigmas must be positive");
  if (min_area < 1 || !(min_area < max_area)) {
    throw ValidationError(fmt::format("need 1 <= min_area < max_area, got {} and {}", min_area, max_area));
  }
  if (!(score_sigmas > 0.0)) throw ValidationError("score_sigmas must be positive");
  if (!(min_sigma > 0.0)) throw ValidationError("min_sigma must be positive");
}

template <typename T>
BackgroundStats background_stats(const Image<T>& frame, double min_sigma) {
  BackgroundStats s;
  const auto px = frame.pixels();
  if (px.empty()) {
    s.sigma = min_sigma;
    return s;
  }
  const auto [mn, mx] = std::minmax_element(px.begin(), px.end());
  const int lo = *mn;
  std::vector<std::uint32_t> hist(static_cast<std::size_t>(*mx - lo + 1), 0);
  for (T v : px) ++hist[static_cast<std::size_t>(v - lo)];
  const LevelCdf cdf(std::move(hist), lo, px.size());
  s.median = cdf.quantile(0.5);
  // MAD solves F(m + d) - F(m - d) = 1/2 for d.
  double a = 0.0, b = cdf.span() + 1.0;
  for (int i = 0; i < 60; ++i) {
    const double d = 0.5 * (a + b);
    if (cdf(s.median + d) - cdf(s.median - d) < 0.5) a = d;
    else b = d;
  }
  s.mad = 0.5 * (a + b);
  s.sigma = std::max(1.482602218505602 * s.mad, min_sigma);
  return s;
}

template BackgroundStats background_stats(const Image16&, double);
template BackgroundStats background_stats(const Image8&, double);

std::vector<Detection> detect_hotspots(const ImageBuffer& frame, const DetectorParams& params) {
  params.validate();
  return std::visit(
      [&](const auto& im) {
        if (im.channels() != 1) {
          throw ValidationError(fmt::format("hot-spot detection needs a single-channel frame, got {} channels",
                                            im.channels()));
        }
        return detect_impl(im, params);
      },
      frame);
}

std::vector<Component> connected_components(const std::vector<std::uint8_t>& mask, int width, int height) {
  std::vector<Component> out;
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<int> stack;
  for (int start = 0; start < width * height; ++start) {
    if (!mask[static_cast<std::size_t>(start)] || seen[static_cast<std::size_t>(start)]) continue;
    Component c;
    c.x0 = c.x1 = start % width;
    c.y0 = c.y1 = start / width;
    stack.push_back(start);
    seen[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      c.pixels.push_back(idx);
      const int x = idx % width;
      const int y = idx / width;
      c.x0 = std::min(c.x0, x);
      c.x1 = std::max(c.x1, x);
      c.y0 = std::min(c.y0, y);
      c.y1 = std::max(c.y1, y);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= width || ny >= height) continue;
          const auto n = static_cast<std::size_t>(ny * width + nx);
          if (mask[n] && !seen[n]) {
            seen[n] = 1;
            stack.push_back(static_cast<int>(n));
          }
        }
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace aerosurvey::detect
