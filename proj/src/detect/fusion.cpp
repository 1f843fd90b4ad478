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


#include "aerosurvey/detect/fusion.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/projection.hpp"

namespace aerosurvey::detect {
namespace {

double median_of(std::vector<double>& v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

const geom::CameraModel& model_for(const CameraSet& models, const std::string& id) {
  const auto it = models.find(id);
  if (it == models.end()) throw ConfigurationError(fmt::format("no calibration for camera '{}'", id));
  return it->second;
}

std::optional<geom::GeoPoint> geolocate(const geom::CameraModel& cam, const geom::InsPose& pose,
                                        const Eigen::Vector2d& px, double ground_up, const geom::LocalFrame& frame) {
  try {
    return geom::project_to_ground(cam, pose, px, ground_up, frame);
  } catch (const HorizonError&) {
    return std::nullopt;
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

std::vector<std::string> rgb_candidates(const CameraSet& models, const sync::Sample& sample, geom::View view) {
  std::vector<std::string> out;
  const std::string same = geom::camera_id_for(geom::Band::rgb, view);
  if (sample.frames.count(same)) out.push_back(same);
  for (geom::View v : {geom::View::C, geom::View::L, geom::View::R}) {
    const std::string id = geom::camera_id_for(geom::Band::rgb, v);
    if (v != view && sample.frames.count(id)) out.push_back(id);
  }
  for (const auto& id : out) model_for(models, id);
  return out;
}

}  // namespace

PixelWindow crop_chip(int frame_width, int frame_height, const Eigen::Vector2d& center, int chip_width,
                      int chip_height) {
  if (chip_width <= 0 || chip_height <= 0 || chip_width > frame_width || chip_height > frame_height) {
    throw SizeError(fmt::format("chip {}x{} does not fit a {}x{} frame", chip_width, chip_height, frame_width,
                                frame_height));
  }
  const auto place = [](double c, int size, int limit) {
    const double start = std::floor(c - size / 2.0 + 0.5);
    return static_cast<int>(std::clamp(start, 0.0, static_cast<double>(limit - size)));
  };
  return {place(center.x(), chip_width, frame_width), place(center.y(), chip_height, frame_height), chip_width,
          chip_height};
}

std::vector<ChipDetection> EchoDetector::detect(const ImageBuffer& chip, const ChipContext& context) const {
  ChipDetection d;
  d.bbox = Box::around(context.expected_center, context.expected_size.x() / 2.0, context.expected_size.y() / 2.0)
               .clamped(image_width(chip), image_height(chip));
  d.score = context.hotspot_score;
  d.label = label_;
  return {d};
}

TemplateClassifier::TemplateClassifier(std::vector<ColorTemplate> templates, double min_score, double threshold_sigmas,
                                       double search_radius_px)
    : templates_(std::move(templates)),
      min_score_(min_score),
      threshold_sigmas_(threshold_sigmas),
      search_radius_px_(search_radius_px) {
  if (templates_.empty()) throw ValidationError("template classifier needs at least one template");
}

std::vector<ChipDetection> TemplateClassifier::detect(const ImageBuffer& chip, const ChipContext& context) const {
  return std::visit(
      [&](const auto& im) -> std::vector<ChipDetection> {
        const int w = im.width();
        const int h = im.height();
        const int ch = std::min(im.channels(), 3);
        const int border = std::max(1, std::min({8, w / 4, h / 4}));
        std::array<double, 3> bg{}, sigma{};
        for (int c = 0; c < ch; ++c) {
          std::vector<double> v;
          for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
              if (x >= border && x < w - border && y >= border && y < h - border) continue;
              v.push_back(im.at(x, y, c));
            }
          }
          bg[c] = median_of(v);
          for (auto& x : v) x = std::abs(x - bg[c]);
          sigma[c] = std::max(1.4826 * median_of(v), 0.5);
        }
        std::vector<double> dev(static_cast<std::size_t>(w) * h, 0.0);
        std::vector<std::uint8_t> mask(dev.size(), 0);
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            double d = 0.0;
            for (int c = 0; c < ch; ++c) d = std::max(d, std::abs(im.at(x, y, c) - bg[c]) / sigma[c]);
            const auto i = static_cast<std::size_t>(y) * w + x;
            dev[i] = d;
            mask[i] = d > threshold_sigmas_;
          }
        }
        const Component* best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        const auto comps = connected_components(mask, w, h);
        for (const auto& c : comps) {
          if (c.area() < 4) continue;
          const double dx = std::max({c.x0 - context.expected_center.x(), 0.0, context.expected_center.x() - (c.x1 + 1)});
          const double dy = std::max({c.y0 - context.expected_center.y(), 0.0, context.expected_center.y() - (c.y1 + 1)});
          const double dist = std::hypot(dx, dy);
          if (dist < best_dist || (dist == best_dist && best && c.area() > best->area())) {
            best_dist = dist;
            best = &c;
          }
        }
        if (!best || best_dist > search_radius_px_) return {};
        double peak = 0.0;
        for (int idx : best->pixels) peak = std::max(peak, dev[static_cast<std::size_t>(idx)]);
        Eigen::Vector3d m = Eigen::Vector3d::Zero();
        int n = 0;
        for (int idx : best->pixels) {
          if (dev[static_cast<std::size_t>(idx)] < 0.5 * peak) continue;
          for (int c = 0; c < ch; ++c) m[c] += im.at(idx % w, idx / w, c) - bg[c];
          ++n;
        }
        m /= n;
        const ColorTemplate* pick = nullptr;
        double pick_score = -1.0;
        for (const auto& t : templates_) {
          Eigen::Vector3d d = Eigen::Vector3d::Zero();
          for (int c = 0; c < ch; ++c) d[c] = t.delta[static_cast<std::size_t>(c)];
          if (!(d.squaredNorm() > 0.0)) continue;
          const double a = m.dot(d) / d.squaredNorm();
          if (a < 0.25 || a > 4.0) continue;
          const double s = 1.0 - (m - a * d).norm() / m.norm();
          if (s > pick_score) {
            pick_score = s;
            pick = &t;
          }
        }
        if (!pick || pick_score < min_score_) return {};
        double sw = 0.0, sx = 0.0, sy = 0.0;
        for (int idx : best->pixels) {
          const double v = dev[static_cast<std::size_t>(idx)];
          sw += v;
          sx += v * (idx % w + 0.5);
          sy += v * (idx / w + 0.5);
        }
        ChipDetection out;
        out.bbox = Box::around({sx / sw, sy / sw}, (best->x1 + 1 - best->x0) / 2.0, (best->y1 + 1 - best->y0) / 2.0)
                       .clamped(w, h);
        out.score = std::clamp(pick_score, 0.0, 1.0);
        out.label = pick->label;
        return {out};
      },
      chip);
}

FusionResult late_fusion(const sync::Sample& sample, const CameraSet& models, const DetectorParams& ir_params,
                         const SecondStageDetector* second_stage, const FusionParams& params, double ground_up,
                         const geom::LocalFrame& frame) {
  FusionResult result;
  std::set<std::string> processed;
  std::vector<Detection> all;
  for (const auto& [id, header] : sample.frames) {
    if (id.rfind("ir_", 0) != 0) continue;
    const geom::CameraModel& ir = model_for(models, id);
    if (!header.payload) throw ValidationError(fmt::format("frame {} from {} has no pixels", header.frame_id, id));
    const ImageBuffer image = header.payload->render();
    processed.insert(id);
    std::vector<Detection> hot = detect_hotspots(image, ir_params);
    const std::vector<std::string> rgb_ids =
        second_stage ? rgb_candidates(models, sample, ir.view) : std::vector<std::string>{};
    for (Detection& d : hot) {
      d.camera_id = id;
      d.trigger_seq = sample.trigger.seq;
      const Eigen::Vector2d center = d.bbox.center();
      if (sample.pose_missing) {
        all.push_back(std::move(d));
        continue;
      }
      bool chipped = false;
      if (second_stage && d.score >= params.min_hotspot_score) {
        for (const auto& rgb_id : rgb_ids) {
          const geom::CameraModel& rgb = models.at(rgb_id);
          geom::PixelProjection mapped;
          try {
            mapped = geom::map_pixel_cross_spectral(ir, rgb, sample.ins, center, ground_up, frame);
          } catch (const HorizonError&) {
            continue;
          } catch (const BehindCameraError&) {
            continue;
          }
          if (!mapped.in_view) continue;
          const auto& k = rgb.intrinsics;
          const PixelWindow win = crop_chip(k.width, k.height, mapped.pixel, params.chip_width, params.chip_height);
          const sync::FrameHeader& rgb_frame = sample.frames.at(rgb_id);
          if (!rgb_frame.payload) throw ValidationError(fmt::format("frame {} from {} has no pixels", rgb_frame.frame_id, rgb_id));
          const ImageBuffer chip = rgb_frame.payload->render_window(win);
          ChipContext ctx;
          ctx.camera_id = rgb_id;
          ctx.window = win;
          ctx.expected_center = mapped.pixel - Eigen::Vector2d(win.x0, win.y0);
          const double ratio = geom::gsd_at_pixel(ir, sample.ins, center, ground_up, frame) /
                               geom::gsd_at_pixel(rgb, sample.ins, mapped.pixel, ground_up, frame);
          ctx.expected_size = Eigen::Vector2d(d.bbox.w, d.bbox.h) * ratio;
          ctx.hotspot_score = d.score;
          processed.insert(rgb_id);
          for (const ChipDetection& c : second_stage->detect(chip, ctx)) {
            Detection out;
            out.camera_id = rgb_id;
            out.trigger_seq = sample.trigger.seq;
            out.bbox = chip_to_global(c.bbox, win).clamped(k.width, k.height);
            out.score = std::clamp(c.score, 0.0, 1.0);
            out.label = c.label;
            out.ground = geolocate(rgb, sample.ins, out.bbox.center(), ground_up, frame);
            all.push_back(std::move(out));
          }
          chipped = true;
          break;
        }
      }
      if (!chipped) {
        d.ground = geolocate(ir, sample.ins, center, ground_up, frame);
        all.push_back(std::move(d));
      }
    }
  }
  result.detections = nms(std::move(all), params.nms_iou);
  result.processed_cameras.assign(processed.begin(), processed.end());
  return result;
}

}  // namespace aerosurvey::detect
