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


#include "aerosurvey/sim/render.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"

namespace aerosurvey::sim {
namespace {

// Standard normal quantiles at (i + 0.5) / 65536. Indexed by 16 hash bits
// this gives white Gaussian noise with tails cut near 4.3 sigma.
const std::array<float, 65536>& normal_table() {
  static const auto table = [] {
    std::array<float, 65536> t{};
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double p = (static_cast<double>(i) + 0.5) / 65536.0;
      t[i] = static_cast<float>(std::numbers::sqrt2 * boost::math::erf_inv(2.0 * p - 1.0));
    }
    return t;
  }();
  return table;
}

double signal_scale(const geom::CameraModel& cam, const CameraControl& control, const NoiseParams& noise) {
  if (cam.band == geom::Band::ir || !noise.exposure_scaling) return 1.0;
  const CameraControl ref = default_control(cam.band);
  return (control.exposure_us / ref.exposure_us) * std::pow(10.0, (control.gain_db - ref.gain_db) / 20.0);
}

int channels_for(geom::Band b) { return b == geom::Band::rgb ? 3 : 1; }

template <typename T>
Image<T> render_impl(const FrameSpec& spec, const PixelWindow& w, double max_value) {
  const geom::Band band = spec.camera.band;
  const int ch = channels_for(band);
  const double scale = signal_scale(spec.camera, spec.control, spec.noise);
  std::array<double, 3> base{};
  double sigma = 0.0;
  switch (band) {
    case geom::Band::ir:
      base = {spec.noise.ir_baseline, 0.0, 0.0};
      sigma = spec.noise.ir_sigma;
      break;
    case geom::Band::rgb:
      for (int c = 0; c < 3; ++c) base[c] = spec.noise.rgb_background[c] * scale;
      sigma = spec.noise.rgb_sigma;
      break;
    case geom::Band::uv:
      base = {spec.noise.uv_baseline * scale, 0.0, 0.0};
      sigma = spec.noise.uv_sigma;
      break;
  }
  const auto& table = normal_table();
  const int full_w = spec.camera.intrinsics.width;

  struct Active {
    const FrameSpec::Blob* blob;
    int x0, x1;
    std::vector<double> ex;
  };
  std::vector<Active> active;
  for (const auto& b : spec.blobs) {
    const double r = 4.0 * b.sigma;
    Active a;
    a.blob = &b;
    a.x0 = std::max(w.x0, static_cast<int>(std::floor(b.center.x() - r)));
    a.x1 = std::min(w.x0 + w.width, static_cast<int>(std::ceil(b.center.x() + r)));
    if (a.x0 >= a.x1) continue;
    const double y0 = b.center.y() - r;
    const double y1 = b.center.y() + r;
    if (y1 < w.y0 || y0 > w.y0 + w.height) continue;
    const double inv = 1.0 / (2.0 * b.sigma * b.sigma);
    for (int x = a.x0; x < a.x1; ++x) {
      const double dx = x + 0.5 - b.center.x();
      a.ex.push_back(std::exp(-dx * dx * inv));
    }
    active.push_back(std::move(a));
  }

  // Adding and removing 2^52 rounds to nearest-even like nearbyint, inline.
  constexpr double kRound = 4503599627370496.0;
  const auto quantize = [&](double v) { return static_cast<T>((std::clamp(v, 0.0, max_value) + kRound) - kRound); };

  // Rows no blob reaches map each hash index straight to a pixel value.
  const bool use_lut = static_cast<std::int64_t>(w.width) * w.height >= 65536;
  std::vector<T> lut;
  if (use_lut) {
    lut.resize(table.size() * static_cast<std::size_t>(ch));
    for (int c = 0; c < ch; ++c) {
      for (std::size_t i = 0; i < table.size(); ++i) lut[c * table.size() + i] = quantize(base[c] + sigma * table[i]);
    }
  }

  Image<T> out(w.width, w.height, ch);
  std::vector<double> row(static_cast<std::size_t>(w.width) * ch);
  for (int yy = 0; yy < w.height; ++yy) {
    const int y = w.y0 + yy;
    const std::uint64_t row_key = spec.noise_key + static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(full_w);
    if (use_lut && std::none_of(active.begin(), active.end(), [&](const Active& a) {
          const double dy = y + 0.5 - a.blob->center.y();
          return std::exp(-dy * dy / (2.0 * a.blob->sigma * a.blob->sigma)) >= 1e-12;
        })) {
      auto dst = out.row(yy);
      for (int xx = 0; xx < w.width; ++xx) {
        const std::uint64_t h = mix64(row_key + static_cast<std::uint64_t>(w.x0 + xx));
        for (int c = 0; c < ch; ++c) {
          dst[static_cast<std::size_t>(xx) * ch + c] = lut[c * table.size() + ((h >> (16 * c)) & 0xFFFF)];
        }
      }
      continue;
    }
    for (int xx = 0; xx < w.width; ++xx) {
      const std::uint64_t h = mix64(row_key + static_cast<std::uint64_t>(w.x0 + xx));
      for (int c = 0; c < ch; ++c) {
        const auto idx = static_cast<std::size_t>((h >> (16 * c)) & 0xFFFF);
        row[static_cast<std::size_t>(xx) * ch + c] = base[c] + sigma * table[idx];
      }
    }
    for (const auto& a : active) {
      const FrameSpec::Blob& b = *a.blob;
      const double dy = y + 0.5 - b.center.y();
      const double ey = std::exp(-dy * dy / (2.0 * b.sigma * b.sigma));
      if (ey < 1e-12) continue;
      for (int x = a.x0; x < a.x1; ++x) {
        const double g = ey * a.ex[static_cast<std::size_t>(x - a.x0)];
        double* px = &row[static_cast<std::size_t>(x - w.x0) * ch];
        for (int c = 0; c < ch; ++c) px[c] += b.delta[c] * g;
      }
    }
    auto dst = out.row(yy);
    for (std::size_t i = 0; i < row.size(); ++i) dst[i] = quantize(row[i]);
  }
  return out;
}

}  // namespace

std::vector<TargetSighting> visible_targets(const geom::CameraModel& camera, const geom::InsPose& pose,
                                            const geom::LocalFrame& frame, const Scene& scene, double ground_up) {
  std::vector<TargetSighting> out;
  const geom::CameraWorldPose world = geom::camera_world_pose(camera.rig, pose, frame);
  const auto& k = camera.intrinsics;
  for (const auto& t : scene.targets) {
    const Eigen::Vector3d g = frame.to_enu(t.ground);
    const Eigen::Vector3d pc = world.world_from_camera.transpose() * (g - world.center);
    if (!(pc.z() > 0.0)) continue;
    // Cheap cull before the distortion model.
    if (std::abs(pc.x() / pc.z()) > 1.5 * k.width / k.fx || std::abs(pc.y() / pc.z()) > 1.5 * k.height / k.fy) {
      continue;
    }
    const geom::PixelProjection p = geom::project_enu_point(camera, world, g);
    if (!p.in_view) continue;
    const Eigen::Vector2d px = p.pixel.cwiseMin(Eigen::Vector2d(k.width - 1e-9, k.height - 1e-9));
    const Eigen::Vector3d a = geom::project_to_ground_enu(camera, world, px, ground_up);
    const Eigen::Vector2d next(std::min(px.x() + 1.0, static_cast<double>(k.width)), px.y());
    const Eigen::Vector3d b = geom::project_to_ground_enu(camera, world, next, ground_up);
    const double gsd_m = (b - a).norm() / std::max(next.x() - px.x(), 1e-9);
    TargetSighting s;
    s.target_id = t.id;
    s.species = t.species;
    s.camera_id = camera.camera_id;
    s.center = p.pixel;
    s.sigma_px = t.body_radius_m / gsd_m / 2.0;
    s.bbox = Box::around(p.pixel, 2.0 * s.sigma_px, 2.0 * s.sigma_px).clamped(k.width, k.height);
    s.ground = t.ground;
    out.push_back(std::move(s));
  }
  return out;
}

FrameSpec make_frame_spec(const geom::CameraModel& camera, const CameraControl& control,
                          const std::vector<TargetSighting>& sightings, const Scene& scene,
                          const NoiseParams& noise, std::uint64_t noise_key) {
  FrameSpec spec;
  spec.camera = camera;
  spec.control = control;
  spec.noise = noise;
  spec.noise_key = noise_key;
  const double scale = signal_scale(camera, control, noise);
  for (const auto& s : sightings) {
    const auto it = std::find_if(scene.targets.begin(), scene.targets.end(),
                                 [&](const Target& t) { return t.id == s.target_id; });
    if (it == scene.targets.end()) throw ValidationError(fmt::format("sighting of unknown target '{}'", s.target_id));
    FrameSpec::Blob b;
    b.center = s.center;
    b.sigma = std::max(s.sigma_px, 0.5);
    switch (camera.band) {
      case geom::Band::ir: b.delta = {it->thermal_contrast, 0.0, 0.0}; break;
      case geom::Band::rgb:
        for (int c = 0; c < 3; ++c) b.delta[c] = (it->rgb_signature[c] - noise.rgb_background[c]) * scale;
        break;
      case geom::Band::uv: b.delta = {it->uv_signature * scale, 0.0, 0.0}; break;
    }
    spec.blobs.push_back(b);
  }
  return spec;
}

ImageBuffer render_window(const FrameSpec& spec, const PixelWindow& w) {
  const auto& k = spec.camera.intrinsics;
  if (w.x0 < 0 || w.y0 < 0 || w.width <= 0 || w.height <= 0 || w.x0 + w.width > k.width ||
      w.y0 + w.height > k.height) {
    throw SizeError(fmt::format("window ({}, {}, {}, {}) outside {}x{} frame", w.x0, w.y0, w.width, w.height,
                                k.width, k.height));
  }
  if (spec.camera.band == geom::Band::ir) return render_impl<std::uint16_t>(spec, w, 65535.0);
  return render_impl<std::uint8_t>(spec, w, 255.0);
}

ImageBuffer render_full(const FrameSpec& spec) {
  return render_window(spec, {0, 0, spec.camera.intrinsics.width, spec.camera.intrinsics.height});
}

RenderedFrame render_frame(const geom::CameraModel& camera, const geom::InsPose& pose, const geom::LocalFrame& frame,
                           const Scene& scene, const NoiseParams& noise, std::uint64_t seed) {
  RenderedFrame out;
  out.truth = visible_targets(camera, pose, frame, scene);
  const FrameSpec spec = make_frame_spec(camera, default_control(camera.band), out.truth, scene, noise, mix64(seed));
  out.image = render_full(spec);
  return out;
}

}  // namespace aerosurvey::sim
