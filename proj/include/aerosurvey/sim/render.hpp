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

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "aerosurvey/core/box.hpp"
#include "aerosurvey/core/payload.hpp"
#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/geom/projection.hpp"
#include "aerosurvey/sim/rig.hpp"
#include "aerosurvey/sim/scene.hpp"

namespace aerosurvey::sim {

struct NoiseParams {
  double ir_baseline = 1000.0;
  double ir_sigma = 2.0;
  std::array<double, 3> rgb_background{200.0, 205.0, 215.0};
  double rgb_sigma = 3.0;
  double uv_baseline = 120.0;
  double uv_sigma = 3.0;
  /// RGB and UV signal scales with exposure * 10^(gain/20) relative to this
  /// camera's default control.
  bool exposure_scaling = true;

  bool operator==(const NoiseParams&) const = default;
};

/// A target as it appears in one frame.
struct TargetSighting {
  std::string target_id;
  Species species = Species::ringed_seal;
  std::string camera_id;
  Eigen::Vector2d center = Eigen::Vector2d::Zero();  ///< ground_to_pixel of the target
  double sigma_px = 0.0;
  Box bbox;  ///< center +- 2 sigma, clamped to the image
  geom::GeoPoint ground;
};

/// Everything needed to render one frame; rendering is a pure function of it.
struct FrameSpec {
  geom::CameraModel camera;
  CameraControl control;
  NoiseParams noise;
  std::uint64_t noise_key = 0;
  struct Blob {
    Eigen::Vector2d center;
    double sigma = 1.0;
    std::array<double, 3> delta{};  ///< per-channel peak offset from background
  };
  std::vector<Blob> blobs;
};

/// Targets whose ground point projects inside the frame.
std::vector<TargetSighting> visible_targets(const geom::CameraModel& camera, const geom::InsPose& pose,
                                            const geom::LocalFrame& frame, const Scene& scene,
                                            double ground_up = 0.0);

FrameSpec make_frame_spec(const geom::CameraModel& camera, const CameraControl& control,
                          const std::vector<TargetSighting>& sightings, const Scene& scene,
                          const NoiseParams& noise, std::uint64_t noise_key);

/// Renders `window` of the frame. Any window equals the same crop of the
/// full frame.
ImageBuffer render_window(const FrameSpec& spec, const PixelWindow& window);
ImageBuffer render_full(const FrameSpec& spec);

/// Lazily rendered frame.
class SimPayload final : public FramePayload {
 public:
  explicit SimPayload(std::shared_ptr<const FrameSpec> spec) : spec_(std::move(spec)) {}

  int width() const override { return spec_->camera.intrinsics.width; }
  int height() const override { return spec_->camera.intrinsics.height; }
  ImageBuffer render() const override { return render_full(*spec_); }
  ImageBuffer render_window(const PixelWindow& window) const override {
    return sim::render_window(*spec_, window);
  }
  const FrameSpec& spec() const { return *spec_; }

 private:
  std::shared_ptr<const FrameSpec> spec_;
};

struct RenderedFrame {
  ImageBuffer image;
  std::vector<TargetSighting> truth;
};

/// One-shot rendering with the camera's default control.
RenderedFrame render_frame(const geom::CameraModel& camera, const geom::InsPose& pose, const geom::LocalFrame& frame,
                           const Scene& scene, const NoiseParams& noise, std::uint64_t seed);

}  // namespace aerosurvey::sim
