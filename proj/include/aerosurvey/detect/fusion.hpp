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


// Late fusion: thermal hot spots select full-resolution color chips that a
// second-stage detector classifies.

#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "aerosurvey/core/image.hpp"
#include "aerosurvey/detect/detection.hpp"
#include "aerosurvey/detect/hotspot.hpp"
#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::detect {

/// Chip of the requested size centered on `center`, shifted to lie inside
/// the frame. Throws SizeError when the chip exceeds the frame.
PixelWindow crop_chip(int frame_width, int frame_height, const Eigen::Vector2d& center, int chip_width,
                      int chip_height);

inline Box chip_to_global(const Box& b, const PixelWindow& w) { return b.offset(w.x0, w.y0); }
inline Box global_to_chip(const Box& b, const PixelWindow& w) { return b.offset(-w.x0, -w.y0); }

struct ChipContext {
  std::string camera_id;
  PixelWindow window;
  /// Where the hot spot maps to, in chip pixels.
  Eigen::Vector2d expected_center = Eigen::Vector2d::Zero();
  /// Hot-spot box size scaled into this camera's pixels.
  Eigen::Vector2d expected_size = Eigen::Vector2d::Zero();
  double hotspot_score = 0.0;
};

struct ChipDetection {
  Box bbox;  ///< chip-local pixels
  double score = 0.0;
  Label label = Label::hot_spot;
};

class SecondStageDetector {
 public:
  virtual ~SecondStageDetector() = default;
  virtual std::string name() const = 0;
  virtual std::vector<ChipDetection> detect(const ImageBuffer& chip, const ChipContext& context) const = 0;
};

/// Returns one box of the expected size at the expected center with the
/// hot-spot score. Used to test the fusion plumbing.
class EchoDetector : public SecondStageDetector {
 public:
  explicit EchoDetector(Label label = Label::hot_spot) : label_(label) {}
  std::string name() const override { return "echo"; }
  std::vector<ChipDetection> detect(const ImageBuffer& chip, const ChipContext& context) const override;

 private:
  Label label_;
};

struct ColorTemplate {
  Label label = Label::hot_spot;
  /// Expected color minus background at the blob core, per channel.
  std::array<double, 3> delta{};
};

/// Segments the blob nearest the chip center against the chip-border
/// background, then fits each template's color offset to the blob core.
/// Score is 1 - relative residual of the best fit; fits below `min_score`
/// or with implausible amplitude are rejected.
class TemplateClassifier : public SecondStageDetector {
 public:
  explicit TemplateClassifier(std::vector<ColorTemplate> templates, double min_score = 0.9,
                              double threshold_sigmas = 6.0, double search_radius_px = 48.0);
  std::string name() const override { return "template"; }
  std::vector<ChipDetection> detect(const ImageBuffer& chip, const ChipContext& context) const override;

 private:
  std::vector<ColorTemplate> templates_;
  double min_score_;
  double threshold_sigmas_;
  double search_radius_px_;
};

struct FusionParams {
  int chip_width = 512;
  int chip_height = 512;
  double nms_iou = 0.5;
  /// Hot spots scoring below this are not passed to the second stage.
  double min_hotspot_score = 0.0;
};

struct FusionResult {
  std::vector<Detection> detections;
  /// Cameras whose image a detector ran on (IR frames, and RGB frames chipped).
  std::vector<std::string> processed_cameras;
};

using CameraSet = std::map<std::string, geom::CameraModel>;

/// Hot spots on every IR frame of the sample. With no second stage the
/// geolocated hot spots are the result. Otherwise each hot spot center is
/// mapped into the same-view RGB camera (then any other RGB camera), a chip
/// is cropped and classified, and chip boxes come back as full-image RGB
/// detections. Hot spots that land in no RGB frame stay as hot_spot
/// detections. Throws ConfigurationError naming a camera without a model.
FusionResult late_fusion(const sync::Sample& sample, const CameraSet& models, const DetectorParams& ir_params,
                         const SecondStageDetector* second_stage, const FusionParams& params, double ground_up,
                         const geom::LocalFrame& frame);

}  // namespace aerosurvey::detect
