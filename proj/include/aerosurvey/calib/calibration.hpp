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


// Rig (camera-to-INS) calibration from 2D-3D correspondences, and the
// rotation-only manual alignment between bands.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::calib {

struct Correspondence {
  std::string camera_id;
  Timestamp sample_time;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  geom::GeoPoint world;
};

struct CalibrationReport {
  std::string camera_id;
  std::size_t correspondences = 0;
  std::size_t poses = 0;
  double rms_reprojection_px = 0.0;
  double p50_px = 0.0;
  double p90_px = 0.0;
  double max_px = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Focal length multiplier applied when focal refinement is enabled.
  double focal_scale = 1.0;
};

struct AlignmentPair {
  Eigen::Vector2d pixel_a = Eigen::Vector2d::Zero();  ///< source band image
  Eigen::Vector2d pixel_b = Eigen::Vector2d::Zero();  ///< target band image
  Timestamp sample_time;
};

/// Poses keyed by exact sample time.
using PoseTable = std::map<Timestamp, geom::InsPose>;
PoseTable make_pose_table(std::span<const geom::InsPose> poses);
/// Throws MissingPoseError naming the timestamp.
const geom::InsPose& pose_for(const PoseTable& poses, Timestamp t);

struct SolverOptions {
  int max_iterations = 100;
  double relative_tolerance = 1e-10;
  bool refine_focal = false;
};

struct RigEstimate {
  geom::RigTransform rig;
  /// Intrinsics with the refined focal length (unchanged unless refine_focal).
  geom::CameraIntrinsics intrinsics;
  CalibrationReport report;
};

/// Levenberg-Marquardt over rotation (axis-angle) and translation, seeded by
/// the better of a per-pose DLT/absolute-orientation average and a bearing
/// alignment over all correspondences. Throws DegenerateConfigurationError
/// for fewer than 6 correspondences, fewer than 2 poses or collinear points;
/// a non-converged solve is reported, not thrown.
RigEstimate estimate_rig_transform(std::span<const Correspondence> correspondences, const PoseTable& poses,
                                   const geom::CameraIntrinsics& intrinsics, const geom::GeoPoint& origin,
                                   const SolverOptions& options = {}, const std::string& camera_id = "");

/// Rotation-only correction of `base_src` so that src pixels map onto the
/// paired dst pixels through the ground plane. Never returns a rig with a
/// larger mean residual than the base. Throws InsufficientDataError below 3 pairs.
geom::RigTransform refine_manual_alignment(const geom::CameraModel& base_src, const geom::CameraModel& base_dst,
                                           std::span<const AlignmentPair> pairs, const PoseTable& poses,
                                           double ground_up, const geom::GeoPoint& origin);

/// Mean pixel distance between mapped src pixels and their dst partners.
double alignment_residual_px(const geom::CameraModel& src, const geom::CameraModel& dst,
                             std::span<const AlignmentPair> pairs, const PoseTable& poses, double ground_up,
                             const geom::GeoPoint& origin);

/// Throws InsufficientDataError when empty and MissingPoseError for an
/// unknown sample time.
CalibrationReport reprojection_report(const geom::CameraModel& model, std::span<const Correspondence> correspondences,
                                      const PoseTable& poses, const geom::GeoPoint& origin);

// CSV: camera_id,time,u,v,lat,lon,alt (time in seconds or ISO-8601).
std::vector<Correspondence> read_correspondences(const std::filesystem::path& path);
void write_correspondences(std::span<const Correspondence> rows, const std::filesystem::path& path);
// CSV: time,lat,lon,alt,roll,pitch,yaw.
std::vector<geom::InsPose> read_poses(const std::filesystem::path& path);
void write_poses(std::span<const geom::InsPose> poses, const std::filesystem::path& path);

std::string format_report(std::span<const CalibrationReport> reports);

}  // namespace aerosurvey::calib
