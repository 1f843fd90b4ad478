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

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <optional>
#include <string>
#include <string_view>

namespace aerosurvey::geom {

enum class Band { rgb, ir, uv };
enum class View { L, C, R };

std::string_view to_string(Band b);
std::string_view to_string(View v);
/// Throw ValidationError on unknown names.
Band parse_band(std::string_view s);
View parse_view(std::string_view s);

/// Pinhole intrinsics with 5-coefficient Brown-Conrady distortion applied on
/// normalized image coordinates.
struct CameraIntrinsics {
  int width = 0;
  int height = 0;
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  /// Centered principal point, zero distortion.
  static CameraIntrinsics ideal(int width, int height, double focal_px);

  void validate() const;
  bool has_distortion() const { return k1 != 0 || k2 != 0 || k3 != 0 || p1 != 0 || p2 != 0; }
  bool contains(const Eigen::Vector2d& pixel) const {
    return pixel.x() >= 0.0 && pixel.x() <= width && pixel.y() >= 0.0 && pixel.y() <= height;
  }

  Eigen::Vector2d distort(const Eigen::Vector2d& normalized) const;
  /// Inverts `distort` by damped fixed-point iteration (50 iterations,
  /// 1e-10 px forward residual). Throws NonConvergenceError.
  Eigen::Vector2d undistort(const Eigen::Vector2d& distorted) const;

  /// Normalized (undistorted) coordinates -> pixel, applying distortion.
  Eigen::Vector2d to_pixel(const Eigen::Vector2d& normalized) const;
  /// Pixel -> normalized (undistorted) coordinates.
  Eigen::Vector2d to_normalized(const Eigen::Vector2d& pixel) const;

  bool operator==(const CameraIntrinsics&) const = default;
};

inline constexpr int kUndistortMaxIterations = 50;
inline constexpr double kUndistortTolerancePx = 1e-10;

/// Rigid transform from the camera frame (x-right, y-down, z-optical axis)
/// to the INS body frame. `translation` is the camera origin in body axes.
class RigTransform {
 public:
  RigTransform() = default;
  RigTransform(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation);
  RigTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  static RigTransform identity() { return {}; }

  const Eigen::Quaterniond& rotation() const { return rotation_; }
  Eigen::Matrix3d rotation_matrix() const { return rotation_.toRotationMatrix(); }
  const Eigen::Vector3d& translation() const { return translation_; }

  Eigen::Vector3d apply(const Eigen::Vector3d& camera_point) const {
    return rotation_ * camera_point + translation_;
  }

  RigTransform inverse() const;
  /// (this * other)(p) == this(other(p)).
  RigTransform operator*(const RigTransform& other) const;

 private:
  Eigen::Quaterniond rotation_ = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation_ = Eigen::Vector3d::Zero();
};

/// Camera -> body rotation for a downward mount. View L tilts toward the
/// body's left (-y), R toward the right, C is nadir. Image "up" points along
/// the body's forward axis.
Eigen::Matrix3d mount_rotation(View view, double mount_angle_deg);

struct CameraModel {
  std::string camera_id;  ///< "<band>_<view>", e.g. "rgb_C"
  Band band = Band::rgb;
  View view = View::C;
  CameraIntrinsics intrinsics;
  RigTransform rig;

  static CameraModel make(Band band, View view, const CameraIntrinsics& intrinsics,
                          const RigTransform& rig);
  /// Checks intrinsics and that camera_id matches band/view.
  void validate() const;
};

std::string camera_id_for(Band band, View view);

}  // namespace aerosurvey::geom
