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

#include "aerosurvey/geom/camera.hpp"

#include <fmt/format.h>

#include <cmath>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::geom {

std::string_view to_string(Band b) {
  switch (b) {
    case Band::rgb: return "rgb";
    case Band::ir: return "ir";
    case Band::uv: return "uv";
  }
  return "?";
}

std::string_view to_string(View v) {
  switch (v) {
    case View::L: return "L";
    case View::C: return "C";
    case View::R: return "R";
  }
  return "?";
}

Band parse_band(std::string_view s) {
  if (s == "rgb") return Band::rgb;
  if (s == "ir") return Band::ir;
  if (s == "uv") return Band::uv;
  throw ValidationError(fmt::format("unknown band '{}'", s));
}

View parse_view(std::string_view s) {
  if (s == "L") return View::L;
  if (s == "C") return View::C;
  if (s == "R") return View::R;
  throw ValidationError(fmt::format("unknown view '{}'", s));
}

CameraIntrinsics CameraIntrinsics::ideal(int width, int height, double focal_px) {
  CameraIntrinsics k;
  k.width = width;
  k.height = height;
  k.fx = k.fy = focal_px;
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  return k;
}

void CameraIntrinsics::validate() const {
  if (width <= 0 || height <= 0) throw ValidationError("image size must be positive");
  if (!(fx > 0.0) || !(fy > 0.0)) throw ValidationError("focal lengths must be positive");
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
    throw ValidationError(fmt::format("principal point ({}, {}) outside image", cx, cy));
  }
  for (double c : {k1, k2, k3, p1, p2}) {
    if (!std::isfinite(c)) throw ValidationError("non-finite distortion coefficient");
  }
}

Eigen::Vector2d CameraIntrinsics::distort(const Eigen::Vector2d& n) const {
  const double x = n.x();
  const double y = n.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3));
  return {x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x),
          y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y};
}

Eigen::Vector2d CameraIntrinsics::undistort(const Eigen::Vector2d& d) const {
  if (!has_distortion()) return d;
  const double scale = std::max(fx, fy);
  Eigen::Vector2d x = d;
  double residual = (distort(x) - d).norm() * scale;
  double damping = 1.0;
  for (int it = 0; it < kUndistortMaxIterations; ++it) {
    if (residual < kUndistortTolerancePx) return x;
    const double r2 = x.squaredNorm();
    const double radial = 1.0 + r2 * (k1 + r2 * (k2 + r2 * k3));
    const Eigen::Vector2d tangential(2.0 * p1 * x.x() * x.y() + p2 * (r2 + 2.0 * x.x() * x.x()),
                                     p1 * (r2 + 2.0 * x.y() * x.y()) + 2.0 * p2 * x.x() * x.y());
    if (std::abs(radial) < 1e-12) break;
    const Eigen::Vector2d target = (d - tangential) / radial;
    Eigen::Vector2d candidate = x + damping * (target - x);
    double cand_residual = (distort(candidate) - d).norm() * scale;
    if (!(cand_residual < residual)) {
      damping = std::max(damping * 0.5, 1.0 / 64.0);
      candidate = x + damping * (target - x);
      cand_residual = (distort(candidate) - d).norm() * scale;
    } else if (damping < 1.0) {
      damping = std::min(1.0, damping * 2.0);
    }
    if (!std::isfinite(cand_residual)) break;
    x = candidate;
    residual = cand_residual;
  }
  if (residual < kUndistortTolerancePx) return x;
  throw NonConvergenceError(fmt::format(
      "undistortion did not converge in {} iterations (residual {:.3g} px)", kUndistortMaxIterations,
      residual));
}

Eigen::Vector2d CameraIntrinsics::to_pixel(const Eigen::Vector2d& normalized) const {
  const Eigen::Vector2d d = distort(normalized);
  return {fx * d.x() + cx, fy * d.y() + cy};
}

Eigen::Vector2d CameraIntrinsics::to_normalized(const Eigen::Vector2d& pixel) const {
  return undistort({(pixel.x() - cx) / fx, (pixel.y() - cy) / fy});
}

RigTransform::RigTransform(const Eigen::Quaterniond& rotation, const Eigen::Vector3d& translation)
    : rotation_(rotation.normalized()), translation_(translation) {}

RigTransform::RigTransform(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation)
    : RigTransform(Eigen::Quaterniond(rotation), translation) {}

RigTransform RigTransform::inverse() const {
  const Eigen::Quaterniond inv = rotation_.conjugate();
  return {inv, -(inv * translation_)};
}

RigTransform RigTransform::operator*(const RigTransform& other) const {
  return {rotation_ * other.rotation_, rotation_ * other.translation_ + translation_};
}

Eigen::Matrix3d mount_rotation(View view, double mount_angle_deg) {
  // Columns are the camera axes expressed in body axes: x_c -> +y_b (right),
  // y_c -> -x_b (image down points aft), z_c -> +z_b (down).
  Eigen::Matrix3d nadir;
  nadir << 0, -1, 0,  //
      1, 0, 0,        //
      0, 0, 1;
  double tilt = 0.0;
  if (view == View::L) tilt = mount_angle_deg;
  if (view == View::R) tilt = -mount_angle_deg;
  return rotation_x(tilt) * nadir;
}

std::string camera_id_for(Band band, View view) {
  return fmt::format("{}_{}", to_string(band), to_string(view));
}

CameraModel CameraModel::make(Band band, View view, const CameraIntrinsics& intrinsics,
                              const RigTransform& rig) {
  CameraModel m;
  m.camera_id = camera_id_for(band, view);
  m.band = band;
  m.view = view;
  m.intrinsics = intrinsics;
  m.rig = rig;
  return m;
}

void CameraModel::validate() const {
  intrinsics.validate();
  if (camera_id != camera_id_for(band, view)) {
    throw ValidationError(fmt::format("camera_id '{}' inconsistent with band {} / view {}", camera_id,
                                      to_string(band), to_string(view)));
  }
  if (std::abs(rig.rotation().norm() - 1.0) > 1e-12) throw ValidationError("rig quaternion not unit");
}

}  // namespace aerosurvey::geom
