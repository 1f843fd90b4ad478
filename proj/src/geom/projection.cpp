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

#include "aerosurvey/geom/projection.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::geom {
namespace {
// Rays whose downward component is below this are treated as horizontal.
constexpr double kHorizonEpsilon = 1e-12;
}  // namespace

CameraWorldPose camera_world_pose(const RigTransform& rig, const InsPose& pose, const LocalFrame& frame) {
  const Eigen::Matrix3d world_from_body = enu_from_body(pose);
  CameraWorldPose w;
  w.world_from_camera = world_from_body * rig.rotation_matrix();
  w.center = frame.to_enu(pose.position) + world_from_body * rig.translation();
  return w;
}

Eigen::Vector3d pixel_to_ray(const CameraIntrinsics& intrinsics, const Eigen::Vector2d& pixel) {
  if (!intrinsics.contains(pixel)) {
    throw ValidationError(fmt::format("pixel ({}, {}) outside {}x{} image", pixel.x(), pixel.y(),
                                      intrinsics.width, intrinsics.height));
  }
  const Eigen::Vector2d n = intrinsics.to_normalized(pixel);
  return Eigen::Vector3d(n.x(), n.y(), 1.0).normalized();
}

Eigen::Vector3d project_to_ground_enu(const CameraModel& model, const CameraWorldPose& world,
                                      const Eigen::Vector2d& pixel, double ground_up) {
  const Eigen::Vector3d ray = world.world_from_camera * pixel_to_ray(model.intrinsics, pixel);
  if (!(ray.z() < -kHorizonEpsilon)) {
    throw HorizonError(fmt::format("{}: ray through ({:.2f}, {:.2f}) does not intersect the ground plane",
                                   model.camera_id, pixel.x(), pixel.y()));
  }
  const double height = world.center.z() - ground_up;
  if (!(height > 0.0)) {
    throw HorizonError(fmt::format("{}: camera is not above the ground plane", model.camera_id));
  }
  const double s = height / -ray.z();
  Eigen::Vector3d p = world.center + s * ray;
  p.z() = ground_up;
  return p;
}

GeoPoint project_to_ground(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                           double ground_up, const LocalFrame& frame) {
  const CameraWorldPose world = camera_world_pose(model.rig, pose, frame);
  return frame.to_geo(project_to_ground_enu(model, world, pixel, ground_up));
}

GeoPoint project_to_ground(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                           double ground_up, const GeoPoint& origin) {
  return project_to_ground(model, pose, pixel, ground_up, LocalFrame(origin));
}

PixelProjection project_enu_point(const CameraModel& model, const CameraWorldPose& world,
                                  const Eigen::Vector3d& point_enu) {
  const Eigen::Vector3d pc = world.world_from_camera.transpose() * (point_enu - world.center);
  if (!(pc.z() > 0.0)) {
    throw BehindCameraError(fmt::format("{}: point is behind the camera", model.camera_id));
  }
  PixelProjection out;
  out.pixel = model.intrinsics.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
  out.in_view = model.intrinsics.contains(out.pixel);
  return out;
}

PixelProjection ground_to_pixel(const CameraModel& model, const InsPose& pose, const GeoPoint& point,
                                const LocalFrame& frame) {
  return project_enu_point(model, camera_world_pose(model.rig, pose, frame), frame.to_enu(point));
}

PixelProjection ground_to_pixel(const CameraModel& model, const InsPose& pose, const GeoPoint& point,
                                const GeoPoint& origin) {
  return ground_to_pixel(model, pose, point, LocalFrame(origin));
}

PixelProjection map_pixel_cross_spectral(const CameraModel& src, const CameraModel& dst,
                                         const InsPose& pose, const Eigen::Vector2d& pixel,
                                         double ground_up, const LocalFrame& frame) {
  // Both legs stay in ENU; a geodetic detour would add ~1e-9 m of rounding.
  const Eigen::Vector3d ground =
      project_to_ground_enu(src, camera_world_pose(src.rig, pose, frame), pixel, ground_up);
  return project_enu_point(dst, camera_world_pose(dst.rig, pose, frame), ground);
}

PixelProjection map_pixel_cross_spectral(const CameraModel& src, const CameraModel& dst,
                                         const InsPose& pose, const Eigen::Vector2d& pixel,
                                         double ground_up, const GeoPoint& origin) {
  return map_pixel_cross_spectral(src, dst, pose, pixel, ground_up, LocalFrame(origin));
}

double signed_area(const std::array<Eigen::Vector2d, 4>& q) {
  double a = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& p = q[i];
    const auto& n = q[(i + 1) % q.size()];
    a += p.x() * n.y() - n.x() * p.y();
  }
  return 0.5 * a;
}

Footprint image_footprint(const CameraModel& model, const InsPose& pose, double ground_up,
                          const LocalFrame& frame) {
  const CameraWorldPose world = camera_world_pose(model.rig, pose, frame);
  const double w = model.intrinsics.width;
  const double h = model.intrinsics.height;
  const std::array<Eigen::Vector2d, 4> corners = {Eigen::Vector2d(0, 0), Eigen::Vector2d(w, 0),
                                                  Eigen::Vector2d(w, h), Eigen::Vector2d(0, h)};
  Footprint fp;
  fp.camera_id = model.camera_id;
  fp.sample_time = pose.time;
  std::array<Eigen::Vector3d, 4> ground;
  for (std::size_t i = 0; i < 4; ++i) {
    ground[i] = project_to_ground_enu(model, world, corners[i], ground_up);
    fp.quad_enu[i] = ground[i].head<2>();
  }
  double area = signed_area(fp.quad_enu);
  if (area < 0.0) {
    std::reverse(fp.quad_enu.begin(), fp.quad_enu.end());
    std::reverse(ground.begin(), ground.end());
    area = -area;
  }
  for (std::size_t i = 0; i < 4; ++i) fp.quad[i] = frame.to_geo(ground[i]);
  fp.area_m2 = area;
  return fp;
}

Footprint image_footprint(const CameraModel& model, const InsPose& pose, double ground_up,
                          const GeoPoint& origin) {
  return image_footprint(model, pose, ground_up, LocalFrame(origin));
}

double gsd_at_pixel(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                    double ground_up, const LocalFrame& frame) {
  const CameraWorldPose world = camera_world_pose(model.rig, pose, frame);
  const Eigen::Vector2d next = pixel + Eigen::Vector2d(1.0, 0.0);
  const Eigen::Vector3d a = project_to_ground_enu(model, world, pixel, ground_up);
  const Eigen::Vector3d b = project_to_ground_enu(model, world, next, ground_up);
  return (b - a).norm() * 100.0;
}

double gsd_at_pixel(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                    double ground_up, const GeoPoint& origin) {
  return gsd_at_pixel(model, pose, pixel, ground_up, LocalFrame(origin));
}

}  // namespace aerosurvey::geom
