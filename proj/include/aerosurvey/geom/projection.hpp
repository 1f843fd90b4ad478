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
#include <string>

#include <Eigen/Core>

#include "aerosurvey/core/time.hpp"
#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/geom/geodesy.hpp"
#include "aerosurvey/geom/pose.hpp"

namespace aerosurvey::geom {

/// A camera placed in the flight's ENU world at one instant.
struct CameraWorldPose {
  Eigen::Matrix3d world_from_camera = Eigen::Matrix3d::Identity();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
};

CameraWorldPose camera_world_pose(const RigTransform& rig, const InsPose& pose, const LocalFrame& frame);

/// Image-plane location of a world point; `in_view` is false when the pixel
/// falls outside [0,width]x[0,height]. Out-of-view is a value, not an error.
struct PixelProjection {
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  bool in_view = false;
};

/// Unit ray in the camera frame through `pixel`. Throws ValidationError for
/// out-of-bounds pixels and NonConvergenceError from undistortion.
Eigen::Vector3d pixel_to_ray(const CameraIntrinsics& intrinsics, const Eigen::Vector2d& pixel);

/// Intersects the pixel's world ray with the plane {up = ground_up}.
/// Throws HorizonError when the ray does not point strictly downward.
Eigen::Vector3d project_to_ground_enu(const CameraModel& model, const CameraWorldPose& world,
                                      const Eigen::Vector2d& pixel, double ground_up);

GeoPoint project_to_ground(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                           double ground_up, const LocalFrame& frame);
GeoPoint project_to_ground(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                           double ground_up, const GeoPoint& origin);

/// Throws BehindCameraError when the point is not strictly in front.
PixelProjection project_enu_point(const CameraModel& model, const CameraWorldPose& world,
                                  const Eigen::Vector3d& point_enu);

PixelProjection ground_to_pixel(const CameraModel& model, const InsPose& pose, const GeoPoint& point,
                                const LocalFrame& frame);
PixelProjection ground_to_pixel(const CameraModel& model, const InsPose& pose, const GeoPoint& point,
                                const GeoPoint& origin);

/// ground_to_pixel(dst, project_to_ground(src, pixel)).
PixelProjection map_pixel_cross_spectral(const CameraModel& src, const CameraModel& dst,
                                         const InsPose& pose, const Eigen::Vector2d& pixel,
                                         double ground_up, const LocalFrame& frame);
PixelProjection map_pixel_cross_spectral(const CameraModel& src, const CameraModel& dst,
                                         const InsPose& pose, const Eigen::Vector2d& pixel,
                                         double ground_up, const GeoPoint& origin);

/// Ground polygon covered by one image. `quad` and `quad_enu` hold the same
/// four projected corners, counterclockwise in ENU.
struct Footprint {
  std::string camera_id;
  Timestamp sample_time;
  std::array<GeoPoint, 4> quad;
  std::array<Eigen::Vector2d, 4> quad_enu;
  double area_m2 = 0.0;
};

/// Shoelace area (signed, positive when counterclockwise).
double signed_area(const std::array<Eigen::Vector2d, 4>& quad);

Footprint image_footprint(const CameraModel& model, const InsPose& pose, double ground_up,
                          const LocalFrame& frame);
Footprint image_footprint(const CameraModel& model, const InsPose& pose, double ground_up,
                          const GeoPoint& origin);

/// Ground distance between the projections of `pixel` and `pixel + (1,0)`,
/// in cm/px.
double gsd_at_pixel(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                    double ground_up, const LocalFrame& frame);
double gsd_at_pixel(const CameraModel& model, const InsPose& pose, const Eigen::Vector2d& pixel,
                    double ground_up, const GeoPoint& origin);

}  // namespace aerosurvey::geom
