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


#include "aerosurvey/calib/calibration.hpp"

#include <fmt/format.h>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

#include "aerosurvey/core/csv.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/projection.hpp"

namespace aerosurvey::calib {
namespace {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;

// Returns false when the parameters put a point behind the camera or past
// the horizon; the solver treats that as an infinite cost.
using ResidualFn = std::function<bool(const VectorXd&, VectorXd&)>;

struct LmResult {
  VectorXd x;
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

LmResult levenberg_marquardt(const ResidualFn& f, VectorXd x, const VectorXd& steps, const SolverOptions& opt) {
  LmResult out;
  VectorXd r;
  if (!f(x, r)) throw NonConvergenceError("initial parameters are infeasible");
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const Eigen::Index n = x.size();
  while (out.iterations < opt.max_iterations) {
    if (cost == 0.0) {
      out.converged = true;
      break;
    }
    ++out.iterations;
    Eigen::MatrixXd jac(r.size(), n);
    VectorXd rp, rm;
    for (Eigen::Index j = 0; j < n; ++j) {
      VectorXd xp = x, xm = x;
      xp[j] += steps[j];
      xm[j] -= steps[j];
      if (f(xp, rp) && f(xm, rm)) {
        jac.col(j) = (rp - rm) / (2.0 * steps[j]);
      } else if (f(xp, rp)) {
        jac.col(j) = (rp - r) / steps[j];
      } else if (f(xm, rm)) {
        jac.col(j) = (r - rm) / steps[j];
      } else {
        jac.col(j).setZero();
      }
    }
    const Eigen::MatrixXd a = jac.transpose() * jac;
    const VectorXd g = jac.transpose() * r;
    bool accepted = false;
    double decrease = 0.0;
    while (lambda < 1e16) {
      Eigen::MatrixXd damped = a;
      for (Eigen::Index j = 0; j < n; ++j) damped(j, j) += lambda * std::max(a(j, j), 1e-12);
      const VectorXd step = damped.ldlt().solve(-g);
      const VectorXd candidate = x + step;
      VectorXd rc;
      if (step.allFinite() && f(candidate, rc)) {
        const double c = rc.squaredNorm();
        if (c < cost) {
          decrease = (cost - c) / cost;
          x = candidate;
          r = rc;
          cost = c;
          lambda = std::max(lambda / 10.0, 1e-12);
          accepted = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    // No damped step lowers the cost: a local minimum to working precision.
    if (!accepted || decrease < opt.relative_tolerance) {
      out.converged = true;
      break;
    }
  }
  out.x = x;
  out.cost = cost;
  return out;
}

Matrix3d exp_so3(const Vector3d& w) {
  const double angle = w.norm();
  if (angle == 0.0) return Matrix3d::Identity();
  return Eigen::AngleAxisd(angle, w / angle).toRotationMatrix();
}

Matrix3d nearest_rotation(const Matrix3d& m) {
  Eigen::JacobiSVD<Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d d = Matrix3d::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

struct Observation {
  std::size_t pose = 0;  // index into the prepared pose list
  Eigen::Vector2d pixel;
  Vector3d world;  // flight-frame ENU
};

struct Prepared {
  std::vector<geom::InsPose> poses;
  std::vector<Matrix3d> world_from_body;
  std::vector<Vector3d> body_center;
  std::vector<Observation> obs;
};

Prepared prepare(std::span<const Correspondence> cs, const PoseTable& poses, const geom::LocalFrame& frame) {
  Prepared p;
  std::map<Timestamp, std::size_t> index;
  for (const auto& c : cs) {
    auto it = index.find(c.sample_time);
    if (it == index.end()) {
      const geom::InsPose& pose = pose_for(poses, c.sample_time);
      it = index.emplace(c.sample_time, p.poses.size()).first;
      p.poses.push_back(pose);
      p.world_from_body.push_back(geom::enu_from_body(pose));
      p.body_center.push_back(frame.to_enu(pose.position));
    }
    p.obs.push_back({it->second, c.pixel, frame.to_enu(c.world)});
  }
  return p;
}

bool reproject(const Prepared& p, const geom::CameraModel& model, VectorXd& r) {
  r.resize(static_cast<Eigen::Index>(2 * p.obs.size()));
  const Matrix3d rot = model.rig.rotation_matrix();
  std::vector<geom::CameraWorldPose> worlds(p.poses.size());
  for (std::size_t i = 0; i < p.poses.size(); ++i) {
    worlds[i].world_from_camera = p.world_from_body[i] * rot;
    worlds[i].center = p.body_center[i] + p.world_from_body[i] * model.rig.translation();
  }
  for (std::size_t k = 0; k < p.obs.size(); ++k) {
    const auto& o = p.obs[k];
    const Vector3d pc = worlds[o.pose].world_from_camera.transpose() * (o.world - worlds[o.pose].center);
    if (!(pc.z() > 0.0)) return false;
    const Eigen::Vector2d px = model.intrinsics.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
    r[static_cast<Eigen::Index>(2 * k)] = px.x() - o.pixel.x();
    r[static_cast<Eigen::Index>(2 * k + 1)] = px.y() - o.pixel.y();
  }
  return true;
}

Vector3d camera_bearing(const geom::CameraIntrinsics& k, const Eigen::Vector2d& pixel) {
  const Eigen::Vector2d n = k.to_normalized(pixel);
  return Vector3d(n.x(), n.y(), 1.0).normalized();
}

// Rotation aligning camera bearings with body-frame directions to the points
// (the lever arm is negligible against range), then the lever arm that best
// places every point on its ray.
std::optional<geom::RigTransform> bearing_seed(const Prepared& p, const geom::CameraIntrinsics& k) {
  Matrix3d m = Matrix3d::Zero();
  std::vector<Vector3d> bearings, targets;
  for (const auto& o : p.obs) {
    const Vector3d b = camera_bearing(k, o.pixel);
    const Vector3d v = p.world_from_body[o.pose].transpose() * (o.world - p.body_center[o.pose]);
    if (!(v.norm() > 0.0)) continue;
    m += v.normalized() * b.transpose();
    bearings.push_back(b);
    targets.push_back(v);
  }
  if (bearings.size() < 3) return std::nullopt;
  const Matrix3d rot = nearest_rotation(m);
  Matrix3d a = Matrix3d::Zero();
  Vector3d rhs = Vector3d::Zero();
  for (std::size_t i = 0; i < bearings.size(); ++i) {
    const Vector3d d = rot * bearings[i];
    const Matrix3d proj = Matrix3d::Identity() - d * d.transpose();
    a += proj;
    rhs += proj * targets[i];
  }
  // Rays that are nearly parallel leave the lever arm poorly conditioned, so
  // shrink it toward zero.
  a += 1e-6 * a.trace() * Matrix3d::Identity();
  Vector3d t = a.ldlt().solve(rhs);
  if (!t.allFinite()) t.setZero();
  return geom::RigTransform(rot, t);
}

// Normalized-coordinate DLT for one pose; returns world_from_camera and the
// camera center, or nothing when the points are coplanar or the solve is
// ill-posed.
std::optional<std::pair<Matrix3d, Vector3d>> dlt_pose(const std::vector<Eigen::Vector2d>& image,
                                                      const std::vector<Vector3d>& world) {
  const std::size_t n = world.size();
  if (n < 6) return std::nullopt;
  Vector3d centroid = Vector3d::Zero();
  for (const auto& w : world) centroid += w;
  centroid /= static_cast<double>(n);
  Eigen::MatrixXd centered(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < n; ++i) centered.row(static_cast<Eigen::Index>(i)) = (world[i] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> spread(centered);
  const auto sv = spread.singularValues();
  if (!(sv[2] > 1e-6 * sv[0])) return std::nullopt;
  const double scale = std::sqrt(3.0) / (sv.norm() / std::sqrt(static_cast<double>(n)));

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * n), 12);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector3d x = (world[i] - centroid) * scale;
    const Eigen::Vector4d xh(x.x(), x.y(), x.z(), 1.0);
    const auto r0 = static_cast<Eigen::Index>(2 * i);
    a.block<1, 4>(r0, 0) = xh.transpose();
    a.block<1, 4>(r0, 8) = -image[i].x() * xh.transpose();
    a.block<1, 4>(r0 + 1, 4) = xh.transpose();
    a.block<1, 4>(r0 + 1, 8) = -image[i].y() * xh.transpose();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd h = svd.matrixV().col(11);
  Eigen::Matrix<double, 3, 4> pm;
  pm << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8], h[9], h[10], h[11];
  // Undo the world normalization: P * [scale*I, -scale*c; 0, 1].
  Eigen::Matrix<double, 3, 4> pw;
  pw.leftCols<3>() = pm.leftCols<3>() * scale;
  pw.col(3) = pm.col(3) - pm.leftCols<3>() * scale * centroid;
  int in_front = 0;
  for (const auto& w : world) in_front += (pw.row(2).head<3>().dot(w) + pw(2, 3)) > 0.0 ? 1 : -1;
  if (in_front < 0) pw = -pw;
  const Matrix3d mm = pw.leftCols<3>();
  if (!(mm.determinant() > 0.0)) return std::nullopt;
  const Matrix3d camera_from_world = nearest_rotation(mm);
  const Vector3d center = -mm.inverse() * pw.col(3);
  if (!center.allFinite()) return std::nullopt;
  return std::make_pair(Matrix3d(camera_from_world.transpose()), center);
}

std::optional<geom::RigTransform> dlt_seed(const Prepared& p, const geom::CameraIntrinsics& k) {
  std::vector<std::vector<Eigen::Vector2d>> image(p.poses.size());
  std::vector<std::vector<Vector3d>> world(p.poses.size());
  for (const auto& o : p.obs) {
    image[o.pose].push_back(k.to_normalized(o.pixel));
    world[o.pose].push_back(o.world);
  }
  Eigen::Matrix4d qsum = Eigen::Matrix4d::Zero();
  Vector3d tsum = Vector3d::Zero();
  int used = 0;
  for (std::size_t i = 0; i < p.poses.size(); ++i) {
    const auto est = dlt_pose(image[i], world[i]);
    if (!est) continue;
    const Matrix3d body_from_world = p.world_from_body[i].transpose();
    const Eigen::Quaterniond q(body_from_world * est->first);
    const Eigen::Vector4d qv(q.w(), q.x(), q.y(), q.z());
    qsum += qv * qv.transpose();
    tsum += body_from_world * (est->second - p.body_center[i]);
    ++used;
  }
  if (used == 0) return std::nullopt;
  // Quaternion mean: principal eigenvector of the summed outer products.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(qsum);
  const Eigen::Vector4d q = eig.eigenvectors().col(3);
  return geom::RigTransform(Eigen::Quaterniond(q[0], q[1], q[2], q[3]), tsum / used);
}

geom::CameraModel model_with(const std::string& id, const geom::CameraIntrinsics& k, const geom::RigTransform& rig) {
  geom::CameraModel m;
  m.camera_id = id;
  m.intrinsics = k;
  m.rig = rig;
  return m;
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

Timestamp parse_time_field(const std::string& s) {
  return s.find('T') != std::string::npos ? Timestamp::parse_iso8601(s) : Timestamp::parse_seconds(s);
}

}  // namespace

PoseTable make_pose_table(std::span<const geom::InsPose> poses) {
  PoseTable t;
  for (const auto& p : poses) t[p.time] = p;
  return t;
}

const geom::InsPose& pose_for(const PoseTable& poses, Timestamp t) {
  const auto it = poses.find(t);
  if (it == poses.end()) throw MissingPoseError(fmt::format("no INS pose at {}", t.iso8601()));
  return it->second;
}

CalibrationReport reprojection_report(const geom::CameraModel& model, std::span<const Correspondence> correspondences,
                                      const PoseTable& poses, const geom::GeoPoint& origin) {
  if (correspondences.empty()) throw InsufficientDataError("reprojection report needs at least one correspondence");
  const geom::LocalFrame frame(origin);
  const Prepared p = prepare(correspondences, poses, frame);
  CalibrationReport rep;
  rep.camera_id = model.camera_id;
  rep.correspondences = correspondences.size();
  rep.poses = p.poses.size();
  std::vector<double> errors;
  errors.reserve(correspondences.size());
  double sum = 0.0;
  for (const auto& c : correspondences) {
    const geom::PixelProjection proj = geom::ground_to_pixel(model, pose_for(poses, c.sample_time), c.world, frame);
    const double e = (proj.pixel - c.pixel).norm();
    errors.push_back(e);
    sum += e * e;
  }
  rep.rms_reprojection_px = std::sqrt(sum / static_cast<double>(errors.size()));
  rep.p50_px = quantile(errors, 0.5);
  rep.p90_px = quantile(errors, 0.9);
  rep.max_px = *std::max_element(errors.begin(), errors.end());
  return rep;
}

RigEstimate estimate_rig_transform(std::span<const Correspondence> correspondences, const PoseTable& poses,
                                   const geom::CameraIntrinsics& intrinsics, const geom::GeoPoint& origin,
                                   const SolverOptions& options, const std::string& camera_id) {
  intrinsics.validate();
  if (correspondences.size() < 6) {
    throw DegenerateConfigurationError(
        fmt::format("{} correspondences; rig estimation needs at least 6", correspondences.size()));
  }
  for (const auto& c : correspondences) {
    if (!intrinsics.contains(c.pixel)) {
      throw ValidationError(fmt::format("correspondence pixel ({}, {}) outside {}x{} image", c.pixel.x(), c.pixel.y(),
                                        intrinsics.width, intrinsics.height));
    }
  }
  const geom::LocalFrame frame(origin);
  const Prepared prep = prepare(correspondences, poses, frame);
  if (prep.poses.size() < 2) {
    throw DegenerateConfigurationError("correspondences span a single pose; rig estimation needs at least 2");
  }
  {
    Vector3d centroid = Vector3d::Zero();
    for (const auto& o : prep.obs) centroid += o.world;
    centroid /= static_cast<double>(prep.obs.size());
    Matrix3d scatter = Matrix3d::Zero();
    for (const auto& o : prep.obs) scatter += (o.world - centroid) * (o.world - centroid).transpose();
    Eigen::SelfAdjointEigenSolver<Matrix3d> eig(scatter);
    const auto ev = eig.eigenvalues();
    if (!(ev[1] > 1e-12 * std::max(ev[2], 1e-300))) {
      throw DegenerateConfigurationError("correspondence world points are collinear");
    }
  }

  const std::string id = camera_id.empty() ? correspondences.front().camera_id : camera_id;
  VectorXd scratch;
  std::optional<geom::RigTransform> seed;
  double seed_cost = std::numeric_limits<double>::infinity();
  for (const auto& candidate : {bearing_seed(prep, intrinsics), dlt_seed(prep, intrinsics)}) {
    if (!candidate) continue;
    if (!reproject(prep, model_with(id, intrinsics, *candidate), scratch)) continue;
    const double c = scratch.squaredNorm();
    if (c < seed_cost) {
      seed_cost = c;
      seed = candidate;
    }
  }
  if (!seed) throw DegenerateConfigurationError("no initial rig places every point in front of the camera");

  const Matrix3d r0 = seed->rotation_matrix();
  const int n = options.refine_focal ? 7 : 6;
  const auto unpack = [&](const VectorXd& x) {
    geom::CameraIntrinsics k = intrinsics;
    if (options.refine_focal) {
      k.fx *= 1.0 + x[6];
      k.fy *= 1.0 + x[6];
    }
    return model_with(id, k, geom::RigTransform(Matrix3d(exp_so3(x.head<3>()) * r0), Vector3d(x.segment<3>(3))));
  };
  const ResidualFn f = [&](const VectorXd& x, VectorXd& r) { return reproject(prep, unpack(x), r); };
  VectorXd x0 = VectorXd::Zero(n);
  x0.segment<3>(3) = seed->translation();
  VectorXd steps(n);
  steps << 1e-7, 1e-7, 1e-7, 1e-6, 1e-6, 1e-6;
  if (options.refine_focal) steps[6] = 1e-8;
  const LmResult lm = levenberg_marquardt(f, x0, steps, options);

  const geom::CameraModel solved = unpack(lm.x);
  RigEstimate est;
  est.rig = solved.rig;
  est.intrinsics = solved.intrinsics;
  est.report = reprojection_report(solved, correspondences, poses, origin);
  est.report.iterations = lm.iterations;
  est.report.converged = lm.converged;
  est.report.focal_scale = options.refine_focal ? 1.0 + lm.x[6] : 1.0;
  return est;
}

double alignment_residual_px(const geom::CameraModel& src, const geom::CameraModel& dst,
                             std::span<const AlignmentPair> pairs, const PoseTable& poses, double ground_up,
                             const geom::GeoPoint& origin) {
  if (pairs.empty()) return 0.0;
  const geom::LocalFrame frame(origin);
  double sum = 0.0;
  for (const auto& p : pairs) {
    const auto m = geom::map_pixel_cross_spectral(src, dst, pose_for(poses, p.sample_time), p.pixel_a, ground_up, frame);
    sum += (m.pixel - p.pixel_b).norm();
  }
  return sum / static_cast<double>(pairs.size());
}

geom::RigTransform refine_manual_alignment(const geom::CameraModel& base_src, const geom::CameraModel& base_dst,
                                           std::span<const AlignmentPair> pairs, const PoseTable& poses,
                                           double ground_up, const geom::GeoPoint& origin) {
  if (pairs.size() < 3) {
    throw InsufficientDataError(fmt::format("manual alignment needs at least 3 pairs, got {}", pairs.size()));
  }
  for (const auto& p : pairs) {
    pose_for(poses, p.sample_time);
    if (!base_src.intrinsics.contains(p.pixel_a) || !base_dst.intrinsics.contains(p.pixel_b)) {
      throw ValidationError("alignment pair pixel outside its image");
    }
  }
  const geom::LocalFrame frame(origin);
  const Matrix3d r0 = base_src.rig.rotation_matrix();
  const auto corrected = [&](const VectorXd& w) {
    geom::CameraModel m = base_src;
    m.rig = geom::RigTransform(Matrix3d(exp_so3(w) * r0), base_src.rig.translation());
    return m;
  };
  const ResidualFn f = [&](const VectorXd& w, VectorXd& r) {
    const geom::CameraModel src = corrected(w);
    r.resize(static_cast<Eigen::Index>(2 * pairs.size()));
    try {
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto m = geom::map_pixel_cross_spectral(src, base_dst, pose_for(poses, pairs[i].sample_time),
                                                      pairs[i].pixel_a, ground_up, frame);
        r[static_cast<Eigen::Index>(2 * i)] = m.pixel.x() - pairs[i].pixel_b.x();
        r[static_cast<Eigen::Index>(2 * i + 1)] = m.pixel.y() - pairs[i].pixel_b.y();
      }
    } catch (const HorizonError&) {
      return false;
    } catch (const BehindCameraError&) {
      return false;
    }
    return true;
  };
  const VectorXd steps = VectorXd::Constant(3, 1e-8);
  const LmResult lm = levenberg_marquardt(f, VectorXd::Zero(3), steps, SolverOptions{});
  const geom::CameraModel refined = corrected(lm.x);
  const double before = alignment_residual_px(base_src, base_dst, pairs, poses, ground_up, origin);
  const double after = alignment_residual_px(refined, base_dst, pairs, poses, ground_up, origin);
  return after <= before ? refined.rig : base_src.rig;
}

std::vector<Correspondence> read_correspondences(const std::filesystem::path& path) {
  const csv::Table t = csv::Table::read_file(path);
  t.require({"camera_id", "time", "u", "v", "lat", "lon", "alt"});
  std::vector<Correspondence> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    Correspondence c;
    c.camera_id = t.text(i, "camera_id");
    c.sample_time = parse_time_field(t.text(i, "time"));
    c.pixel = {t.number(i, "u"), t.number(i, "v")};
    c.world = {t.number(i, "lat"), t.number(i, "lon"), t.number(i, "alt")};
    geom::validate(c.world);
    out.push_back(std::move(c));
  }
  return out;
}

void write_correspondences(std::span<const Correspondence> rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << "camera_id,time,u,v,lat,lon,alt\n";
  for (const auto& c : rows) {
    out << c.camera_id << ',' << c.sample_time.seconds_string() << ',' << csv::format_double(c.pixel.x()) << ','
        << csv::format_double(c.pixel.y()) << ',' << csv::format_double(c.world.lat) << ','
        << csv::format_double(c.world.lon) << ',' << csv::format_double(c.world.alt) << '\n';
  }
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<geom::InsPose> read_poses(const std::filesystem::path& path) {
  const csv::Table t = csv::Table::read_file(path);
  t.require({"time", "lat", "lon", "alt", "roll", "pitch", "yaw"});
  std::vector<geom::InsPose> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    geom::InsPose p;
    p.time = parse_time_field(t.text(i, "time"));
    p.position = {t.number(i, "lat"), t.number(i, "lon"), t.number(i, "alt")};
    geom::validate(p.position);
    p.orientation = {t.number(i, "roll"), t.number(i, "pitch"), t.number(i, "yaw")};
    out.push_back(p);
  }
  return out;
}

void write_poses(std::span<const geom::InsPose> poses, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << "time,lat,lon,alt,roll,pitch,yaw\n";
  for (const auto& p : poses) {
    out << p.time.seconds_string() << ',' << csv::format_double(p.position.lat) << ','
        << csv::format_double(p.position.lon) << ',' << csv::format_double(p.position.alt) << ','
        << csv::format_double(p.orientation.roll) << ',' << csv::format_double(p.orientation.pitch) << ','
        << csv::format_double(p.orientation.yaw) << '\n';
  }
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::string format_report(std::span<const CalibrationReport> reports) {
  std::string s = fmt::format("{:<8} {:>6} {:>6} {:>10} {:>10} {:>10} {:>10} {:>6} {:>10} {:>10}\n", "camera",
                              "points", "poses", "rms_px", "p50_px", "p90_px", "max_px", "iters", "converged",
                              "focal_x");
  for (const auto& r : reports) {
    s += fmt::format("{:<8} {:>6} {:>6} {:>10.4f} {:>10.4f} {:>10.4f} {:>10.4f} {:>6} {:>10} {:>10.6f}\n",
                     r.camera_id, r.correspondences, r.poses, r.rms_reprojection_px, r.p50_px, r.p90_px, r.max_px,
                     r.iterations, r.converged ? "yes" : "no", r.focal_scale);
  }
  return s;
}

}  // namespace aerosurvey::calib
