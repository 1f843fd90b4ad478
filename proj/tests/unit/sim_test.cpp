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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"
#include "aerosurvey/sim/config.hpp"
#include "aerosurvey/sim/simulator.hpp"
#include "aerosurvey/sync/assembler.hpp"
#include "support/fixtures.hpp"

namespace aerosurvey::sim {
namespace {

using geom::Band;
using geom::View;

FlightPlan straight(double duration) {
  FlightPlan p;
  p.duration_s = duration;
  p.heading_deg = 30.0;
  return p;
}

TEST(Trajectory, StraightTransectIsALine) {
  const Trajectory traj(straight(300));
  const auto poses = sample_trajectory(traj);
  EXPECT_GE(poses.size(), 15000u);
  const Eigen::Vector2d dir(std::sin(30.0 * std::numbers::pi / 180), std::cos(30.0 * std::numbers::pi / 180));
  for (const auto& p : poses) {
    const Eigen::Vector3d e = traj.frame().to_enu(p.position);
    EXPECT_NEAR(e.x() * dir.y() - e.y() * dir.x(), 0.0, 1e-6);
    EXPECT_NEAR(e.z(), 305.0, 1e-6);
    EXPECT_NEAR(p.orientation.yaw, 30.0, 1e-9);
    EXPECT_EQ(p.orientation.roll, 0.0);
  }
  EXPECT_NEAR(traj.frame().to_enu(poses.back().position).head<2>().norm(), 77.0 * 300.0, 1e-6);
}

TEST(Trajectory, TriggerCountAndSpacing) {
  const auto trig = generate_triggers(straight(300));
  ASSERT_EQ(trig.size(), 300u);
  for (std::size_t i = 1; i < trig.size(); ++i) {
    EXPECT_EQ(trig[i].time - trig[i - 1].time, kMicrosPerSecond);
    EXPECT_EQ(trig[i].seq, trig[i - 1].seq + 1);
  }
}

TEST(Trajectory, FigureEightAltitudeModes) {
  FlightPlan p;
  p.pattern = Pattern::figure_eight;
  p.altitudes_m = {304.8, 609.6, 914.4};
  p.duration_s = 0.0;
  const auto poses = generate_trajectory(p);
  std::map<long, int> hist;
  for (const auto& x : poses) ++hist[std::lround(std::floor(x.position.alt))];
  // Group adjacent dense bins into modes; climbing samples spread below 100 per metre.
  std::vector<std::pair<double, int>> modes;  // weighted sum, count
  long prev = -1000;
  for (const auto& [alt, n] : hist) {
    if (n < 100) continue;
    if (alt != prev + 1) modes.emplace_back(0.0, 0);
    modes.back().first += (static_cast<double>(alt) + 0.5) * n;
    modes.back().second += n;
    prev = alt;
  }
  ASSERT_EQ(modes.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(modes[i].first / modes[i].second, p.altitudes_m[i], 1.0);
  for (const auto& x : poses) {
    const bool level = std::any_of(p.altitudes_m.begin(), p.altitudes_m.end(),
                                   [&](double a) { return std::abs(x.position.alt - a) < 1e-6; });
    if (level) EXPECT_NEAR(x.orientation.pitch, 0.0, 1e-9);
  }
}

TEST(Trajectory, ContinuousAndCoordinated) {
  FlightPlan p;
  p.pattern = Pattern::figure_eight;
  p.altitudes_m = {305};
  p.duration_s = 0.0;
  const Trajectory traj(p);
  const auto poses = sample_trajectory(traj);
  const double dt = 0.02;
  for (std::size_t i = 1; i + 1 < poses.size(); ++i) {
    const Eigen::Vector3d a = traj.position_enu(poses[i - 1].time);
    const Eigen::Vector3d b = traj.position_enu(poses[i].time);
    const Eigen::Vector3d c = traj.position_enu(poses[i + 1].time);
    EXPECT_NEAR((b - a).norm(), 77.0 * dt, 1e-3);
    // Direction changes by at most the turn rate, including at the crossover.
    const double turn = std::acos(std::clamp((b - a).normalized().dot((c - b).normalized()), -1.0, 1.0));
    EXPECT_LE(turn, 77.0 / p.loop_radius_m * dt * 1.001);
    // Bank agrees with the turn rate: tan(roll) = v * yaw_rate / g.
    double dpsi = poses[i + 1].orientation.yaw - poses[i - 1].orientation.yaw;
    if (dpsi > 180) dpsi -= 360;
    if (dpsi < -180) dpsi += 360;
    const double yaw_rate = dpsi * std::numbers::pi / 180.0 / (2 * dt);
    if (std::abs(poses[i].orientation.roll) > 1.0 && std::abs(poses[i - 1].orientation.roll - poses[i + 1].orientation.roll) < 1e-6) {
      EXPECT_NEAR(std::tan(poses[i].orientation.roll * std::numbers::pi / 180.0), 77.0 * yaw_rate / kGravity, 1e-3);
    }
  }
}

TEST(Trajectory, InfeasibleTurnIsPlanError) {
  FlightPlan p;
  p.pattern = Pattern::figure_eight;
  p.loop_radius_m = 300.0;
  EXPECT_THROW(Trajectory{p}, PlanError);
  FlightPlan t;
  t.legs = 3;
  t.leg_length_m = 5000;
  t.leg_spacing_m = 400;
  EXPECT_THROW(Trajectory{t}, PlanError);
  t.leg_spacing_m = 2500;
  EXPECT_NO_THROW(Trajectory{t});
  FlightPlan z;
  z.altitudes_m = {0.0};
  EXPECT_THROW(z.validate(), PlanError);
}

TEST(Trajectory, MultiLegTransectsAlternate) {
  FlightPlan t;
  t.legs = 3;
  t.leg_length_m = 5000;
  t.leg_spacing_m = 2500;
  t.duration_s = 0.0;
  const Trajectory traj(t);
  EXPECT_NEAR(traj.path_length_m(), 3 * 5000 + 2 * std::numbers::pi * 1250, 1e-6);
  const Eigen::Vector3d end = traj.position_enu(traj.end());
  EXPECT_NEAR(end.x(), 5000.0, 1e-3);  // two lane shifts to the right
  EXPECT_NEAR(end.y(), 5000.0, 1e-3);
}

class NadirRender : public ::testing::Test {
 protected:
  geom::LocalFrame frame{testing::kOrigin};
  geom::InsPose pose = testing::level_pose_at(frame, {0, 0, 305});
  geom::CameraModel ir = testing::nadir_camera(Band::ir, geom::CameraIntrinsics::ideal(640, 512, 4400.0));
  NoiseParams noise = [] {
    NoiseParams n;
    n.ir_baseline = 100.0;
    n.ir_sigma = 2.0;
    return n;
  }();
};

TEST_F(NadirRender, EmptySceneIsNoise) {
  const RenderedFrame f = render_frame(ir, pose, frame, Scene{}, noise, 5);
  const auto& im = std::get<Image16>(f.image);
  double sum = 0.0;
  for (auto v : im.pixels()) sum += v;
  const double n = static_cast<double>(im.pixels().size());
  EXPECT_NEAR(sum / n, 100.0, 3.0 * 2.0 / std::sqrt(n) + 0.5 / std::sqrt(n));
  EXPECT_TRUE(f.truth.empty());
}

TEST_F(NadirRender, SealUnderNadirPeaksAtCenter) {
  Scene scene;
  Target seal = species_template(Species::ringed_seal);
  seal.id = "seal";
  seal.thermal_contrast = 40.0;
  seal.ground = frame.to_geo(Eigen::Vector3d(0, 0, 0));
  scene.targets.push_back(seal);
  const RenderedFrame f = render_frame(ir, pose, frame, scene, noise, 5);
  const auto& im = std::get<Image16>(f.image);
  int bx = 0, by = 0, best = 0;
  for (int y = 0; y < im.height(); ++y) {
    for (int x = 0; x < im.width(); ++x) {
      if (im.at(x, y) > best) {
        best = im.at(x, y);
        bx = x;
        by = y;
      }
    }
  }
  EXPECT_GE(best, 130);
  EXPECT_NEAR(bx + 0.5, 320.0, 1.0);
  EXPECT_NEAR(by + 0.5, 256.0, 1.0);
  ASSERT_EQ(f.truth.size(), 1u);
  // Extent is body radius over GSD; the box is +-2 sigma.
  const double gsd = 305.0 / 4400.0;
  EXPECT_NEAR(f.truth[0].sigma_px, 0.6 / gsd / 2.0, 1e-6);
  EXPECT_NEAR(f.truth[0].bbox.w, 2.0 * 0.6 / gsd, 1e-6);
}

TEST_F(NadirRender, PolarBearIsDarkInUv) {
  const geom::CameraModel uv = testing::nadir_camera(Band::uv, geom::CameraIntrinsics::ideal(2048, 2048, 14000.0));
  Scene scene;
  Target bear = species_template(Species::polar_bear);
  bear.id = "bear";
  bear.ground = frame.to_geo(Eigen::Vector3d(0, 0, 0));
  scene.targets.push_back(bear);
  const RenderedFrame f = render_frame(uv, pose, frame, scene, NoiseParams{}, 9);
  const auto& im = std::get<Image8>(f.image);
  double center = 0.0;
  for (int y = 1020; y < 1028; ++y)
    for (int x = 1020; x < 1028; ++x) center += im.at(x, y);
  center /= 64.0;
  EXPECT_LT(center, NoiseParams{}.uv_baseline - 50.0);
  EXPECT_LT(bear.uv_signature, 0.0);
  EXPECT_LT(bear.thermal_contrast, species_template(Species::ringed_seal).thermal_contrast);
}

TEST_F(NadirRender, WindowEqualsCropOfFullFrame) {
  Scene scene;
  Target seal = species_template(Species::bearded_seal);
  seal.id = "s";
  seal.ground = frame.to_geo(Eigen::Vector3d(3, -2, 0));
  scene.targets.push_back(seal);
  const geom::CameraModel rgb = testing::nadir_camera(Band::rgb, geom::CameraIntrinsics::ideal(1024, 768, 8000.0));
  for (const geom::CameraModel* cam : {static_cast<const geom::CameraModel*>(&ir), &rgb}) {
    const auto truth = visible_targets(*cam, pose, frame, scene);
    ASSERT_EQ(truth.size(), 1u);
    const FrameSpec spec = make_frame_spec(*cam, default_control(cam->band), truth, scene, noise, 77);
    const ImageBuffer full = render_full(spec);
    const PixelWindow w{100, 50, 300, 200};
    EXPECT_TRUE(render_window(spec, w) == crop(full, w));
    EXPECT_THROW(render_window(spec, {0, 0, 5000, 10}), SizeError);
  }
}

TEST_F(NadirRender, TruthCenterMatchesProjection) {
  const geom::CameraModel side = [] {
    geom::CameraIntrinsics k = geom::CameraIntrinsics::ideal(640, 512, 4400.0);
    k.k1 = -0.08;
    return testing::nadir_camera(Band::ir, k, View::R, 30.0);
  }();
  Scene scene;
  Rng rng(3);
  const geom::CameraWorldPose w = geom::camera_world_pose(side.rig, pose, frame);
  for (int i = 0; i < 50; ++i) {
    Target t = species_template(Species::ringed_seal);
    t.id = std::to_string(i);
    const Eigen::Vector2d px(rng.uniform(20, 620), rng.uniform(20, 492));
    t.ground = frame.to_geo(geom::project_to_ground_enu(side, w, px, 0.0));
    scene.targets.push_back(t);
  }
  const auto truth = visible_targets(side, pose, frame, scene);
  // Visibility completeness: every target placed inside the frame is seen.
  ASSERT_EQ(truth.size(), scene.targets.size());
  for (const auto& s : truth) {
    const auto& t = *std::find_if(scene.targets.begin(), scene.targets.end(), [&](const Target& x) { return x.id == s.target_id; });
    const geom::PixelProjection p = geom::ground_to_pixel(side, pose, t.ground, frame);
    EXPECT_LT((s.bbox.center() - p.pixel).norm(), 0.5);
  }
}

SimConfig small_config(int triggers) {
  SimConfig c;
  c.plan = straight(triggers);
  c.seed = 17;
  return c;
}

TEST(Simulate, NoFaultsEmitsEveryFrame) {
  const SimulatedFlight f = simulate_flight(small_config(10));
  EXPECT_EQ(f.triggers.size(), 10u);
  EXPECT_EQ(f.frames.size(), 90u);
  EXPECT_EQ(f.truth.frame_trigger.size(), 90u);
  EXPECT_TRUE(f.truth.drops.empty());
  for (const auto& fr : f.frames) EXPECT_EQ(f.truth.frame_trigger.at(fr.frame_id), (fr.frame_id - 1) / 9);
}

TEST(Simulate, DropsAreReproducibleAndPlausible) {
  SimConfig c = small_config(500);
  c.faults.drop_probability = 0.02;
  c.faults.jitter_s = 0.1;
  const SimulatedFlight a = simulate_flight(c);
  const SimulatedFlight b = simulate_flight(c);
  EXPECT_EQ(a.truth.drops, b.truth.drops);
  // 4500 frames at p = 0.02: mean 90, sd 9.4.
  EXPECT_GT(a.truth.drops.size(), 50u);
  EXPECT_LT(a.truth.drops.size(), 130u);
  EXPECT_EQ(a.frames.size() + a.truth.drops.size(), 4500u);
  std::int64_t worst = 0;
  for (std::size_t i = 0; i < a.frames.size(); ++i) {
    const std::int64_t seq = a.truth.frame_trigger.at(a.frames[i].frame_id);
    worst = std::max(worst, std::abs(a.frames[i].arrival_time - a.triggers[seq].time));
    EXPECT_EQ(a.frames[i].arrival_time, b.frames[i].arrival_time);
  }
  EXPECT_LE(worst, 100'000);
  EXPECT_GT(worst, 90'000);
}

TEST(Simulate, StallWithholdsFrames) {
  SimConfig c = small_config(10);
  c.faults.stalls.push_back({"ir_L", 4, 6});
  const SimulatedFlight f = simulate_flight(c);
  EXPECT_EQ(f.frames.size(), 87u);
  ASSERT_EQ(f.truth.drops.size(), 3u);
  EXPECT_TRUE(f.truth.drops[0].stalled);
}

TEST(Simulate, SyncRecoversGroundTruth) {
  SimConfig c = small_config(200);
  c.faults.drop_probability = 0.02;
  c.faults.jitter_s = 0.1;
  const SimulatedFlight f = simulate_flight(c);
  std::vector<std::string> cams;
  for (const auto& m : c.rig) cams.push_back(m.camera_id);
  const sync::Assembly a = sync::assemble(f.triggers, f.frames, cams, f.ins);
  ASSERT_EQ(a.samples.size(), 200u);
  for (const auto& s : a.samples) {
    for (const auto& [cam, fr] : s.frames) EXPECT_EQ(f.truth.frame_trigger.at(fr.frame_id), s.trigger.seq);
    EXPECT_FALSE(s.pose_missing);
  }
  EXPECT_EQ(a.report.total_missing(), static_cast<std::int64_t>(f.truth.drops.size()));
  EXPECT_EQ(a.report.total_orphans(), 0);
}

TEST(Simulate, RenderingIsDeterministic) {
  SimConfig c = small_config(3);
  c.scene.targets.push_back([] {
    Target t = species_template(Species::ringed_seal);
    t.id = "x";
    t.ground = geom::LocalFrame(FlightPlan{}.origin).to_geo(Eigen::Vector3d(38.5, 66.7, 0));
    return t;
  }());
  const SimulatedFlight a = simulate_flight(c);
  const SimulatedFlight b = simulate_flight(c);
  for (std::size_t i = 0; i < a.frames.size(); i += 4) {
    const auto wa = a.frames[i].payload->render_window({0, 0, 64, 64});
    const auto wb = b.frames[i].payload->render_window({0, 0, 64, 64});
    EXPECT_TRUE(wa == wb);
  }
  std::ostringstream ja, jb;
  write_ground_truth_jsonl(a.truth, ja);
  write_ground_truth_jsonl(b.truth, jb);
  EXPECT_EQ(ja.str(), jb.str());
  EXPECT_NE(ja.str().find("\"target_id\":\"x\""), std::string::npos);
}

TEST(Simulate, ControlChangesReachNextFrame) {
  FlightSimulator sim(small_config(4));
  sim.step();
  CameraControl c = sim.control("rgb_C");
  c.exposure_us = 250.0;
  sim.set_control("rgb_C", c);
  const auto st = sim.step();
  const auto it = std::find_if(st.frames.begin(), st.frames.end(), [](const auto& f) { return f.camera_id == "rgb_C"; });
  ASSERT_NE(it, st.frames.end());
  EXPECT_EQ(it->settings.exposure_us, 250.0);
  EXPECT_THROW(sim.set_control("rgb_Q", c), ValidationError);
  const auto ir = std::find_if(st.frames.begin(), st.frames.end(), [](const auto& f) { return f.camera_id == "ir_C"; });
  ASSERT_TRUE(ir->settings.nuc_age_s.has_value());
  EXPECT_NEAR(*ir->settings.nuc_age_s, 1.0, 1e-9);
}

TEST(SimConfigYaml, ParsesSectionsAndScatters) {
  const YAML::Node root = YAML::Load(R"(
seed: 4
plan: {pattern: transects, duration_s: 60, altitude_m: 305, speed_mps: 77}
faults: {jitter_s: 0.05, drop_probability: 0.01, stalls: [{camera_id: ir_L, from_seq: 3, to_seq: 5}]}
rig: {mount_angle_deg: 25, controls: {rgb_C: {exposure_us: 800}}}
scene:
  targets: [{id: bear1, species: polar_bear, lat: 64.5012, lon: -165.4064}]
  scatter: {count: 5, mix: {ringed_seal: 1.0}}
)");
  const SimConfig c = sim_config_from_yaml(root);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.plan.duration_s, 60.0);
  EXPECT_EQ(c.faults.stalls.size(), 1u);
  EXPECT_EQ(c.controls.at("rgb_C").exposure_us, 800.0);
  ASSERT_EQ(c.scene.targets.size(), 6u);
  EXPECT_EQ(c.scene.targets[0].species, Species::polar_bear);
  EXPECT_EQ(c.rig.size(), 9u);
  EXPECT_THROW(sim_config_from_yaml(YAML::Load("plan: {bogus: 1}")), ValidationError);
  EXPECT_THROW(sim_config_from_yaml(YAML::Load("plan: {speed_mps: -1}")), PlanError);
}

TEST(Scatter, EveryTargetIsImagedOnce) {
  SimConfig c = small_config(60);
  const Trajectory traj(c.plan);
  ScatterParams sp;
  sp.count = 30;
  const auto ir = select(c.rig, {Band::ir});
  c.scene = scatter_targets(traj, ir, sp, 8);
  ASSERT_EQ(c.scene.targets.size(), 30u);
  const SimulatedFlight f = simulate_flight(c);
  std::set<std::string> seen;
  for (const auto& s : f.truth.samples)
    for (const auto& t : s.sightings)
      if (t.camera_id.rfind("ir_", 0) == 0) seen.insert(t.target_id);
  EXPECT_EQ(seen.size(), 30u);
}

}  // namespace
}  // namespace aerosurvey::sim
