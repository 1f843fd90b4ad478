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
#include <random>

#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"
#include "aerosurvey/sync/assembler.hpp"

namespace aerosurvey::sync {
namespace {

constexpr std::int64_t kEpoch = 1'744'411'407'000'000;
constexpr std::int64_t kSec = kMicrosPerSecond;

const std::vector<std::string> kNine = {"ir_C", "ir_L", "ir_R", "rgb_C", "rgb_L", "rgb_R", "uv_C", "uv_L", "uv_R"};

Timestamp at(double seconds) { return Timestamp::from_micros(kEpoch + seconds_to_micros(seconds)); }

std::vector<TriggerEvent> triggers_1hz(int n, double start = 0.0) {
  std::vector<TriggerEvent> out;
  for (int i = 0; i < n; ++i) out.push_back({i + 1, at(start + i)});
  return out;
}

std::vector<geom::InsPose> poses_50hz(double from, double to) {
  std::vector<geom::InsPose> out;
  for (std::int64_t us = seconds_to_micros(from); us <= seconds_to_micros(to); us += 20'000) {
    geom::InsPose p;
    p.time = Timestamp::from_micros(kEpoch + us);
    p.position = {64.5, -165.4, 305.0 + static_cast<double>(us) * 1e-6};
    p.orientation = {0.0, 0.0, 90.0};
    out.push_back(p);
  }
  return out;
}

FrameHeader frame(std::uint64_t id, const std::string& cam, Timestamp t) {
  FrameHeader f;
  f.frame_id = id;
  f.camera_id = cam;
  f.arrival_time = t;
  return f;
}

/// Independent nearest-trigger search over every trigger.
std::optional<std::int64_t> brute_force(Timestamp arrival, const std::vector<TriggerEvent>& triggers,
                                        std::int64_t tol) {
  std::optional<std::int64_t> best;
  std::int64_t best_d = INT64_MAX;
  for (const auto& t : triggers) {
    const std::int64_t d = std::abs(arrival.micros() - t.time.micros());
    if (d <= tol && d < best_d) {
      best = t.seq;
      best_d = d;
    }
  }
  return best;
}

std::vector<std::vector<std::uint64_t>> frame_ids(const std::vector<Sample>& samples) {
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& s : samples) {
    std::vector<std::uint64_t> ids;
    for (const auto& [cam, f] : s.frames) ids.push_back(f.frame_id);
    out.push_back(ids);
  }
  return out;
}

TEST(AssignFrame, NearestTrigger) {
  const auto trig = std::vector<TriggerEvent>{{100, at(100)}, {101, at(101)}, {102, at(102)}};
  EXPECT_EQ(assign_frame_seq(frame(1, "ir_C", at(101.004)), trig, 250'000), 101);
}

TEST(AssignFrame, OutsideToleranceIsOrphan) {
  const auto trig = std::vector<TriggerEvent>{{100, at(100)}, {101, at(101)}, {102, at(102)}};
  EXPECT_FALSE(assign_frame_seq(frame(1, "ir_C", at(100.5)), trig, 400'000).has_value());
}

TEST(AssignFrame, TieGoesToEarlierTrigger) {
  const auto trig = std::vector<TriggerEvent>{{7, at(10)}, {8, at(11)}};
  EXPECT_EQ(assign_frame_seq(frame(1, "ir_C", at(10.5)), trig, 500'000), 7);
}

TEST(AssignFrame, EmptyWindow) {
  EXPECT_FALSE(assign_frame(at(0), {}, 250'000).has_value());
}

TEST(AssignFrame, MatchesBruteForceUnderJitter) {
  const auto trig = triggers_1hz(500);
  Rng rng(11);
  for (int i = 0; i < 5000; ++i) {
    const double base = static_cast<double>(rng.below(500));
    const Timestamp a = at(base + rng.uniform(-0.1, 0.1));
    EXPECT_EQ(assign_frame_seq(frame(i, "ir_C", a), trig, 250'000), brute_force(a, trig, 250'000));
  }
  // Wider spread exercises the orphan side as well.
  for (int i = 0; i < 5000; ++i) {
    const Timestamp a = at(rng.uniform(-2.0, 502.0));
    EXPECT_EQ(assign_frame_seq(frame(i, "ir_C", a), trig, 250'000), brute_force(a, trig, 250'000));
  }
}

TEST(PoseAt, InterpolatesBetweenRecords) {
  const auto poses = poses_50hz(0, 1);
  const PoseLookup p = pose_at(poses, at(0.51), 200'000);
  EXPECT_FALSE(p.missing);
  EXPECT_NEAR(p.pose.position.alt, 305.51, 1e-9);
  EXPECT_EQ(p.pose.time, at(0.51));
}

TEST(PoseAt, GapOrUnbracketedIsMissing) {
  auto poses = poses_50hz(0, 1);
  EXPECT_TRUE(pose_at(poses, at(1.5), 200'000).missing);
  EXPECT_TRUE(pose_at(poses, at(-0.5), 200'000).missing);
  poses.erase(poses.begin() + 10, poses.begin() + 40);
  EXPECT_TRUE(pose_at(poses, at(0.5), 200'000).missing);
  EXPECT_FALSE(pose_at(poses, at(0.9), 200'000).missing);
}

class NineCameraRun : public ::testing::Test {
 protected:
  void SetUp() override {
    triggers = triggers_1hz(3);
    poses = poses_50hz(-1, 4);
    std::uint64_t id = 0;
    for (const auto& t : triggers) {
      for (std::size_t c = 0; c < kNine.size(); ++c) {
        frames.push_back(frame(++id, kNine[c], t.time + static_cast<std::int64_t>(c) * 7'000));
      }
    }
  }

  std::vector<TriggerEvent> triggers;
  std::vector<geom::InsPose> poses;
  std::vector<FrameHeader> frames;
};

TEST_F(NineCameraRun, CompleteSamples) {
  const Assembly a = assemble(triggers, frames, kNine, poses);
  ASSERT_EQ(a.samples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.samples[i].trigger.seq, static_cast<std::int64_t>(i + 1));
    EXPECT_EQ(a.samples[i].frames.size(), 9u);
    EXPECT_FALSE(a.samples[i].partial);
    EXPECT_FALSE(a.samples[i].pose_missing);
    EXPECT_EQ(a.samples[i].ins.time, a.samples[i].trigger.time);
  }
  EXPECT_EQ(a.report.total_missing(), 0);
  EXPECT_EQ(a.report.total_orphans(), 0);
  EXPECT_TRUE(a.report.reconciles());
}

TEST_F(NineCameraRun, OneMissingIrLeftFrame) {
  frames.erase(std::find_if(frames.begin(), frames.end(), [](const FrameHeader& f) {
    return f.camera_id == "ir_L" && f.arrival_time > at(1.5);
  }));
  const Assembly a = assemble(triggers, frames, kNine, poses);
  ASSERT_EQ(a.samples.size(), 3u);
  EXPECT_FALSE(a.samples[0].partial);
  EXPECT_FALSE(a.samples[1].partial);
  EXPECT_TRUE(a.samples[2].partial);
  EXPECT_EQ(a.samples[2].frames.count("ir_L"), 0u);
  const CameraDrops& d = a.report.cameras.at("ir_L");
  EXPECT_EQ(d.missing_seqs, std::vector<std::int64_t>{3});
  EXPECT_EQ(d.expected, 3);
  EXPECT_EQ(d.received, 2);
  EXPECT_EQ(a.report.total_missing(), 1);
  EXPECT_TRUE(a.report.reconciles());
}

TEST_F(NineCameraRun, OrphanAndDuplicate) {
  frames.push_back(frame(100, "uv_C", at(2.6)));            // between triggers, outside tolerance
  frames.push_back(frame(101, "rgb_R", at(2.0) + 90'000));  // second rgb_R frame for seq 3
  const Assembly a = assemble(triggers, frames, kNine, poses);
  EXPECT_EQ(a.report.cameras.at("uv_C").orphans, 1);
  EXPECT_EQ(a.report.cameras.at("rgb_R").duplicates, 1);
  ASSERT_EQ(a.report.orphan_frames.size(), 1u);
  EXPECT_EQ(a.report.orphan_frames[0].frame_id, 100u);
  EXPECT_EQ(a.samples[2].frames.at("rgb_R").frame_id, 27u - 3u);  // the first one is kept
  EXPECT_TRUE(a.report.reconciles());
}

TEST_F(NineCameraRun, PoseGapFlagsSample) {
  poses.erase(std::remove_if(poses.begin(), poses.end(),
                             [](const geom::InsPose& p) { return p.time > at(0.7) && p.time < at(1.3); }),
              poses.end());
  const Assembly a = assemble(triggers, frames, kNine, poses);
  ASSERT_EQ(a.samples.size(), 3u);
  EXPECT_FALSE(a.samples[0].pose_missing);
  EXPECT_TRUE(a.samples[1].pose_missing);
  EXPECT_FALSE(a.samples[2].pose_missing);
}

TEST(Assembler, OutOfOrderSeqIsProtocolError) {
  SampleAssembler s(kNine);
  s.push_trigger({5, at(0)});
  EXPECT_THROW(s.push_trigger({5, at(1)}), ProtocolError);
  EXPECT_THROW(s.push_trigger({4, at(2)}), ProtocolError);
  EXPECT_THROW(s.push_trigger({6, at(0)}), ProtocolError);
}

TEST(Assembler, PeriodMustExceedTwiceTolerance) {
  SampleAssembler s(kNine);
  s.push_trigger({1, at(0)});
  EXPECT_THROW(s.push_trigger({2, at(0.5)}), ProtocolError);
}

TEST(Assembler, UnknownCameraAndBackwardsFrame) {
  SampleAssembler s({"ir_C"});
  EXPECT_THROW(s.push_frame(frame(1, "ir_Q", at(0))), ProtocolError);
  s.push_frame(frame(2, "ir_C", at(1)));
  EXPECT_THROW(s.push_frame(frame(3, "ir_C", at(0.5))), ProtocolError);
}

TEST(Assembler, EmitsCompletedSamplesWhileStreaming) {
  SampleAssembler s({"ir_C", "rgb_C"});
  s.push_pose([] {
    geom::InsPose p;
    p.time = at(-1);
    return p;
  }());
  s.push_trigger({1, at(0)});
  s.push_frame(frame(1, "ir_C", at(0.01)));
  EXPECT_TRUE(s.poll().empty());
  s.push_frame(frame(2, "rgb_C", at(0.02)));
  EXPECT_TRUE(s.poll().empty());  // pose not yet past the trigger
  s.push_pose([] {
    geom::InsPose p;
    p.time = at(0.1);
    return p;
  }());
  const auto out = s.poll();
  ASSERT_EQ(out.size(), 1u);
  EXPECT_FALSE(out[0].partial);
}

TEST(Assembler, StalledCameraReleasedAfterGrace) {
  SampleAssembler s({"ir_C", "rgb_C"});
  const auto poses = poses_50hz(-1, 10);
  std::size_t next_pose = 0;
  int emitted = 0;
  for (int k = 0; k < 8; ++k) {
    const Timestamp t = at(k);
    while (next_pose < poses.size() && poses[next_pose].time <= t + 50'000) s.push_pose(poses[next_pose++]);
    s.push_trigger({k + 1, t});
    s.push_frame(frame(100 + k, "ir_C", t + 10'000));
    if (k < 2) s.push_frame(frame(200 + k, "rgb_C", t + 10'000));
    emitted += static_cast<int>(s.poll().size());
  }
  // rgb_C went silent after seq 2; samples up to a grace window behind the
  // newest data are released without it.
  EXPECT_GE(emitted, 5);
  const auto rest = s.finish();
  EXPECT_EQ(emitted + static_cast<int>(rest.size()), 8);
  EXPECT_EQ(s.report().cameras.at("rgb_C").missing_seqs.size(), 6u);
  EXPECT_TRUE(s.report().reconciles());
}

TEST(Assembler, LateFrameAfterStallIsCounted) {
  AssemblerConfig cfg;
  cfg.grace_us = 500'000;
  SampleAssembler s({"ir_C", "rgb_C"}, cfg);
  s.push_trigger({1, at(0)});
  s.push_trigger({2, at(1)});
  s.push_trigger({3, at(2)});
  s.push_frame(frame(1, "ir_C", at(0)));
  s.push_frame(frame(2, "ir_C", at(1)));
  s.push_frame(frame(3, "ir_C", at(2)));
  EXPECT_FALSE(s.poll().empty());
  s.push_frame(frame(4, "rgb_C", at(0.01)));  // seq 1 was already released
  s.finish();
  EXPECT_EQ(s.report().cameras.at("rgb_C").late, 1);
  EXPECT_TRUE(s.report().reconciles());
}

TEST(Assembler, FramesBeforeTheirTriggerAreHeld) {
  SampleAssembler s({"ir_C"});
  s.push_frame(frame(1, "ir_C", at(-0.05)));
  s.push_frame(frame(2, "ir_C", at(0.95)));
  s.push_trigger({1, at(0)});
  s.push_trigger({2, at(1)});
  const auto out = s.finish();
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].frames.at("ir_C").frame_id, 1u);
  EXPECT_EQ(out[1].frames.at("ir_C").frame_id, 2u);
  EXPECT_EQ(s.report().total_orphans(), 0);
}

struct Streams {
  std::vector<TriggerEvent> triggers;
  std::vector<FrameHeader> frames;
  std::vector<geom::InsPose> poses;
};

Streams faulty_run(std::uint64_t seed, int n) {
  Streams s;
  s.triggers = triggers_1hz(n);
  s.poses = poses_50hz(-1, n + 1);
  Rng rng(seed);
  std::uint64_t id = 0;
  for (const auto& cam : kNine) {
    for (const auto& t : s.triggers) {
      if (rng.bernoulli(0.02)) continue;
      s.frames.push_back(frame(++id, cam, t.time + seconds_to_micros(rng.uniform(-0.1, 0.1))));
      if (rng.bernoulli(0.01)) s.frames.push_back(frame(++id, cam, t.time + 150'000));
    }
    s.frames.push_back(frame(++id, cam, s.triggers.back().time + 600'000));
  }
  std::stable_sort(s.frames.begin(), s.frames.end(),
                   [](const FrameHeader& a, const FrameHeader& b) { return a.arrival_time < b.arrival_time; });
  return s;
}

/// Pushes the streams in a random interleaving that keeps each stream's own
/// order and never lets one stream run more than `max_skew_us` ahead.
std::pair<std::vector<Sample>, DropReport> run_interleaved(const Streams& st, std::uint64_t seed,
                                                           std::int64_t max_skew_us,
                                                           const AssemblerConfig& cfg) {
  SampleAssembler a(kNine, cfg);
  std::map<std::string, std::vector<const FrameHeader*>> per_cam;
  for (const auto& f : st.frames) per_cam[f.camera_id].push_back(&f);
  std::vector<std::size_t> cursor(kNine.size() + 2, 0);
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  auto head_time = [&](std::size_t s) -> std::optional<Timestamp> {
    if (s == 0) return cursor[0] < st.triggers.size() ? std::optional(st.triggers[cursor[0]].time) : std::nullopt;
    if (s == 1) return cursor[1] < st.poses.size() ? std::optional(st.poses[cursor[1]].time) : std::nullopt;
    const auto& v = per_cam[kNine[s - 2]];
    return cursor[s] < v.size() ? std::optional(v[cursor[s]]->arrival_time) : std::nullopt;
  };
  while (true) {
    std::optional<Timestamp> oldest;
    for (std::size_t s = 0; s < cursor.size(); ++s) {
      const auto h = head_time(s);
      if (h && (!oldest || *h < *oldest)) oldest = h;
    }
    if (!oldest) break;
    std::vector<std::size_t> eligible;
    for (std::size_t s = 0; s < cursor.size(); ++s) {
      const auto h = head_time(s);
      if (h && *h - *oldest <= max_skew_us) eligible.push_back(s);
    }
    const std::size_t s = eligible[rng() % eligible.size()];
    if (s == 0) {
      a.push_trigger(st.triggers[cursor[0]++]);
    } else if (s == 1) {
      a.push_pose(st.poses[cursor[1]++]);
    } else {
      a.push_frame(*per_cam[kNine[s - 2]][cursor[s]++]);
    }
    for (auto& x : a.poll()) out.push_back(std::move(x));
  }
  for (auto& x : a.finish()) out.push_back(std::move(x));
  return {std::move(out), a.report()};
}

TEST(AssemblerProperty, ConservationUnderFaults) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Streams st = faulty_run(seed, 200);
    const Assembly a = assemble(st.triggers, st.frames, kNine, st.poses);
    EXPECT_EQ(a.samples.size(), 200u);
    EXPECT_TRUE(a.report.reconciles());
    std::int64_t emitted = 0;
    for (const auto& [cam, d] : a.report.cameras) emitted += d.emitted;
    EXPECT_EQ(emitted, static_cast<std::int64_t>(st.frames.size()));
    for (const auto& s : a.samples) {
      for (const auto& [cam, f] : s.frames) {
        EXPECT_LE(std::abs(f.arrival_time - s.trigger.time), 250'000);
      }
    }
  }
}

TEST(AssemblerProperty, InterleavingDoesNotChangeOutput) {
  const Streams st = faulty_run(42, 120);
  const Assembly ref = assemble(st.triggers, st.frames, kNine, st.poses);
  AssemblerConfig unbounded;
  unbounded.grace_us = INT64_MAX / 4;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    // Arbitrary interleavings when the stall window is disabled.
    const auto [samples, report] = run_interleaved(st, seed, INT64_MAX / 4, unbounded);
    EXPECT_EQ(frame_ids(samples), frame_ids(ref.samples));
    EXPECT_EQ(report, ref.report);
    // Default grace with feeds kept within half a second of each other.
    const auto [samples2, report2] = run_interleaved(st, seed + 100, 500'000, AssemblerConfig{});
    EXPECT_EQ(frame_ids(samples2), frame_ids(ref.samples));
    EXPECT_EQ(report2, ref.report);
    for (std::size_t i = 0; i < samples2.size(); ++i) {
      EXPECT_EQ(samples2[i].pose_missing, ref.samples[i].pose_missing);
      EXPECT_EQ(samples2[i].ins.position, ref.samples[i].ins.position);
    }
  }
}

}  // namespace
}  // namespace aerosurvey::sync
