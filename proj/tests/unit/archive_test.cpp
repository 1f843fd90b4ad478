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

#include <ctime>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "aerosurvey/archive/archive.hpp"
#include "aerosurvey/archive/encode.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/core/random.hpp"
#include "aerosurvey/sim/simulator.hpp"
#include "aerosurvey/sync/assembler.hpp"

namespace aerosurvey::archive {
namespace {

namespace fs = std::filesystem;
using geom::Band;
using geom::View;

Timestamp utc(int y, int mo, int d, int h, int mi, int s, int us) { return from_civil({y, mo, d, h, mi, s, us}); }

// ------------------------------------------------------------------ naming

TEST(ImageName, ReproducesReferenceExample) {
  FlightManifest m;
  m.effort = "ice_seals_2025";
  m.flight = 107;
  const Timestamp t = utc(2025, 4, 11, 22, 43, 27, 981822);
  EXPECT_EQ(format_image_name(m, View::R, t, Band::rgb), "ice_seals_2025_fl107_R_20250411_224327.981822_rgb");

  const ImageName n = parse_image_name("ice_seals_2025_fl107_R_20250411_224327.981822_rgb");
  EXPECT_EQ(n.effort, "ice_seals_2025");
  EXPECT_EQ(n.flight, 107);
  EXPECT_EQ(n.view, View::R);
  EXPECT_EQ(n.time, t);
  EXPECT_EQ(n.band, Band::rgb);
  EXPECT_EQ(n.time.iso8601(), "2025-04-11T22:43:27.981822Z");
}

TEST(ImageName, ZeroPaddingAndWholeSeconds) {
  const ImageName n{"survey", 7, View::C, utc(2025, 4, 11, 22, 43, 27, 0), Band::ir};
  EXPECT_EQ(format_image_name(n), "survey_fl007_C_20250411_224327.000000_ir");
  EXPECT_EQ(parse_image_name("survey_fl7_C_20250411_224327.000000_ir"), n);
  EXPECT_EQ(parse_image_name(format_image_name(n)), n);
}

TEST(ImageName, EffortWithUnderscoresAndFlightLikeTokens) {
  for (const std::string effort : {"a_b_c_2025", "fl_survey", "x_fl12b", "seals_fl3x_y", "a-b"}) {
    const ImageName n{effort, 12, View::L, utc(2024, 2, 29, 0, 0, 1, 5), Band::uv};
    EXPECT_EQ(parse_image_name(format_image_name(n)), n) << effort;
  }
}

TEST(ImageName, MalformedNamesReportPosition) {
  const auto position = [](std::string_view s) -> std::optional<std::size_t> {
    try {
      parse_image_name(s);
    } catch (const ParseError& e) {
      return e.position();
    }
    return std::nullopt;
  };
  EXPECT_EQ(position("bad_name"), 0u);
  EXPECT_EQ(position(""), 0u);
  EXPECT_EQ(position("_fl107_R_20250411_224327.981822_rgb"), 0u);  // empty effort
  EXPECT_EQ(position("e_fl107_X_20250411_224327.981822_rgb"), 8u);
  EXPECT_EQ(position("e_fl107_R_2025O411_224327.981822_rgb"), 14u);
  EXPECT_EQ(position("e_fl107_R_20250411-224327.981822_rgb"), 18u);
  EXPECT_EQ(position("e_fl107_R_20250411_224327,981822_rgb"), 25u);
  EXPECT_EQ(position("e_fl107_R_20250411_224327.98182_rgb"), 31u);
  EXPECT_EQ(position("e_fl107_R_20250411_224327.981822_nir"), 33u);
  EXPECT_EQ(position("e_fl107_R_20250411_224327.981822_rgb.jpg"), 33u);
  EXPECT_EQ(position("e_fl107_R_20250230_224327.981822_rgb"), 10u);  // 30 February
  EXPECT_EQ(position("e_fl107_R_20250411_246000.000000_rgb"), 10u);
  EXPECT_EQ(position("e_fl107_R_20250411_224327.981822"), 32u);
}

// Independent oracle: the C library's gmtime for the calendar fields.
std::string oracle_name(const std::string& effort, int flight, char view, std::int64_t us, const char* band) {
  const std::time_t secs = static_cast<std::time_t>(us / 1'000'000);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char date[32];
  std::strftime(date, sizeof date, "%Y%m%d_%H%M%S", &tm);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s_fl%03d_%c_%s.%06d_%s", effort.c_str(), flight, view, date,
                static_cast<int>(us % 1'000'000), band);
  return buf;
}

TEST(ImageName, PropertyBijectionTenThousandCases) {
  Rng rng(2025);
  const char* views = "LCR";
  const char* bands[] = {"rgb", "ir", "uv"};
  const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-";
  for (int i = 0; i < 10'000; ++i) {
    FlightManifest m;
    std::string effort;
    const int tokens = 1 + static_cast<int>(rng.below(4));
    for (int k = 0; k < tokens; ++k) {
      if (k) effort += '_';
      // Some inner tokens look like flight tokens on purpose.
      if (k + 1 < tokens && rng.bernoulli(0.2)) {
        effort += "fl" + std::to_string(rng.below(1000));
        continue;
      }
      const int len = 1 + static_cast<int>(rng.below(8));
      for (int c = 0; c < len; ++c) effort += alphabet[rng.below(alphabet.size())];
    }
    m.effort = effort;
    m.flight = static_cast<int>(rng.below(rng.bernoulli(0.5) ? 1000 : 100000));
    try {
      m.validate();
    } catch (const ValidationError&) {
      // Random last token such as "fl12" is rejected; use a fixed one instead.
      m.effort += "_x";
      m.validate();
    }
    // 1970 .. 9999
    const std::int64_t us = static_cast<std::int64_t>(rng.uniform() * 253402300799.0) * 1'000'000 +
                            static_cast<std::int64_t>(rng.below(1'000'000));
    const int vi = static_cast<int>(rng.below(3));
    const int bi = static_cast<int>(rng.below(3));
    const ImageName n{m.effort, m.flight, static_cast<View>(vi), Timestamp::from_micros(us), static_cast<Band>(bi)};

    const std::string s = format_image_name(m, n.view, n.time, n.band);
    ASSERT_EQ(s, oracle_name(m.effort, m.flight, views[vi], us, bands[bi]));
    const ImageName back = parse_image_name(s);
    ASSERT_EQ(back, n) << s;
    ASSERT_EQ(format_image_name(back), s);
  }
}

TEST(FlightManifest, Validation) {
  FlightManifest m;
  m.effort = "ice_seals_2025";
  EXPECT_NO_THROW(m.validate());
  EXPECT_EQ(m.folder_name(), "ice_seals_2025_fl001");
  for (const std::string bad : {"", "seals_fl12", "fl3", "a__b", "_a", "a_", "a b", "a/b"}) {
    FlightManifest b = m;
    b.effort = bad;
    EXPECT_THROW(b.validate(), ValidationError) << bad;
  }
  FlightManifest t = m;
  t.score_threshold = 1.5;
  EXPECT_THROW(t.validate(), ValidationError);
  t.score_threshold = -0.1;
  EXPECT_THROW(t.validate(), ValidationError);
  FlightManifest f = m;
  f.flight = -1;
  EXPECT_THROW(f.validate(), ValidationError);
  EXPECT_THROW(parse_collection_mode("sometimes"), ValidationError);
  EXPECT_EQ(parse_collection_mode(to_string(CollectionMode::detection_triggered)),
            CollectionMode::detection_triggered);
}

// ---------------------------------------------------------------- metadata

ImageMeta random_meta(Rng& rng) {
  ImageMeta m;
  m.camera_id = "ir_L";
  m.band = Band::ir;
  m.view = View::L;
  m.width = 640;
  m.height = 512;
  m.frame_id = rng.next_u64() >> 12;
  m.event_time = Timestamp::from_micros(1'744'411'407'000'000 + static_cast<std::int64_t>(rng.below(1u << 30)));
  m.arrival_time = m.event_time + static_cast<std::int64_t>(rng.below(100'000));
  m.trigger_seq = static_cast<std::int64_t>(rng.below(100000));
  m.settings = {rng.uniform(0, 24), rng.uniform(10, 20000), rng.uniform(0, 3600)};
  m.ins.time = m.event_time;
  m.ins.position = {rng.uniform(-90, 90), rng.uniform(-180, 180), rng.uniform(-100, 5000)};
  m.ins.orientation = {rng.uniform(-180, 180), rng.uniform(-90, 90), rng.uniform(0, 360)};
  m.ins.velocity = {rng.normal(), rng.normal(), rng.normal()};
  m.ins.angular_rate = {rng.normal(), rng.normal(), rng.normal()};
  m.location = m.ins.position;
  m.partial = rng.bernoulli(0.5);
  m.pose_missing = rng.bernoulli(0.5);
  m.effort = "ice_seals_2025";
  m.flight = 107;
  m.project = "desk \"quoted\" é";
  m.image_name = format_image_name({m.effort, m.flight, m.view, m.event_time, m.band});
  return m;
}

TEST(ImageMeta, RoundTripsExactly) {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    ImageMeta m = random_meta(rng);
    if (i % 2) m.settings.nuc_age_s.reset();
    const std::string doc = serialize(m);
    ASSERT_EQ(parse_image_meta(doc), m) << doc;
    ASSERT_EQ(serialize(parse_image_meta(doc)), doc);
  }
}

TEST(ImageMeta, SchemaFieldsPresent) {
  Rng rng(3);
  const auto j = to_json(random_meta(rng));
  for (const char* k : {"schema", "image_name", "camera_id", "band", "view", "width", "height", "frame_id",
                        "arrival_time", "camera_settings", "daq_event", "ins", "gps", "pose_missing", "partial",
                        "effort", "flight", "project"}) {
    EXPECT_TRUE(j.contains(k)) << k;
  }
  EXPECT_TRUE(j["camera_settings"].contains("nuc_age_s"));
  EXPECT_TRUE(j["daq_event"].contains("trigger_seq"));
}

TEST(ImageMeta, RejectsMalformedDocuments) {
  Rng rng(5);
  auto j = to_json(random_meta(rng));
  EXPECT_THROW(parse_image_meta("{not json"), ParseError);
  auto missing = j;
  missing.erase("gps");
  EXPECT_THROW(image_meta_from_json(missing), ValidationError);
  auto typed = j;
  typed["width"] = "wide";
  EXPECT_THROW(image_meta_from_json(typed), ValidationError);
  auto schema = j;
  schema["schema"] = "other/9";
  EXPECT_THROW(image_meta_from_json(schema), ValidationError);
  auto time = j;
  time["daq_event"]["time"] = "yesterday";
  EXPECT_THROW(image_meta_from_json(time), ValidationError);
}

TEST(FlightManifest, JsonRoundTrip) {
  FlightManifest m;
  m.effort = "a_b";
  m.flight = 9;
  m.project = "p";
  m.cameras = {"ir_C", "rgb_C"};
  m.mount_deg[View::L] = 25.0;
  m.collection_mode = CollectionMode::off;
  m.score_threshold = 0.25;
  const FlightManifest back = manifest_from_json(nlohmann::json::parse(to_json(m).dump()));
  EXPECT_EQ(to_json(back), to_json(m));
}

// ------------------------------------------------------------------ codecs

TEST(Encode, LosslessFormatsRoundTrip) {
  Rng rng(8);
  Image16 ir(64, 40, 1);
  for (auto& v : ir.pixels()) v = static_cast<std::uint16_t>(rng.below(65536));
  const auto tif = encode_image(ir, Band::ir);
  EXPECT_EQ(std::get<Image16>(decode_image(tif)), ir);
  EXPECT_EQ(encode_image(ir, Band::ir), tif);

  Image8 uv(33, 17, 1);
  for (auto& v : uv.pixels()) v = static_cast<std::uint8_t>(rng.below(256));
  EXPECT_EQ(std::get<Image8>(decode_image(encode_image(uv, Band::uv))), uv);
}

TEST(Encode, JpegIsCloseAndDeterministic) {
  Image8 rgb(96, 64, 3);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 96; ++x) {
      rgb.at(x, y, 0) = static_cast<std::uint8_t>(2 * x);
      rgb.at(x, y, 1) = static_cast<std::uint8_t>(3 * y);
      rgb.at(x, y, 2) = 200;
    }
  }
  const auto jpg = encode_image(rgb, Band::rgb);
  EXPECT_EQ(encode_image(rgb, Band::rgb), jpg);
  const Image8 back = std::get<Image8>(decode_image(jpg));
  ASSERT_EQ(back.channels(), 3);
  double err = 0.0;
  for (std::size_t i = 0; i < rgb.pixels().size(); ++i) err += std::abs(rgb.pixels()[i] - back.pixels()[i]);
  EXPECT_LT(err / static_cast<double>(rgb.pixels().size()), 2.0);
  // Channel order survives: red ramps with x.
  EXPECT_GT(back.at(90, 10, 0), back.at(5, 10, 0) + 100);
}

TEST(Encode, FormatMismatchAndThumbnails) {
  EXPECT_THROW(encode_image(Image8(4, 4, 1), Band::rgb), ValidationError);
  EXPECT_THROW(encode_image(Image8(4, 4, 1), Band::ir), ValidationError);
  EXPECT_THROW(encode_image(Image16(4, 4, 1), Band::uv), ValidationError);
  Image16 ir(640, 512, 1, 1000);
  ir.at(10, 10) = 3000;
  const Image8 th = std::get<Image8>(decode_image(encode_thumbnail(ir, 128)));
  EXPECT_EQ(th.width(), 128);
  EXPECT_EQ(th.height(), 102);
}

// ----------------------------------------------------------------- policy

sync::Sample synthetic_sample(std::int64_t seq, bool partial = false) {
  sync::Sample s;
  s.trigger = {seq, Timestamp::from_micros(1'744'411'407'000'000 + seq * 1'000'000)};
  s.partial = partial;
  s.ins.time = s.trigger.time;
  s.ins.position = {64.5, -165.4, 305.0};
  std::uint64_t id = static_cast<std::uint64_t>(seq) * 9;
  for (Band b : {Band::ir, Band::rgb, Band::uv}) {
    for (View v : {View::L, View::C, View::R}) {
      sync::FrameHeader f;
      f.camera_id = geom::camera_id_for(b, v);
      f.frame_id = ++id;
      f.arrival_time = s.trigger.time + 1000;
      f.settings = {1.0, 500.0, b == Band::ir ? std::optional<double>(12.0) : std::nullopt};
      if (b == Band::ir) {
        f.payload = std::make_shared<BufferPayload>(Image16(16, 12, 1, 1000));
      } else {
        f.payload = std::make_shared<BufferPayload>(Image8(16, 12, b == Band::rgb ? 3 : 1, 100));
      }
      s.frames[f.camera_id] = f;
    }
  }
  return s;
}

detect::Detection det(std::int64_t seq, double score) {
  detect::Detection d;
  d.camera_id = "ir_C";
  d.trigger_seq = seq;
  d.score = score;
  return d;
}

FlightManifest triggered_manifest() {
  FlightManifest m;
  m.effort = "ice_seals_2025";
  m.flight = 107;
  m.collection_mode = CollectionMode::detection_triggered;
  m.score_threshold = 0.5;
  return m;
}

TEST(ArchiveSample, DetectionTriggeredWritesWholeSample) {
  MemorySink sink;
  const std::vector<detect::Detection> dets = {det(4, 0.2), det(4, 0.7)};
  const ArchivedSample a = archive_sample(synthetic_sample(4), dets, triggered_manifest(), sink);
  EXPECT_TRUE(a.archived);
  EXPECT_EQ(a.metadata.size(), 9u);
  EXPECT_EQ(a.files.size(), 18u);
  int images = 0, docs = 0;
  for (const auto& [path, bytes] : sink.files()) {
    (fs::path(path).extension() == ".json" ? docs : images)++;
    EXPECT_FALSE(bytes.empty()) << path;
  }
  EXPECT_EQ(images, 9);
  EXPECT_EQ(docs, 9);
  EXPECT_TRUE(sink.files().count("imagery/ice_seals_2025_fl107_C_20250411_224331.000000_ir.tif"));
  EXPECT_TRUE(sink.files().count("imagery/ice_seals_2025_fl107_R_20250411_224331.000000_rgb.jpg"));
  EXPECT_TRUE(sink.files().count("imagery/ice_seals_2025_fl107_L_20250411_224331.000000_uv.json"));
}

TEST(ArchiveSample, BelowThresholdOrOtherTriggerIsSkipped) {
  MemorySink sink;
  EXPECT_FALSE(archive_sample(synthetic_sample(4), std::vector{det(4, 0.3)}, triggered_manifest(), sink).archived);
  EXPECT_FALSE(archive_sample(synthetic_sample(4), std::vector{det(5, 0.9)}, triggered_manifest(), sink).archived);
  EXPECT_TRUE(archive_sample(synthetic_sample(4), std::vector{det(4, 0.5)}, triggered_manifest(), sink).archived);
  FlightManifest off = triggered_manifest();
  off.collection_mode = CollectionMode::off;
  MemorySink none;
  EXPECT_FALSE(archive_sample(synthetic_sample(4), std::vector{det(4, 1.0)}, off, none).archived);
  EXPECT_TRUE(none.files().empty());
}

TEST(ArchiveSample, MetadataCarriesSampleState) {
  MemorySink sink;
  FlightManifest m = triggered_manifest();
  m.collection_mode = CollectionMode::archive_all;
  m.project = "desk";
  const ArchivedSample a = archive_sample(synthetic_sample(2, true), {}, m, sink);
  ASSERT_EQ(a.metadata.size(), 9u);
  for (const auto& meta : a.metadata) {
    EXPECT_TRUE(meta.partial);
    EXPECT_EQ(parse_image_name(meta.image_name).time, meta.event_time);
    EXPECT_EQ(meta.trigger_seq, 2);
    EXPECT_EQ(meta.project, "desk");
    EXPECT_EQ(meta.settings.nuc_age_s.has_value(), meta.band == Band::ir);
    const auto& bytes = sink.files().at("imagery/" + meta.image_name + ".json");
    EXPECT_EQ(parse_image_meta(std::string(bytes.begin(), bytes.end())), meta);
  }
}

class FailingSink final : public ArchiveSink {
 public:
  explicit FailingSink(int allowed) : allowed_(allowed) {}
  void write(const std::string& path, std::span<const std::uint8_t>) override {
    if (allowed_-- <= 0) throw IoError("disk full writing '" + path + "'");
  }

 private:
  int allowed_;
};

TEST(Archiver, SinkFailurePropagatesAndAccountingHolds) {
  FailingSink sink(3);
  FlightManifest m = triggered_manifest();
  m.collection_mode = CollectionMode::archive_all;
  Archiver archiver(m, sink);
  try {
    archiver.archive(synthetic_sample(0), {});
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("imagery/"), std::string::npos);
  }
  const ArchiveCounters c = archiver.counters();
  EXPECT_EQ(c.samples_seen, 1);
  EXPECT_EQ(c.samples_seen, c.samples_archived + c.samples_skipped);
}

TEST(Archiver, AccountingOverRandomModes) {
  Rng rng(17);
  MemorySink sink;
  Archiver archiver(triggered_manifest(), sink);
  std::int64_t expected_archived = 0;
  for (int seq = 0; seq < 200; ++seq) {
    const auto mode = static_cast<CollectionMode>(rng.below(3));
    archiver.set_mode(mode);
    const double best = rng.uniform();
    const bool want = mode == CollectionMode::archive_all ||
                      (mode == CollectionMode::detection_triggered && best >= 0.5);
    const bool got = archiver.archive(synthetic_sample(seq), std::vector{det(seq, best)}).archived;
    ASSERT_EQ(got, want);
    expected_archived += want;
    const ArchiveCounters c = archiver.counters();
    ASSERT_EQ(c.samples_seen, seq + 1);
    ASSERT_EQ(c.samples_seen, c.samples_archived + c.samples_skipped);
  }
  EXPECT_EQ(archiver.counters().samples_archived, expected_archived);
  EXPECT_EQ(archiver.counters().images_written, 9 * expected_archived);
  EXPECT_EQ(static_cast<std::int64_t>(sink.files().size()), 18 * expected_archived);
  EXPECT_THROW(archiver.set_mode(CollectionMode::off, 2.0), ValidationError);
  EXPECT_EQ(archiver.manifest().score_threshold, 0.5);
}

// ------------------------------------------------------------ flight folder

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("aerosurvey_archive_" + std::to_string(mix64(
                                                                     reinterpret_cast<std::uintptr_t>(this))));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(FlightArchiveTest, TenTriggerSimulationArchiveAll) {
  sim::SimConfig cfg;
  cfg.plan.duration_s = 10.0;
  cfg.seed = 4;
  const sim::SimulatedFlight flight = sim::simulate_flight(cfg);
  std::vector<std::string> cams;
  for (const auto& m : cfg.rig) cams.push_back(m.camera_id);
  const sync::Assembly asm_ = sync::assemble(flight.triggers, flight.frames, cams, flight.ins);
  ASSERT_EQ(asm_.samples.size(), 10u);

  TempDir dir;
  FlightManifest m;
  m.effort = "ice_seals_2025";
  m.flight = 107;
  m.cameras = cams;
  FlightArchive folder(dir.path(), m);
  Archiver archiver(m, folder);
  for (const auto& s : asm_.samples) archiver.archive(s, {});
  for (const char* sub : {"imagery", "detections", "logs", "config"}) {
    EXPECT_TRUE(fs::is_directory(dir.path() / "ice_seals_2025_fl107" / sub)) << sub;
  }

  const auto stems = folder.list_images();
  EXPECT_EQ(stems.size(), 90u);
  for (const auto& s : stems) EXPECT_NO_THROW(parse_image_name(s)) << s;
  const auto metas = read_flight_metadata(folder.folder());
  ASSERT_EQ(metas.size(), 90u);
  for (const auto& meta : metas) EXPECT_EQ(parse_image_name(meta.image_name).time, meta.event_time);
  EXPECT_EQ(archiver.counters().images_written, 90);
  EXPECT_EQ(archiver.counters().samples_archived, 10);

  // Decoded IR pixels equal the rendered frame.
  const auto& s0 = asm_.samples.front();
  const auto& ir = s0.frames.at("ir_C");
  const std::string stem = format_image_name(m, View::C, s0.trigger.time, Band::ir);
  std::ifstream in(folder.imagery_dir() / (stem + ".tif"), std::ios::binary);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(std::get<Image16>(decode_image(bytes)), std::get<Image16>(ir.payload->render()));
}

TEST(FlightArchiveTest, ConfigSnapshotOnceAndCompletenessChecks) {
  TempDir dir;
  FlightManifest m = triggered_manifest();
  FlightArchive folder(dir.path(), m);
  SystemConfigSnapshot snap;
  snap.pipeline = "ir_hotspot";
  snap.manifest = m;
  snap.cameras = sim::default_rig();
  folder.write_config_snapshot(snap);
  EXPECT_THROW(folder.write_config_snapshot(snap), ValidationError);
  EXPECT_TRUE(fs::exists(folder.config_dir() / "system_config.json"));
  EXPECT_TRUE(fs::exists(folder.config_dir() / "rgb_L.yaml"));

  std::vector<detect::Detection> dets = {det(0, 0.9)};
  const std::vector<std::string> processed = {"a", "b"};
  folder.write_detections(dets, processed);
  EXPECT_EQ(detect::read_detections_csv(folder.detections_dir() / "detections.csv"), dets);

  MemorySink mem;
  FlightManifest all = m;
  all.collection_mode = CollectionMode::archive_all;
  archive_sample(synthetic_sample(1), {}, all, folder);
  EXPECT_EQ(read_flight_metadata(folder.folder()).size(), 9u);
  // An image without its document is an error, never silently accepted.
  const std::string stem = format_image_name(all, View::C, synthetic_sample(1).trigger.time, Band::uv);
  fs::remove(folder.imagery_dir() / (stem + ".json"));
  EXPECT_THROW(read_flight_metadata(folder.folder()), ValidationError);
}

TEST(FlightArchiveTest, UnwritableFolderIsIoError) {
  TempDir dir;
  FlightManifest m = triggered_manifest();
  FlightArchive folder(dir.path(), m);
  fs::remove_all(folder.imagery_dir());
  const std::vector<std::uint8_t> bytes = {1, 2, 3};
  try {
    folder.write("imagery/x.png", bytes);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("imagery/x.png"), std::string::npos);
  }
}

}  // namespace
}  // namespace aerosurvey::archive
