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


#include "aerosurvey/service/stream.hpp"

#include <fmt/format.h>

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "aerosurvey/archive/encode.hpp"
#include "aerosurvey/archive/metadata.hpp"
#include "aerosurvey/core/csv.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/camera_io.hpp"

namespace aerosurvey::service {
namespace fs = std::filesystem;

namespace {

class SimulatorSource final : public StreamSource {
 public:
  explicit SimulatorSource(const sim::SimConfig& config) : sim_(config) {}

  bool done() const override { return sim_.done(); }
  std::optional<sync::TriggerEvent> peek() const override {
    if (sim_.done()) return std::nullopt;
    return sim_.triggers()[next_];
  }
  sim::FlightSimulator::Step step() override {
    ++next_;
    return sim_.step();
  }
  sim::CameraControl control(const std::string& camera_id) const override { return sim_.control(camera_id); }
  bool set_control(const std::string& camera_id, const sim::CameraControl& control) override {
    sim_.set_control(camera_id, control);
    return true;
  }

 private:
  sim::FlightSimulator sim_;
  std::size_t next_ = 0;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", p.string()));
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", p.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Pixels of a recorded frame, decoded from disk on each render.
class FilePayload final : public FramePayload {
 public:
  FilePayload(fs::path path, int width, int height) : path_(std::move(path)), width_(width), height_(height) {}

  int width() const override { return width_; }
  int height() const override { return height_; }
  ImageBuffer render() const override {
    const std::string bytes = slurp(path_);
    ImageBuffer im = archive::decode_image(
        std::span(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
    if (image_width(im) != width_ || image_height(im) != height_) {
      throw ValidationError(fmt::format("'{}' is {}x{}, expected {}x{}", path_.string(), image_width(im),
                                        image_height(im), width_, height_));
    }
    return im;
  }

 private:
  fs::path path_;
  int width_;
  int height_;
};

struct RecordedFrame {
  std::int64_t step = 0;
  sync::FrameHeader header;
};

class RecordedSource final : public StreamSource {
 public:
  explicit RecordedSource(const fs::path& dir) : info_(read_stream_info(dir)) {
    std::map<std::string, geom::CameraModel> models;
    for (const auto& m : info_.rig) models[m.camera_id] = m;

    const csv::Table trig = csv::Table::read_file(dir / "triggers.csv");
    trig.require({"seq", "time_us"});
    for (std::size_t r = 0; r < trig.rows(); ++r) {
      triggers_.push_back({trig.integer(r, "seq"), Timestamp::from_micros(trig.integer(r, "time_us"))});
    }

    std::istringstream ins(slurp(dir / "ins.jsonl"));
    std::string line;
    while (std::getline(ins, line)) {
      if (line.empty()) continue;
      try {
        poses_.push_back(archive::ins_pose_from_json(nlohmann::json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw ValidationError(fmt::format("ins.jsonl: {}", e.what()));
      }
    }

    const csv::Table fr = csv::Table::read_file(dir / "frames.csv");
    fr.require({"step", "frame_id", "camera_id", "arrival_us", "gain_db", "exposure_us", "nuc_age_s", "file"});
    for (std::size_t r = 0; r < fr.rows(); ++r) {
      RecordedFrame f;
      f.step = fr.integer(r, "step");
      f.header.frame_id = static_cast<std::uint64_t>(fr.integer(r, "frame_id"));
      f.header.camera_id = fr.text(r, "camera_id");
      f.header.arrival_time = Timestamp::from_micros(fr.integer(r, "arrival_us"));
      f.header.settings.gain_db = fr.number(r, "gain_db");
      f.header.settings.exposure_us = fr.number(r, "exposure_us");
      if (!fr.text(r, "nuc_age_s").empty()) f.header.settings.nuc_age_s = fr.number(r, "nuc_age_s");
      const std::string& file = fr.text(r, "file");
      if (file.empty()) {
        throw ValidationError(fmt::format("frames.csv row {}: recording has no images (record with images on)", r + 1));
      }
      const auto m = models.find(f.header.camera_id);
      if (m == models.end()) throw ValidationError(fmt::format("frames.csv: unknown camera '{}'", f.header.camera_id));
      f.header.payload =
          std::make_shared<FilePayload>(dir / file, m->second.intrinsics.width, m->second.intrinsics.height);
      frames_[f.step].push_back(std::move(f.header));
    }
    for (const auto& m : info_.rig) controls_[m.camera_id] = sim::default_control(m.band);
  }

  bool done() const override { return next_ >= triggers_.size(); }
  std::optional<sync::TriggerEvent> peek() const override {
    if (done()) return std::nullopt;
    return triggers_[next_];
  }
  sim::FlightSimulator::Step step() override {
    if (done()) throw ValidationError("recorded stream already finished");
    const std::size_t k = next_++;
    sim::FlightSimulator::Step st;
    st.trigger = triggers_[k];
    const bool last = k + 1 >= triggers_.size();
    while (next_pose_ < poses_.size() && (last || poses_[next_pose_].time < triggers_[k + 1].time)) {
      st.ins.push_back(poses_[next_pose_++]);
    }
    const auto it = frames_.find(static_cast<std::int64_t>(k));
    if (it != frames_.end()) st.frames = it->second;
    st.truth.seq = st.trigger.seq;
    st.truth.time = st.trigger.time;
    for (const auto& f : st.frames) st.truth.frames.push_back({f.frame_id, f.camera_id, f.arrival_time});
    return st;
  }
  sim::CameraControl control(const std::string& camera_id) const override { return controls_.at(camera_id); }
  bool set_control(const std::string&, const sim::CameraControl&) override { return false; }

 private:
  StreamInfo info_;
  std::vector<sync::TriggerEvent> triggers_;
  std::vector<geom::InsPose> poses_;
  std::map<std::int64_t, std::vector<sync::FrameHeader>> frames_;
  std::map<std::string, sim::CameraControl> controls_;
  std::size_t next_ = 0;
  std::size_t next_pose_ = 0;
};

}  // namespace

std::unique_ptr<StreamSource> simulator_source(const sim::SimConfig& config) {
  return std::make_unique<SimulatorSource>(config);
}

std::unique_ptr<StreamSource> recorded_source(const fs::path& dir) { return std::make_unique<RecordedSource>(dir); }

RecordSummary record_stream(const sim::SimConfig& config, const fs::path& dir, bool images) {
  fs::create_directories(dir / "cameras");
  if (images) fs::create_directories(dir / "frames");
  geom::save_camera_set(config.rig, dir / "cameras");
  {
    const nlohmann::ordered_json info = {
        {"schema", "aerosurvey.stream/1"},
        {"origin", {{"lat", config.plan.origin.lat}, {"lon", config.plan.origin.lon}, {"alt", config.plan.origin.alt}}},
        {"ground_up", config.ground_up},
        {"trigger_rate_hz", config.plan.trigger_rate_hz},
        {"seed", config.seed},
        {"start_time", config.plan.start_time.iso8601()},
        {"images", images}};
    open_out(dir / "stream.json") << info.dump(2) << '\n';
  }
  auto triggers = open_out(dir / "triggers.csv");
  auto ins = open_out(dir / "ins.jsonl");
  auto frames = open_out(dir / "frames.csv");
  auto truth = open_out(dir / "ground_truth.jsonl");
  triggers << "seq,time_us\n";
  frames << "step,frame_id,camera_id,arrival_us,gain_db,exposure_us,nuc_age_s,file\n";

  RecordSummary out;
  sim::FlightSimulator simulator(config);
  sim::GroundTruth gt;
  for (std::int64_t k = 0; !simulator.done(); ++k) {
    sim::FlightSimulator::Step st = simulator.step();
    triggers << st.trigger.seq << ',' << st.trigger.time.micros() << '\n';
    ++out.triggers;
    for (const auto& p : st.ins) {
      ins << archive::to_json(p).dump() << '\n';
      ++out.poses;
    }
    for (const auto& f : st.frames) {
      std::string file;
      if (images) {
        std::string_view ext;
        const auto bytes = archive::encode_lossless(f.payload->render(), &ext);
        file = fmt::format("frames/{:08d}{}", f.frame_id, ext);
        open_out(dir / file).write(reinterpret_cast<const char*>(bytes.data()),
                                   static_cast<std::streamsize>(bytes.size()));
        ++out.images;
      }
      const auto& s = f.settings;
      frames << k << ',' << f.frame_id << ',' << f.camera_id << ',' << f.arrival_time.micros() << ','
             << csv::format_double(s.gain_db) << ',' << csv::format_double(s.exposure_us) << ','
             << (s.nuc_age_s ? csv::format_double(*s.nuc_age_s) : std::string()) << ',' << file << '\n';
      ++out.frames;
    }
    gt.samples.push_back(std::move(st.truth));
  }
  sim::write_ground_truth_jsonl(gt, truth);
  for (auto* s : {&triggers, &ins, &frames, &truth}) {
    s->flush();
    if (!*s) throw IoError(fmt::format("failed writing stream into '{}'", dir.string()));
  }
  return out;
}

StreamInfo read_stream_info(const fs::path& dir) {
  const fs::path p = dir / "stream.json";
  if (!fs::exists(p)) throw IoError(fmt::format("'{}' is not a recorded stream (no stream.json)", dir.string()));
  StreamInfo info;
  try {
    const nlohmann::json j = nlohmann::json::parse(slurp(p));
    const auto& o = j.at("origin");
    info.origin = {o.at("lat").get<double>(), o.at("lon").get<double>(), o.at("alt").get<double>()};
    info.ground_up = j.at("ground_up").get<double>();
    info.trigger_rate_hz = j.at("trigger_rate_hz").get<double>();
    info.seed = j.at("seed").get<std::uint64_t>();
    info.start_time = Timestamp::parse_iso8601(j.at("start_time").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("'{}': {}", p.string(), e.what()));
  }
  info.rig = geom::load_camera_set(dir / "cameras");
  if (info.rig.empty()) throw ValidationError(fmt::format("'{}' has no camera models", dir.string()));
  return info;
}

}  // namespace aerosurvey::service
