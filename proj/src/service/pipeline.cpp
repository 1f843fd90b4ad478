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


#include "aerosurvey/service/pipeline.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "aerosurvey/archive/metadata.hpp"
#include "aerosurvey/core/csv.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/camera_io.hpp"
#include "aerosurvey/sim/config.hpp"

namespace aerosurvey::service {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

// ---------------------------------------------------------------- pipelines

const std::vector<PipelineInfo>& pipelines() {
  static const std::vector<PipelineInfo> kPipelines = {
      {"ir_hotspot", "thermal hot spots, geolocated through the IR camera", false, 0},
      {"ir_rgb_seal", "hot spots classified as ringed or bearded seals on 512x512 color chips", true, 512},
      {"ir_rgb_polar_bear", "hot spots classified as polar bears on 416x416 color chips", true, 416},
      {"ir_rgb_echo", "hot spots passed through color chips unchanged (plumbing check)", true, 512},
  };
  return kPipelines;
}

const PipelineInfo& find_pipeline(const std::string& name) {
  for (const auto& p : pipelines()) {
    if (p.name == name) return p;
  }
  std::string names;
  for (const auto& p : pipelines()) names += (names.empty() ? "" : ", ") + p.name;
  throw ConfigurationError(fmt::format("unknown pipeline '{}' (available: {})", name, names));
}

namespace {

detect::ColorTemplate template_for(sim::Species sp, detect::Label label, const sim::NoiseParams& noise) {
  detect::ColorTemplate t{label, {}};
  const sim::Target nominal = sim::species_template(sp);
  for (int c = 0; c < 3; ++c) t.delta[c] = nominal.rgb_signature[c] - noise.rgb_background[c];
  return t;
}

}  // namespace

std::unique_ptr<detect::SecondStageDetector> make_second_stage(const std::string& name,
                                                               const sim::NoiseParams& noise) {
  const PipelineInfo& info = find_pipeline(name);
  if (!info.second_stage) return nullptr;
  if (name == "ir_rgb_echo") return std::make_unique<detect::EchoDetector>(detect::Label::hot_spot);
  std::vector<detect::ColorTemplate> templates;
  if (name == "ir_rgb_seal") {
    templates.push_back(template_for(sim::Species::ringed_seal, detect::Label::ringed_seal, noise));
    templates.push_back(template_for(sim::Species::bearded_seal, detect::Label::bearded_seal, noise));
  } else {
    templates.push_back(template_for(sim::Species::polar_bear, detect::Label::polar_bear, noise));
  }
  return std::make_unique<detect::TemplateClassifier>(std::move(templates));
}

// -------------------------------------------------------------- run config

namespace {

template <typename T>
T get(const YAML::Node& n, const char* key, T fallback) {
  if (!n || !n.IsMap()) return fallback;
  const YAML::Node v = n[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception& e) {
    throw ValidationError(fmt::format("config key '{}': {}", key, e.what()));
  }
}

void check_keys(const YAML::Node& n, const char* section, std::initializer_list<const char*> allowed) {
  if (!n || n.IsNull()) return;
  if (!n.IsMap()) throw ValidationError(fmt::format("'{}' section must be a mapping", section));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ValidationError(fmt::format("unknown key '{}' in '{}' section", key, section));
    }
  }
}

}  // namespace

RunConfig run_config_from_yaml(const YAML::Node& root) {
  RunConfig rc;
  rc.sim = sim::sim_config_from_yaml(root);
  const double mount = get(root["rig"], "mount_angle_deg", 30.0);
  rc.manifest.mount_deg = {{geom::View::L, mount}, {geom::View::C, 0.0}, {geom::View::R, mount}};

  const YAML::Node a = root["archive"];
  check_keys(a, "archive", {"effort", "flight", "project", "collection_mode", "score_threshold"});
  rc.manifest.effort = get<std::string>(a, "effort", rc.manifest.effort);
  rc.manifest.flight = get(a, "flight", rc.manifest.flight);
  rc.manifest.project = get<std::string>(a, "project", rc.manifest.project);
  if (a && a["collection_mode"]) {
    rc.manifest.collection_mode = archive::parse_collection_mode(a["collection_mode"].as<std::string>());
  }
  rc.manifest.score_threshold = get(a, "score_threshold", rc.manifest.score_threshold);

  const YAML::Node p = root["pipeline"];
  check_keys(p, "pipeline", {"name", "hotspot", "nms_iou", "min_hotspot_score"});
  rc.pipeline = get<std::string>(p, "name", rc.pipeline);
  const YAML::Node h = p ? p["hotspot"] : YAML::Node();
  check_keys(h, "pipeline.hotspot", {"threshold_sigmas", "min_area", "max_area", "score_sigmas", "min_sigma"});
  rc.hotspot.threshold_sigmas = get(h, "threshold_sigmas", rc.hotspot.threshold_sigmas);
  rc.hotspot.min_area = get(h, "min_area", rc.hotspot.min_area);
  rc.hotspot.max_area = get(h, "max_area", rc.hotspot.max_area);
  rc.hotspot.score_sigmas = get(h, "score_sigmas", rc.hotspot.score_sigmas);
  rc.hotspot.min_sigma = get(h, "min_sigma", rc.hotspot.min_sigma);
  rc.fusion.nms_iou = get(p, "nms_iou", rc.fusion.nms_iou);
  rc.fusion.min_hotspot_score = get(p, "min_hotspot_score", rc.fusion.min_hotspot_score);

  const YAML::Node t = root["tracking"];
  check_keys(t, "tracking", {"radius_m", "max_gap"});
  rc.tracking.radius_m = get(t, "radius_m", rc.tracking.radius_m);
  rc.tracking.max_gap = get(t, "max_gap", rc.tracking.max_gap);

  const YAML::Node s = root["assembler"];
  check_keys(s, "assembler", {"tolerance_ms", "grace_ms", "max_pose_gap_ms"});
  rc.assembler.tolerance_us = seconds_to_micros(get(s, "tolerance_ms", rc.assembler.tolerance_us / 1000.0) / 1000.0);
  if (s && s["grace_ms"]) rc.assembler.grace_us = seconds_to_micros(s["grace_ms"].as<double>() / 1000.0);
  rc.assembler.max_pose_gap_us =
      seconds_to_micros(get(s, "max_pose_gap_ms", rc.assembler.max_pose_gap_us / 1000.0) / 1000.0);

  const YAML::Node o = root["output"];
  check_keys(o, "output", {"root", "disk_quota_bytes"});
  rc.output_root = get<std::string>(o, "root", rc.output_root.string());
  rc.disk_quota_bytes = get(o, "disk_quota_bytes", rc.disk_quota_bytes);

  find_pipeline(rc.pipeline);
  rc.hotspot.validate();
  rc.manifest.validate();
  return rc;
}

// ----------------------------------------------------------------- commands

ordered_json to_json(const Command& c) {
  return std::visit(
      [](const auto& x) -> ordered_json {
        using T = std::decay_t<decltype(x)>;
        const auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
        if constexpr (std::is_same_v<T, CameraParamsCommand>) {
          return {{"type", "camera_params"},
                  {"camera_id", x.camera_id},
                  {"gain_db", opt(x.gain_db)},
                  {"exposure_us", opt(x.exposure_us)},
                  {"nuc_interval_s", opt(x.nuc_interval_s)}};
        } else if constexpr (std::is_same_v<T, ModeCommand>) {
          return {{"type", "mode"}, {"mode", archive::to_string(x.mode)}, {"score_threshold", opt(x.score_threshold)}};
        } else {
          return {{"type", "pipeline"}, {"name", x.name}};
        }
      },
      c);
}

ordered_json to_json(const ActionLogEntry& e) {
  return {{"action_id", e.action_id},
          {"wall_time", e.wall_time},
          {"command", e.command},
          {"effective_seq", e.effective_seq},
          {"effective_time", e.effective_time.iso8601()}};
}

namespace {

void check_range(const char* what, double v, double lo, double hi, const char* unit) {
  if (!(v >= lo && v <= hi)) {
    throw ValidationError(fmt::format("{} {} {} outside [{}, {}] {}", what, v, unit, lo, hi, unit));
  }
}

}  // namespace

void validate_command(const Command& command, const RunConfig& config) {
  if (const auto* c = std::get_if<CameraParamsCommand>(&command)) {
    const auto it = std::find_if(config.sim.rig.begin(), config.sim.rig.end(),
                                 [&](const geom::CameraModel& m) { return m.camera_id == c->camera_id; });
    if (it == config.sim.rig.end()) throw ConfigurationError(fmt::format("unknown camera '{}'", c->camera_id));
    if (!c->gain_db && !c->exposure_us && !c->nuc_interval_s) throw ValidationError("no parameter given");
    const ParamBounds& b = config.bounds;
    if (it->band == geom::Band::ir) {
      if (c->gain_db || c->exposure_us) {
        throw ValidationError(fmt::format("{}: gain and exposure apply to color and UV cameras only", c->camera_id));
      }
    } else if (c->nuc_interval_s) {
      throw ValidationError(fmt::format("{}: nuc_interval applies to thermal cameras only", c->camera_id));
    }
    if (c->gain_db) check_range("gain", *c->gain_db, b.gain_min_db, b.gain_max_db, "dB");
    if (c->exposure_us) check_range("exposure", *c->exposure_us, b.exposure_min_us, b.exposure_max_us, "us");
    if (c->nuc_interval_s) check_range("nuc_interval", *c->nuc_interval_s, b.nuc_min_s, b.nuc_max_s, "s");
  } else if (const auto* m = std::get_if<ModeCommand>(&command)) {
    if (m->score_threshold) check_range("score_threshold", *m->score_threshold, 0.0, 1.0, "");
  } else {
    find_pipeline(std::get<PipelineCommand>(command).name);
  }
}

// --------------------------------------------------------------------- run

namespace {

std::string wall_clock_now() {
  const auto now = std::chrono::system_clock::now();
  const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count();
  return Timestamp::from_micros(us).iso8601();
}

// Discards archived bytes; used when the run keeps nothing on disk.
class DiscardSink final : public archive::ArchiveSink {
 public:
  void write(const std::string&, std::span<const std::uint8_t>) override {}
};

// Color frames are histogrammed on luma.
template <typename T>
Histogram histogram_of(const Image<T>& im) {
  Histogram h;
  if (im.empty()) return h;
  const auto px = im.pixels();
  const int c = im.channels();
  std::vector<double> values;
  values.reserve(px.size() / c);
  for (std::size_t i = 0; i + c <= px.size(); i += c) {
    values.push_back(c >= 3 ? 0.299 * px[i] + 0.587 * px[i + 1] + 0.114 * px[i + 2] : double(px[i]));
  }
  if constexpr (sizeof(T) == 1) {
    h.lo = 0.0;
    h.hi = 256.0;
  } else {
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    h.lo = std::floor(*mn);
    h.hi = std::floor(*mx) + 1.0;
  }
  const double width = (h.hi - h.lo) / kHistogramBins;
  for (double v : values) {
    const int b = std::clamp(static_cast<int>((v - h.lo) / width), 0, kHistogramBins - 1);
    ++h.counts[b];
  }
  return h;
}

constexpr int kHistogramWindow = 256;

Histogram frame_histogram(const FramePayload& payload) {
  const int w = std::min(kHistogramWindow, payload.width());
  const int hgt = std::min(kHistogramWindow, payload.height());
  const PixelWindow win{(payload.width() - w) / 2, (payload.height() - hgt) / 2, w, hgt};
  const ImageBuffer im = payload.render_window(win);
  return std::visit([](const auto& x) { return histogram_of(x); }, im);
}

std::vector<std::string> camera_ids(const std::vector<geom::CameraModel>& rig) {
  std::vector<std::string> ids;
  for (const auto& m : rig) ids.push_back(m.camera_id);
  return ids;
}

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace

namespace {

RunConfig with_replay(RunConfig config) {
  if (config.replay.empty()) return config;
  const StreamInfo info = read_stream_info(config.replay);
  config.sim.rig = info.rig;
  config.sim.plan.origin = info.origin;
  config.sim.plan.trigger_rate_hz = info.trigger_rate_hz;
  config.sim.plan.start_time = info.start_time;
  config.sim.ground_up = info.ground_up;
  config.sim.seed = info.seed;
  config.manifest.cameras.clear();
  config.keep_truth = false;
  return config;
}

}  // namespace

FlightRun::FlightRun(RunConfig config, StateStore* store)
    : config_(with_replay(std::move(config))),
      store_(store),
      source_(config_.replay.empty() ? simulator_source(config_.sim) : recorded_source(config_.replay)),
      assembler_(camera_ids(config_.sim.rig), config_.assembler) {
  if (config_.manifest.cameras.empty()) config_.manifest.cameras = camera_ids(config_.sim.rig);
  config_.manifest.validate();
  config_.hotspot.validate();
  for (const auto& m : config_.sim.rig) models_[m.camera_id] = m;
  pipeline_ = config_.pipeline;
  const PipelineInfo& info = find_pipeline(pipeline_);
  second_stage_ = make_second_stage(pipeline_, config_.sim.noise);
  fusion_ = config_.fusion;
  if (info.chip_size) fusion_.chip_width = fusion_.chip_height = info.chip_size;

  if (!config_.output_root.empty()) {
    folder_ = std::make_unique<archive::FlightArchive>(config_.output_root, config_.manifest);
    result_.flight_folder = folder_->folder();
    archiver_ = std::make_unique<archive::Archiver>(config_.manifest, *folder_);
    archive::SystemConfigSnapshot snap;
    snap.pipeline = pipeline_;
    snap.manifest = config_.manifest;
    snap.cameras = config_.sim.rig;
    const auto& plan = config_.sim.plan;
    snap.extra = {{"origin", {{"lat", plan.origin.lat}, {"lon", plan.origin.lon}, {"alt", plan.origin.alt}}},
                  {"ground_up", config_.sim.ground_up},
                  {"seed", config_.sim.seed},
                  {"pattern", sim::to_string(plan.pattern)},
                  {"trigger_rate_hz", plan.trigger_rate_hz},
                  {"start_time", plan.start_time.iso8601()},
                  {"hotspot",
                   {{"threshold_sigmas", config_.hotspot.threshold_sigmas},
                    {"min_area", config_.hotspot.min_area},
                    {"max_area", config_.hotspot.max_area},
                    {"score_sigmas", config_.hotspot.score_sigmas}}}};
    folder_->write_config_snapshot(snap);
  } else {
    discard_ = std::make_unique<DiscardSink>();
    archiver_ = std::make_unique<archive::Archiver>(config_.manifest, *discard_);
  }

  if (store_) {
    store_->publish([&](SystemState& s) {
      const std::uint64_t version = s.version;
      s = SystemState{};
      s.version = version;
      s.run_status = "running";
      s.collection_mode = config_.manifest.collection_mode;
      s.score_threshold = config_.manifest.score_threshold;
      s.pipeline = pipeline_;
      s.counters.disk_space_remaining = config_.disk_quota_bytes;
      for (const auto& m : config_.sim.rig) {
        CameraState c;
        c.camera_id = m.camera_id;
        c.streaming = false;
        const sim::CameraControl& k = source_->control(m.camera_id);
        c.gain_db = k.gain_db;
        c.exposure_us = k.exposure_us;
        if (m.band == geom::Band::ir) c.nuc_interval_s = k.nuc_interval_s;
        s.cameras[m.camera_id] = c;
      }
    });
  }
}

FlightRun::~FlightRun() {
  std::lock_guard lock(mutex_);
  for (auto& p : pending_) {
    p.promise.set_exception(std::make_exception_ptr(ValidationError("run ended before the command took effect")));
  }
  pending_.clear();
}

std::future<Ack> FlightRun::submit(Command command) {
  validate_command(command, config_);
  std::lock_guard lock(mutex_);
  if (finished_) throw ValidationError("run already finished");
  Pending p{next_action_++, wall_clock_now(), std::move(command), {}};
  auto fut = p.promise.get_future();
  pending_.push_back(std::move(p));
  return fut;
}

std::vector<ActionLogEntry> FlightRun::action_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

void FlightRun::log_action(Pending& p, std::int64_t seq, Timestamp time, ordered_json applied) {
  ActionLogEntry e{p.id, p.wall_time, to_json(p.command), seq, time};
  log_.push_back(e);
  p.promise.set_value(Ack{p.id, seq, time, std::move(applied)});
}

void FlightRun::apply_camera_commands(std::int64_t next_seq, Timestamp next_time) {
  std::lock_guard lock(mutex_);
  for (auto it = pending_.begin(); it != pending_.end();) {
    const auto* c = std::get_if<CameraParamsCommand>(&it->command);
    if (!c) {
      ++it;
      continue;
    }
    sim::CameraControl k = source_->control(c->camera_id);
    if (c->gain_db) k.gain_db = *c->gain_db;
    if (c->exposure_us) k.exposure_us = *c->exposure_us;
    if (c->nuc_interval_s) k.nuc_interval_s = *c->nuc_interval_s;
    const bool live = source_->set_control(c->camera_id, k);
    const bool ir = models_.at(c->camera_id).band == geom::Band::ir;
    ordered_json applied = {{"camera_id", c->camera_id}, {"gain_db", k.gain_db}, {"exposure_us", k.exposure_us}};
    applied["nuc_interval_s"] = ir ? ordered_json(k.nuc_interval_s) : ordered_json(nullptr);
    // A recording cannot change its frames; the command is still logged.
    applied["in_effect"] = live;
    if (store_ && live) {
      store_->publish([&](SystemState& s) {
        CameraState& cs = s.cameras[c->camera_id];
        cs.gain_db = k.gain_db;
        cs.exposure_us = k.exposure_us;
        if (ir) cs.nuc_interval_s = k.nuc_interval_s;
      });
    }
    log_action(*it, next_seq, next_time, std::move(applied));
    it = pending_.erase(it);
  }
}

void FlightRun::apply_sample_commands(const sync::Sample& sample) {
  std::lock_guard lock(mutex_);
  for (auto it = pending_.begin(); it != pending_.end();) {
    ordered_json applied;
    if (const auto* m = std::get_if<ModeCommand>(&it->command)) {
      archiver_->set_mode(m->mode, m->score_threshold);
      const archive::FlightManifest man = archiver_->manifest();
      applied = {{"mode", archive::to_string(man.collection_mode)}, {"score_threshold", man.score_threshold}};
      if (store_) {
        store_->publish([&](SystemState& s) {
          s.collection_mode = man.collection_mode;
          s.score_threshold = man.score_threshold;
        });
      }
    } else if (const auto* p = std::get_if<PipelineCommand>(&it->command)) {
      const PipelineInfo& info = find_pipeline(p->name);
      second_stage_ = make_second_stage(p->name, config_.sim.noise);
      fusion_ = config_.fusion;
      if (info.chip_size) fusion_.chip_width = fusion_.chip_height = info.chip_size;
      pipeline_ = p->name;
      applied = {{"pipeline", pipeline_}};
      if (store_) store_->publish([&](SystemState& s) { s.pipeline = pipeline_; });
    } else {
      ++it;
      continue;
    }
    log_action(*it, sample.trigger.seq, sample.trigger.time, std::move(applied));
    it = pending_.erase(it);
  }
}

void FlightRun::step() {
  if (finished_) return;
  if (source_->done()) {
    finish();
    return;
  }
  // Camera changes take effect from the trigger about to fire.
  const auto next = source_->peek();
  apply_camera_commands(next->seq, next->time);

  sim::FlightSimulator::Step st = source_->step();
  assembler_.push_trigger(st.trigger);
  for (const auto& pose : st.ins) assembler_.push_pose(pose);
  for (auto& f : st.frames) assembler_.push_frame(f);
  truth_by_seq_[st.trigger.seq] = std::move(st.truth);
  for (const auto& s : assembler_.poll()) process(s);
}

void FlightRun::process(const sync::Sample& sample) {
  apply_sample_commands(sample);
  const geom::LocalFrame fr = frame();
  detect::FusionResult fusion = detect::late_fusion(sample, models_, config_.hotspot, second_stage_.get(), fusion_,
                                                    config_.sim.ground_up, fr);
  archiver_->archive(sample, fusion.detections);

  std::vector<std::string> names;
  for (const auto& cam : fusion.processed_cameras) {
    const auto& m = models_.at(cam);
    names.push_back(archive::format_image_name(config_.manifest, m.view, sample.trigger.time, m.band));
  }

  ordered_json line = {{"trigger_seq", sample.trigger.seq},
                       {"time", sample.trigger.time.iso8601()},
                       {"pose_missing", sample.pose_missing},
                       {"partial", sample.partial}};
  line["pose"] = sample.pose_missing ? ordered_json(nullptr) : archive::to_json(sample.ins);
  auto cams = ordered_json::array();
  products::FootprintRequest req{sample.trigger.seq, sample.ins, {}};
  for (const auto& [id, f] : sample.frames) {
    cams.push_back(id);
    req.cameras.push_back(id);
  }
  line["cameras"] = cams;
  samples_log_ += line.dump() + "\n";

  {
    std::lock_guard lock(mutex_);
    ++result_.samples;
    result_.detections.insert(result_.detections.end(), fusion.detections.begin(), fusion.detections.end());
    result_.processed_images.insert(result_.processed_images.end(), names.begin(), names.end());
    if (!sample.pose_missing) result_.footprint_requests.push_back(std::move(req));
    for (const auto& [id, f] : sample.frames) latest_[id] = f;
  }
  if (config_.keep_truth) {
    const auto it = truth_by_seq_.find(sample.trigger.seq);
    if (it != truth_by_seq_.end()) result_.truth.push_back(it->second);
  }
  truth_by_seq_.erase(truth_by_seq_.begin(), truth_by_seq_.lower_bound(sample.trigger.seq));

  for (const auto& m : config_.sim.rig) {
    if (sample.frames.count(m.camera_id)) {
      missing_streak_[m.camera_id] = 0;
    } else {
      ++missing_streak_[m.camera_id];
    }
  }
  publish_sample(sample, fusion, archiver_->counters());
}

void FlightRun::publish_sample(const sync::Sample& sample, const detect::FusionResult& fusion,
                               const archive::ArchiveCounters& counters) {
  if (!store_) return;
  std::map<std::string, Histogram> hist;
  for (const auto& [id, f] : sample.frames) {
    if (f.payload) hist[id] = frame_histogram(*f.payload);
  }
  std::map<std::string, int> per_camera;
  for (const auto& d : fusion.detections) ++per_camera[d.camera_id];
  const std::int64_t dropped = assembler_.report().total_missing();
  store_->publish([&](SystemState& s) {
    for (const auto& m : config_.sim.rig) {
      CameraState& c = s.cameras[m.camera_id];
      c.camera_id = m.camera_id;
      c.streaming = missing_streak_[m.camera_id] < config_.stall_samples;
      const auto it = sample.frames.find(m.camera_id);
      if (it == sample.frames.end()) continue;
      const sync::FrameHeader& f = it->second;
      c.last_frame_id = f.frame_id;
      c.last_frame_seq = sample.trigger.seq;
      c.thumbnail_ref = fmt::format("/thumb/{}?frame={}", m.camera_id, f.frame_id);
      c.histogram = hist[m.camera_id];
      c.gain_db = f.settings.gain_db;
      c.exposure_us = f.settings.exposure_us;
      c.nuc_age_s = f.settings.nuc_age_s;
    }
    if (!sample.pose_missing) s.ins = sample.ins;
    s.last_seq = sample.trigger.seq;
    Counters& k = s.counters;
    k.frames_collected += static_cast<std::int64_t>(sample.frames.size());
    k.frames_processed += static_cast<std::int64_t>(fusion.processed_cameras.size());
    k.frames_detected += static_cast<std::int64_t>(per_camera.size());
    k.frames_dropped = std::max(k.frames_dropped, dropped);
    k.detections += static_cast<std::int64_t>(fusion.detections.size());
    k.samples_seen = counters.samples_seen;
    k.samples_archived = counters.samples_archived;
    k.samples_skipped = counters.samples_skipped;
    k.bytes_archived = counters.bytes_written;
    k.disk_space_remaining = std::max<std::int64_t>(0, config_.disk_quota_bytes - counters.bytes_written);
  });
}

void FlightRun::run(double pace) {
  const auto start = std::chrono::steady_clock::now();
  std::int64_t steps = 0;
  try {
    while (!finished_) {
      step();
      ++steps;
      if (pace > 0.0 && !finished_) {
        const double period = 1.0 / config_.sim.plan.trigger_rate_hz / pace;
        std::this_thread::sleep_until(start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                  std::chrono::duration<double>(period * steps)));
      }
    }
  } catch (const std::exception& e) {
    if (store_) {
      const std::string what = e.what();
      store_->publish([&](SystemState& s) {
        s.run_status = "failed";
        s.error = what;
      });
    }
    throw;
  }
}

void FlightRun::finish() {
  if (finished_) return;
  for (const auto& s : assembler_.finish()) process(s);
  result_.drops = assembler_.report();
  result_.archive = archiver_->counters();
  write_outputs();
  {
    std::lock_guard lock(mutex_);
    finished_ = true;
    for (auto& p : pending_) {
      p.promise.set_exception(std::make_exception_ptr(ValidationError("run ended before the command took effect")));
    }
    pending_.clear();
  }
  if (store_) {
    const std::int64_t dropped = result_.drops.total_missing();
    store_->publish([&](SystemState& s) {
      s.run_status = "finished";
      s.counters.frames_dropped = std::max(s.counters.frames_dropped, dropped);
    });
  }
}

products::CoverageSummary FlightRun::coverage() const {
  std::vector<products::FootprintRequest> reqs;
  {
    std::lock_guard lock(mutex_);
    reqs = result_.footprint_requests;
  }
  const geom::LocalFrame fr = frame();
  return products::flight_summary(products::compute_footprints(reqs, models_, config_.sim.ground_up, fr), fr,
                                  config_.sim.ground_up);
}

products::DetectionSummary FlightRun::detection_summary(const products::CoverageSummary& coverage) const {
  std::vector<detect::Detection> dets;
  {
    std::lock_guard lock(mutex_);
    dets = result_.detections;
  }
  const auto tracks = products::track_detections(dets, config_.tracking, frame());
  return products::detection_summary(tracks, coverage);
}

std::optional<sync::FrameHeader> FlightRun::latest_frame(const std::string& camera_id) const {
  std::lock_guard lock(mutex_);
  const auto it = latest_.find(camera_id);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

void FlightRun::write_outputs() {
  if (!folder_) return;
  folder_->write_detections(result_.detections, result_.processed_images);
  folder_->write_text("logs/samples.jsonl", samples_log_);
  ordered_json drops = ordered_json::object();
  for (const auto& [id, c] : result_.drops.cameras) {
    drops[id] = {{"expected", c.expected}, {"received", c.received}, {"missing_seqs", c.missing_seqs},
                 {"orphans", c.orphans},   {"duplicates", c.duplicates}, {"late", c.late}};
  }
  folder_->write_text("logs/drop_report.json", ordered_json{{"cameras", drops}}.dump(2) + "\n");
  std::string log;
  for (const auto& e : action_log()) log += to_json(e).dump() + "\n";
  folder_->write_text("logs/action_log.jsonl", log);
  const archive::ArchiveCounters& a = result_.archive;
  folder_->write_text("logs/archive_counters.json", ordered_json{{"samples_seen", a.samples_seen},
                                                                 {"samples_archived", a.samples_archived},
                                                                 {"samples_skipped", a.samples_skipped},
                                                                 {"images_written", a.images_written},
                                                                 {"bytes_written", a.bytes_written}}
                                                        .dump(2) + "\n");

  const fs::path summary = folder_->folder() / "summary";
  fs::create_directories(summary);
  const products::CoverageSummary cov = coverage();
  write_coverage_products(cov, frame(), summary);
  write_detection_products(detection_summary(cov), summary);
}

RunResult run_flight(const RunConfig& config) {
  FlightRun run(config);
  run.run();
  return run.result();
}

// -------------------------------------------------------------- evaluation

TruthEvaluation evaluate_against_truth(const RunResult& result, const sim::Scene& scene,
                                       const geom::LocalFrame& frame, geom::Band band, double radius_px) {
  const auto in_band = [&](const std::string& cam) { return archive::parse_camera_id(cam).first == band; };
  std::vector<detect::Detection> preds;
  for (const auto& d : result.detections) {
    if (in_band(d.camera_id)) preds.push_back(d);
  }
  std::vector<detect::TruthObject> truth;
  for (const auto& s : result.truth) {
    for (const auto& t : s.sightings) {
      if (!in_band(t.camera_id)) continue;
      // Only frames that reached a sample can be detected.
      const bool emitted = std::any_of(s.frames.begin(), s.frames.end(),
                                       [&](const sim::FrameTruth& f) { return f.camera_id == t.camera_id; });
      if (emitted) truth.push_back({t.camera_id, s.seq, t.center, detect::Label::hot_spot, t.target_id});
    }
  }
  TruthEvaluation out;
  const detect::Evaluation ev = detect::evaluate(preds, truth, radius_px);
  out.metrics = ev.metrics;
  std::map<std::string, geom::GeoPoint> where;
  for (const auto& t : scene.targets) where[t.id] = t.ground;
  for (const auto& m : ev.matches) {
    const auto& p = preds[m.prediction];
    if (!p.ground) continue;
    const Eigen::Vector3d a = frame.to_enu(*p.ground);
    const Eigen::Vector3d b = frame.to_enu(where.at(truth[m.truth].target_id));
    const double e = (a - b).head<2>().norm();
    out.geolocation_errors_m.push_back(e);
    out.max_geolocation_error_m = std::max(out.max_geolocation_error_m, e);
  }
  return out;
}

// ------------------------------------------------------------ flight record

namespace {

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", p.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json parse_json(const std::string& text, const fs::path& where) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("'{}': {}", where.string(), e.what()));
  }
}

}  // namespace

FlightRecord read_flight_record(const fs::path& folder) {
  FlightRecord r;
  const fs::path config = folder / "config" / "system_config.json";
  if (!fs::exists(config)) throw IoError(fmt::format("'{}' has no config/system_config.json", folder.string()));
  const nlohmann::json snap = parse_json(read_text(config), config);
  try {
    const auto& extra = snap.at("extra");
    if (extra.contains("origin")) {
      const auto& o = extra.at("origin");
      r.origin = {o.at("lat").get<double>(), o.at("lon").get<double>(), o.at("alt").get<double>()};
    } else {
      r.origin = sim::FlightPlan{}.origin;
    }
    r.ground_up = extra.value("ground_up", 0.0);
    for (const auto& [id, yaml] : snap.at("camera_models").items()) {
      r.models[id] = geom::camera_from_yaml(yaml.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("'{}': {}", config.string(), e.what()));
  }

  const fs::path log = folder / "logs" / "samples.jsonl";
  if (fs::exists(log)) {
    std::istringstream in(read_text(log));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const nlohmann::json j = parse_json(line, log);
      if (j.at("pose").is_null()) continue;
      products::FootprintRequest req;
      req.trigger_seq = j.at("trigger_seq").get<std::int64_t>();
      req.pose = archive::ins_pose_from_json(j.at("pose"));
      req.cameras = j.at("cameras").get<std::vector<std::string>>();
      r.samples.push_back(std::move(req));
    }
  } else {
    std::map<std::int64_t, products::FootprintRequest> by_seq;
    for (const auto& meta : archive::read_flight_metadata(folder)) {
      if (meta.pose_missing) continue;
      auto& req = by_seq[meta.trigger_seq];
      req.trigger_seq = meta.trigger_seq;
      req.pose = meta.ins;
      req.cameras.push_back(meta.camera_id);
    }
    for (auto& [seq, req] : by_seq) r.samples.push_back(std::move(req));
  }

  const fs::path dets = folder / "detections" / "detections.csv";
  if (fs::exists(dets)) r.detections = detect::read_detections_csv(dets);
  return r;
}

void write_coverage_products(const products::CoverageSummary& coverage, const geom::LocalFrame& frame,
                             const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "flight_summary.json", products::to_json(coverage).dump(2) + "\n");
  write_file(dir / "area_table.txt", products::format_area_table(coverage));
  for (const auto& [id, cam] : coverage.cameras) {
    write_file(dir / ("footprints_" + id + ".geojson"),
               products::camera_geojson(cam, frame, coverage.ground_up).dump() + "\n");
  }
}

void write_detection_products(const products::DetectionSummary& summary, const fs::path& dir) {
  fs::create_directories(dir);
  write_file(dir / "detection_summary.json", products::to_json(summary).dump(2) + "\n");
  write_file(dir / "detection_summary.txt", products::format_detection_table(summary));
  write_file(dir / "tracks.geojson", products::tracks_geojson(summary.track_list).dump() + "\n");
}

}  // namespace aerosurvey::service
