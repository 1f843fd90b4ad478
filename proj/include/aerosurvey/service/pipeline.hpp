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


// Headless flight pipeline: simulator -> sample assembly -> detection ->
// archiving, with operator commands applied at trigger/sample boundaries.

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

#include "aerosurvey/archive/archive.hpp"
#include "aerosurvey/detect/fusion.hpp"
#include "aerosurvey/detect/hotspot.hpp"
#include "aerosurvey/detect/metrics.hpp"
#include "aerosurvey/products/coverage.hpp"
#include "aerosurvey/products/tracking.hpp"
#include "aerosurvey/service/state.hpp"
#include "aerosurvey/service/stream.hpp"
#include "aerosurvey/sim/simulator.hpp"
#include "aerosurvey/sync/assembler.hpp"

namespace aerosurvey::service {

// ---------------------------------------------------------------- pipelines

struct PipelineInfo {
  std::string name;
  std::string description;
  bool second_stage = false;
  int chip_size = 0;
};

/// ir_hotspot, ir_rgb_seal, ir_rgb_polar_bear, ir_rgb_echo.
const std::vector<PipelineInfo>& pipelines();
/// Throws ConfigurationError listing the registered names.
const PipelineInfo& find_pipeline(const std::string& name);
/// Templates are derived from the species' nominal appearance over the
/// simulator background. Null for thermal-only pipelines.
std::unique_ptr<detect::SecondStageDetector> make_second_stage(const std::string& name,
                                                               const sim::NoiseParams& noise);

// -------------------------------------------------------------- run config

struct ParamBounds {
  double gain_min_db = 0.0;
  double gain_max_db = 24.0;
  double exposure_min_us = 10.0;
  double exposure_max_us = 20000.0;
  double nuc_min_s = 10.0;
  double nuc_max_s = 3600.0;
};

struct RunConfig {
  sim::SimConfig sim;
  archive::FlightManifest manifest;
  std::string pipeline = "ir_hotspot";
  detect::DetectorParams hotspot;
  detect::FusionParams fusion;  ///< chip size comes from the pipeline
  sync::AssemblerConfig assembler;
  products::TrackParams tracking;
  ParamBounds bounds;
  /// Flight folders go under this directory; empty keeps nothing on disk.
  std::filesystem::path output_root;
  /// Simulated storage for the disk-space counter.
  std::int64_t disk_quota_bytes = 2'000'000'000'000;
  /// A camera is flagged as not streaming after this many consecutive
  /// samples without its frame.
  int stall_samples = 3;
  /// Keep per-sample simulator truth for evaluation.
  bool keep_truth = true;
  /// Replays this recorded stream instead of simulating. Its rig, origin,
  /// ground height and trigger rate replace those of `sim`.
  std::filesystem::path replay;
};

/// Parses the `archive`, `pipeline` and `output` sections on top of the
/// simulation sections of the same YAML document.
RunConfig run_config_from_yaml(const YAML::Node& root);

// ----------------------------------------------------------------- commands

struct CameraParamsCommand {
  std::string camera_id;
  std::optional<double> gain_db;
  std::optional<double> exposure_us;
  std::optional<double> nuc_interval_s;
};

struct ModeCommand {
  archive::CollectionMode mode = archive::CollectionMode::off;
  std::optional<double> score_threshold;
};

struct PipelineCommand {
  std::string name;
};

using Command = std::variant<CameraParamsCommand, ModeCommand, PipelineCommand>;

nlohmann::ordered_json to_json(const Command& command);

struct Ack {
  std::uint64_t action_id = 0;
  /// Trigger from which the command is in effect.
  std::int64_t effective_seq = 0;
  Timestamp effective_time;
  nlohmann::ordered_json applied;  ///< resulting values
};

struct ActionLogEntry {
  std::uint64_t action_id = 0;
  std::string wall_time;  ///< when the command was accepted
  nlohmann::ordered_json command;
  std::int64_t effective_seq = 0;
  Timestamp effective_time;
};

nlohmann::ordered_json to_json(const ActionLogEntry& entry);

/// Checks a command against the rig and bounds without applying it. Throws
/// ValidationError (bad value) or ConfigurationError (unknown camera or
/// pipeline) with the reason.
void validate_command(const Command& command, const RunConfig& config);

// --------------------------------------------------------------------- run

struct RunResult {
  std::vector<detect::Detection> detections;
  std::vector<std::string> processed_images;
  sync::DropReport drops;
  archive::ArchiveCounters archive;
  std::int64_t samples = 0;
  std::vector<sim::SampleTruth> truth;  ///< when keep_truth
  std::vector<products::FootprintRequest> footprint_requests;
  std::optional<std::filesystem::path> flight_folder;
};

/// One flight. Not thread-safe except for submit(), which may be called from
/// any thread; the command is applied by the thread driving step().
class FlightRun {
 public:
  explicit FlightRun(RunConfig config, StateStore* store = nullptr);
  ~FlightRun();

  FlightRun(const FlightRun&) = delete;
  FlightRun& operator=(const FlightRun&) = delete;

  bool done() const { return finished_; }
  /// One trigger: applies pending camera commands, steps the simulator and
  /// processes every sample the assembler finalizes.
  void step();
  /// Runs to the end (finish() included), sleeping to hold `pace` x real
  /// time when pace > 0.
  void run(double pace = 0.0);
  /// Flushes the assembler and writes detections, logs and summaries.
  void finish();

  /// Validates, then queues for the next boundary. The future resolves
  /// when the command takes effect. Throws like validate_command.
  std::future<Ack> submit(Command command);

  const RunConfig& config() const { return config_; }
  const RunResult& result() const { return result_; }
  std::vector<ActionLogEntry> action_log() const;
  /// Coverage and detection summaries of the samples processed so far.
  products::CoverageSummary coverage() const;
  products::DetectionSummary detection_summary(const products::CoverageSummary& coverage) const;
  /// Latest frame of a camera, for thumbnails.
  std::optional<sync::FrameHeader> latest_frame(const std::string& camera_id) const;
  const std::map<std::string, geom::CameraModel>& models() const { return models_; }
  geom::LocalFrame frame() const { return geom::LocalFrame(config_.sim.plan.origin); }

 private:
  struct Pending {
    std::uint64_t id;
    std::string wall_time;
    Command command;
    std::promise<Ack> promise;
  };

  void apply_camera_commands(std::int64_t next_seq, Timestamp next_time);
  void apply_sample_commands(const sync::Sample& sample);
  void process(const sync::Sample& sample);
  void publish_sample(const sync::Sample& sample, const detect::FusionResult& fusion,
                      const archive::ArchiveCounters& counters);
  void write_outputs();
  void log_action(Pending& p, std::int64_t seq, Timestamp time, nlohmann::ordered_json applied);

  RunConfig config_;
  StateStore* store_;
  std::unique_ptr<StreamSource> source_;
  sync::SampleAssembler assembler_;
  std::map<std::string, geom::CameraModel> models_;
  std::unique_ptr<detect::SecondStageDetector> second_stage_;
  std::string pipeline_;
  detect::FusionParams fusion_;
  std::unique_ptr<archive::FlightArchive> folder_;
  std::unique_ptr<archive::ArchiveSink> discard_;
  std::unique_ptr<archive::Archiver> archiver_;
  std::map<std::int64_t, sim::SampleTruth> truth_by_seq_;
  std::map<std::string, std::int64_t> missing_streak_;
  std::string samples_log_;
  RunResult result_;
  bool finished_ = false;

  mutable std::mutex mutex_;  // guards everything below and latest_
  std::vector<Pending> pending_;
  std::vector<ActionLogEntry> log_;
  std::uint64_t next_action_ = 1;
  std::map<std::string, sync::FrameHeader> latest_;
};

/// Runs a whole flight headless and returns its result.
RunResult run_flight(const RunConfig& config);

/// Detections of one band against simulator truth: that band's sightings
/// are the truth objects, matched per image within `radius_px`.
struct TruthEvaluation {
  detect::Metrics metrics;
  /// Horizontal distance from each matched detection's ground point to its
  /// target, for matches with a ground point.
  std::vector<double> geolocation_errors_m;
  double max_geolocation_error_m = 0.0;
};

TruthEvaluation evaluate_against_truth(const RunResult& result, const sim::Scene& scene,
                                       const geom::LocalFrame& frame, geom::Band band = geom::Band::ir,
                                       double radius_px = 10.0);

// ------------------------------------------------------------ flight record

/// What a finished flight folder holds for post-flight products.
struct FlightRecord {
  geom::GeoPoint origin;
  double ground_up = 0.0;
  std::map<std::string, geom::CameraModel> models;
  std::vector<products::FootprintRequest> samples;
  std::vector<detect::Detection> detections;
};

/// Reads config/system_config.json, config/*.yaml, logs/samples.jsonl and
/// detections/detections.csv. Without a samples log the archived image
/// metadata supplies the footprints. Throws IoError or ValidationError.
FlightRecord read_flight_record(const std::filesystem::path& flight_folder);

/// Writes the coverage products into `dir`: flight_summary.json,
/// area_table.txt and footprints_<camera>.geojson.
void write_coverage_products(const products::CoverageSummary& coverage, const geom::LocalFrame& frame,
                             const std::filesystem::path& dir);
/// detection_summary.json, detection_summary.txt and tracks.geojson.
void write_detection_products(const products::DetectionSummary& summary, const std::filesystem::path& dir);

}  // namespace aerosurvey::service
