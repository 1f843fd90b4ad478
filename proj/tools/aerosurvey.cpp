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


// aerosurvey: command-line entry points for simulation, headless flights,
// calibration, post-flight products and the run-control service.

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "aerosurvey/calib/calibration.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/camera_io.hpp"
#include "aerosurvey/products/coverage.hpp"
#include "aerosurvey/products/tracking.hpp"
#include "aerosurvey/service/pipeline.hpp"
#include "aerosurvey/service/server.hpp"
#include "aerosurvey/service/stream.hpp"
#include "aerosurvey/sim/config.hpp"
#include "aerosurvey/sim/rig.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace aerosurvey::cli {
namespace {

// Config files plus --plan / --scene documents, merged in order. A plan or
// scene file may hold the bare section or a document with that section.
struct ConfigFlags {
  std::vector<std::string> configs;
  std::string plan;
  std::string scene;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;

  void add(CLI::App* app) {
    app->add_option("-c,--config", configs, "YAML/JSON configuration file (repeatable, later files win)")
        ->check(CLI::ExistingFile);
    app->add_option("--plan", plan, "flight plan YAML (bare 'plan' section or full document)")->check(CLI::ExistingFile);
    app->add_option("--scene", scene, "scene YAML (bare 'scene' section or full document)")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "random seed (overrides the config)");
    app->add_option("--duration", duration_s, "flight time in seconds (overrides the plan)")->check(CLI::NonNegativeNumber);
  }

  YAML::Node load() const {
    std::vector<fs::path> files(configs.begin(), configs.end());
    YAML::Node root = files.empty() ? YAML::Node(YAML::NodeType::Map) : sim::load_config_documents(files);
    const auto section = [&](const std::string& file, const char* name) {
      if (file.empty()) return;
      YAML::Node doc;
      try {
        doc = YAML::LoadFile(file);
      } catch (const YAML::Exception& e) {
        throw ValidationError(fmt::format("config '{}': {}", file, e.what()));
      }
      if (!doc.IsMap()) throw ValidationError(fmt::format("config '{}' is not a mapping", file));
      if (doc[name]) {
        for (const auto& kv : doc) root[kv.first.as<std::string>()] = kv.second;
      } else {
        root[name] = doc;
      }
    };
    section(plan, "plan");
    section(scene, "scene");
    if (seed) root["seed"] = *seed;
    if (duration_s) root["plan"]["duration_s"] = *duration_s;
    return root;
  }
};

void print_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}'", p.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", p.string()));
  out << text;
  if (!out) throw IoError(fmt::format("failed writing '{}'", p.string()));
}

geom::GeoPoint parse_origin(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw ValidationError(fmt::format("--origin: '{}' is not a number", part));
    }
  }
  if (v.size() != 2 && v.size() != 3) throw ValidationError("--origin expects lat,lon[,alt]");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

ordered_json metrics_json(const detect::Metrics& m) {
  const auto opt = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  return {{"tp", m.tp}, {"fp", m.fp}, {"fn", m.fn}, {"recall", opt(m.recall)}, {"precision", opt(m.precision)},
          {"f1", opt(m.f1)}};
}

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  ConfigFlags config;
  std::string out;
  bool images = false;
  bool json = false;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("simulate", "simulate a flight and record its trigger, INS and frame streams");
    config.add(c);
    c->add_option("-o,--out", out, "stream directory to write")->required();
    c->add_flag("--images", images, "also write every frame losslessly (needed by 'fly --stream')");
    c->add_flag("--json", json, "machine-readable output");
    c->callback([this] { run(); });
  }

  void run() const {
    const sim::SimConfig cfg = sim::sim_config_from_yaml(config.load());
    const service::RecordSummary s = service::record_stream(cfg, out, images);
    if (json) {
      print_json({{"stream", out}, {"triggers", s.triggers}, {"frames", s.frames}, {"images", s.images},
                  {"poses", s.poses}, {"targets", cfg.scene.targets.size()}});
    } else {
      fmt::print("{}: {} triggers, {} frames, {} images, {} INS records, {} targets\n", out, s.triggers, s.frames,
                 s.images, s.poses, cfg.scene.targets.size());
    }
  }
};

// --------------------------------------------------------------------- fly

struct RunFlags {
  ConfigFlags config;
  std::optional<std::string> mode;
  std::optional<double> threshold;
  std::optional<std::string> pipeline;
  std::optional<std::string> effort;
  std::optional<int> flight;
  std::optional<std::string> out;

  void add(CLI::App* c) {
    config.add(c);
    c->add_option("--mode", mode, "collection mode")
        ->check(CLI::IsMember({"archive_all", "detection_triggered", "off"}));
    c->add_option("--threshold", threshold, "detection score threshold for detection_triggered")
        ->check(CLI::Range(0.0, 1.0));
    c->add_option("--pipeline", pipeline, "detection pipeline name");
    c->add_option("--effort", effort, "survey effort name");
    c->add_option("--flight", flight, "flight number")->check(CLI::NonNegativeNumber);
    c->add_option("-o,--out", out, "directory receiving the flight folder");
  }

  service::RunConfig build() const {
    service::RunConfig rc = service::run_config_from_yaml(config.load());
    if (mode) rc.manifest.collection_mode = archive::parse_collection_mode(*mode);
    if (threshold) rc.manifest.score_threshold = *threshold;
    if (pipeline) {
      service::find_pipeline(*pipeline);
      rc.pipeline = *pipeline;
    }
    if (effort) rc.manifest.effort = *effort;
    if (flight) rc.manifest.flight = *flight;
    if (out) rc.output_root = *out;
    rc.manifest.validate();
    return rc;
  }
};

struct FlyCmd {
  RunFlags flags;
  std::string stream;
  bool evaluate = false;
  bool json = false;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("fly", "run the pipeline headless on a simulated or recorded flight");
    flags.add(c);
    c->add_option("--stream", stream, "replay a stream recorded by 'simulate --images'")->check(CLI::ExistingDirectory);
    c->add_flag("--evaluate", evaluate, "score detections against simulator truth (rgb band for two-stage pipelines)");
    c->add_flag("--json", json, "machine-readable output");
    c->callback([this] { run(); });
  }

  void run() const {
    service::RunConfig rc = flags.build();
    if (rc.output_root.empty()) throw ValidationError("fly needs an output directory (--out or output.root)");
    if (!stream.empty()) rc.replay = stream;
    if (evaluate && !stream.empty()) throw ValidationError("--evaluate needs a simulated flight, not a replay");
    rc.keep_truth = evaluate;
    service::FlightRun run(rc);
    run.run();
    const service::RunResult& r = run.result();
    ordered_json out = {{"flight_folder", r.flight_folder ? r.flight_folder->string() : ""},
                        {"samples", r.samples},
                        {"detections", r.detections.size()},
                        {"frames_dropped", r.drops.total_missing()},
                        {"orphan_frames", r.drops.total_orphans()},
                        {"samples_archived", r.archive.samples_archived},
                        {"samples_skipped", r.archive.samples_skipped},
                        {"images_written", r.archive.images_written}};
    if (evaluate) {
      // Two-stage pipelines report on the colour camera that confirmed the hot spot.
      const geom::Band band = service::find_pipeline(rc.pipeline).second_stage ? geom::Band::rgb : geom::Band::ir;
      const auto ev = service::evaluate_against_truth(r, rc.sim.scene, run.frame(), band);
      out["evaluation"] = metrics_json(ev.metrics);
      out["evaluation"]["band"] = geom::to_string(band);
      out["evaluation"]["max_geolocation_error_m"] = ev.max_geolocation_error_m;
    }
    if (json) {
      print_json(out);
      return;
    }
    fmt::print("flight folder  {}\n", out["flight_folder"].get<std::string>());
    fmt::print("samples        {} ({} archived, {} skipped)\n", r.samples, r.archive.samples_archived,
               r.archive.samples_skipped);
    fmt::print("images         {}\n", r.archive.images_written);
    fmt::print("detections     {}\n", r.detections.size());
    fmt::print("dropped frames {}\n", r.drops.total_missing());
    if (evaluate) {
      const auto& e = out["evaluation"];
      const auto ratio = [](const nlohmann::ordered_json& v) {
        return v.is_null() ? std::string("n/a") : fmt::format("{:.3f}", v.get<double>());
      };
      fmt::print("evaluation     tp {} fp {} fn {}  recall {}  precision {}  max error {:.3f} m\n", e["tp"].dump(),
                 e["fp"].dump(), e["fn"].dump(), ratio(e["recall"]), ratio(e["precision"]),
                 e["max_geolocation_error_m"].get<double>());
    }
  }
};

// --------------------------------------------------------------- calibrate

struct CalibrateCmd {
  std::string correspondences;
  std::string poses;
  std::string models;
  std::string origin;
  std::string out;
  double mount_deg = 30.0;
  bool refine_focal = false;
  bool json = false;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("calibrate", "estimate camera-to-INS rig transforms from ground correspondences");
    c->add_option("--correspondences", correspondences, "CSV: camera_id,time,u,v,lat,lon,alt")
        ->required()
        ->check(CLI::ExistingFile);
    c->add_option("--poses", poses, "CSV: time,lat,lon,alt,roll,pitch,yaw")->required()->check(CLI::ExistingFile);
    c->add_option("--models", models, "directory of nominal camera YAMLs (default: built-in rig)")
        ->check(CLI::ExistingDirectory);
    c->add_option("--origin", origin, "flight-frame origin lat,lon[,alt] (default: plan default)");
    c->add_option("--mount", mount_deg, "side-camera mount angle of the built-in rig, degrees");
    c->add_option("-o,--out", out, "directory receiving the camera YAMLs and report")->required();
    c->add_flag("--refine-focal", refine_focal, "also refine a focal length scale");
    c->add_flag("--json", json, "machine-readable output");
    c->callback([this] { run(); });
  }

  void run() const {
    std::vector<geom::CameraModel> nominal = models.empty() ? sim::default_rig(mount_deg) : geom::load_camera_set(models);
    const geom::GeoPoint o = origin.empty() ? sim::FlightPlan{}.origin : parse_origin(origin);
    const auto rows = calib::read_correspondences(correspondences);
    const auto pose_list = calib::read_poses(poses);
    const calib::PoseTable table = calib::make_pose_table(pose_list);

    std::map<std::string, std::vector<calib::Correspondence>> by_camera;
    for (const auto& r : rows) by_camera[r.camera_id].push_back(r);
    for (const auto& [id, list] : by_camera) {
      if (std::none_of(nominal.begin(), nominal.end(), [&](const auto& m) { return m.camera_id == id; })) {
        throw ConfigurationError(fmt::format("correspondences name camera '{}' missing from the nominal models", id));
      }
    }
    calib::SolverOptions opts;
    opts.refine_focal = refine_focal;
    std::vector<calib::CalibrationReport> reports;
    ordered_json cams = ordered_json::object();
    for (auto& m : nominal) {
      const auto it = by_camera.find(m.camera_id);
      if (it == by_camera.end()) {
        cams[m.camera_id] = {{"calibrated", false}};
        continue;
      }
      const calib::RigEstimate est = calib::estimate_rig_transform(it->second, table, m.intrinsics, o, opts, m.camera_id);
      m.rig = est.rig;
      m.intrinsics = est.intrinsics;
      reports.push_back(est.report);
      const auto& r = est.report;
      cams[m.camera_id] = {{"calibrated", true},        {"correspondences", r.correspondences},
                           {"poses", r.poses},            {"rms_px", r.rms_reprojection_px},
                           {"p50_px", r.p50_px},          {"p90_px", r.p90_px},
                           {"max_px", r.max_px},          {"iterations", r.iterations},
                           {"converged", r.converged},    {"focal_scale", r.focal_scale}};
    }
    fs::create_directories(out);
    geom::save_camera_set(nominal, out);
    const std::string text = calib::format_report(reports);
    write_text(fs::path(out) / "calibration_report.txt", text);
    const ordered_json report = {{"origin", {{"lat", o.lat}, {"lon", o.lon}, {"alt", o.alt}}}, {"cameras", cams}};
    write_text(fs::path(out) / "calibration_report.json", report.dump(2) + "\n");
    if (json) {
      print_json(report);
    } else {
      std::cout << text;
      fmt::print("wrote {} camera models to {}\n", nominal.size(), out);
    }
  }
};

// ------------------------------------------------------------- summaries

struct FlightSummaryCmd {
  std::string folder;
  std::string out;
  bool json = false;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("flight-summary", "footprint GeoJSON per camera and the coverage area table");
    c->add_option("flight_dir", folder, "flight folder")->required()->check(CLI::ExistingDirectory);
    c->add_option("-o,--out", out, "output directory (default: <flight_dir>/summary)");
    c->add_flag("--json", json, "machine-readable output");
    c->callback([this] { run(); });
  }

  void run() const {
    const service::FlightRecord rec = service::read_flight_record(folder);
    const geom::LocalFrame frame(rec.origin);
    std::int64_t skipped = 0;
    const auto fps = products::compute_footprints(rec.samples, rec.models, rec.ground_up, frame, &skipped);
    products::CoverageSummary cov = products::flight_summary(fps, frame, rec.ground_up);
    cov.degenerate_skipped += skipped;
    const fs::path dir = out.empty() ? fs::path(folder) / "summary" : fs::path(out);
    service::write_coverage_products(cov, frame, dir);
    if (json) {
      print_json(products::to_json(cov));
    } else {
      std::cout << products::format_area_table(cov);
    }
  }
};

struct DetectionSummaryCmd {
  std::string folder;
  std::string out;
  std::optional<double> radius;
  std::optional<int> max_gap;
  bool json = false;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("detection-summary", "deduplicated tracks, counts and densities");
    c->add_option("flight_dir", folder, "flight folder")->required()->check(CLI::ExistingDirectory);
    c->add_option("-o,--out", out, "output directory (default: <flight_dir>/summary)");
    c->add_option("--radius", radius, "track linking radius, metres")->check(CLI::NonNegativeNumber);
    c->add_option("--max-gap", max_gap, "largest trigger gap inside a track")->check(CLI::NonNegativeNumber);
    c->add_flag("--json", json, "machine-readable output");
    c->callback([this] { run(); });
  }

  void run() const {
    const service::FlightRecord rec = service::read_flight_record(folder);
    const geom::LocalFrame frame(rec.origin);
    products::TrackParams params;
    if (radius) params.radius_m = *radius;
    if (max_gap) params.max_gap = *max_gap;
    const auto cov = products::flight_summary(
        products::compute_footprints(rec.samples, rec.models, rec.ground_up, frame), frame, rec.ground_up);
    const auto summary = products::detection_summary(products::track_detections(rec.detections, params, frame), cov);
    const fs::path dir = out.empty() ? fs::path(folder) / "summary" : fs::path(out);
    service::write_detection_products(summary, dir);
    if (json) {
      print_json(products::to_json(summary));
    } else {
      std::cout << products::format_detection_table(summary);
    }
  }
};

// ------------------------------------------------------------------ serve

std::atomic<service::HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

struct ServeCmd {
  RunFlags flags;
  std::string host = "127.0.0.1";
  int port = 8080;
  bool start = false;
  double pace = 1.0;

  void add(CLI::App& app) {
    CLI::App* c = app.add_subcommand("serve", "serve state, events and commands over HTTP");
    flags.add(c);
    c->add_option("--host", host, "listen address");
    c->add_option("--port", port, "listen port")->check(CLI::Range(1, 65535));
    c->add_flag("--start", start, "start a flight right away");
    c->add_option("--pace", pace, "multiple of real time for the run (0 = as fast as possible)")
        ->check(CLI::NonNegativeNumber);
    c->callback([this] { run(); });
  }

  void run() const {
    service::Service svc(flags.build());
    service::HttpServer server(svc);
    if (start) svc.start(pace);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    fmt::print(stderr, "serving on http://{}:{}\n", host, port);
    server.serve(host, port);
    g_server = nullptr;
    svc.stop();
  }
};

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"aerosurvey: simulated multi-camera aerial survey pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "aerosurvey 0.1.0");
  SimulateCmd simulate;
  FlyCmd fly;
  CalibrateCmd calibrate;
  FlightSummaryCmd flight_summary;
  DetectionSummaryCmd detection_summary;
  ServeCmd serve;
  simulate.add(app);
  fly.add(app);
  calibrate.add(app);
  flight_summary.add(app);
  detection_summary.add(app);
  serve.add(app);

  const auto error_line = [](const std::string& kind, const std::string& message) {
    std::cerr << ordered_json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_line("usage", e.what());
    std::cerr << "run with --help for usage\n";
    return 2;
  } catch (const Error& e) {
    error_line(e.kind(), e.what());
    return 1;
  } catch (const YAML::Exception& e) {
    error_line("validation", e.what());
    return 1;
  } catch (const std::exception& e) {
    error_line("internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace aerosurvey::cli

int main(int argc, char** argv) { return aerosurvey::cli::run_cli(argc, argv); }
