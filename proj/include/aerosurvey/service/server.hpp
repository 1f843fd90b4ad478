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


// Run-control service: owns one flight run at a time and serves state,
// events, thumbnails, commands and summaries over HTTP.

#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "aerosurvey/service/pipeline.hpp"
#include "aerosurvey/service/state.hpp"

namespace httplib {
class Server;
}

namespace aerosurvey::service {

/// Request bodies. Unknown keys and wrong types are ValidationErrors.
CameraParamsCommand camera_params_from_json(const std::string& camera_id, const nlohmann::json& body);
ModeCommand mode_from_json(const nlohmann::json& body);
PipelineCommand pipeline_from_json(const nlohmann::json& body);

nlohmann::ordered_json to_json(const Ack& ack);

struct CommandOutcome {
  /// "applied" once in effect, "queued" when the wait timed out first.
  std::string status;
  std::uint64_t action_id = 0;
  std::optional<Ack> ack;
};

class Service {
 public:
  explicit Service(RunConfig base);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Starts a flight from the base configuration on a background thread.
  /// pace > 0 holds that multiple of real time; 0 runs flat out. Throws
  /// ValidationError when a run is already active.
  void start(double pace = 1.0);
  /// Asks the active run to stop after the current trigger and waits.
  void stop();
  /// Blocks until the active run (if any) ends.
  void wait();
  bool running() const;

  StateStore& state() { return store_; }
  const StateStore& state() const { return store_; }

  /// Validates and applies a command. During a run it is queued for the
  /// next boundary and awaited up to `wait`; when idle it changes the base
  /// configuration for the next run immediately. Throws ValidationError or
  /// ConfigurationError with the reason.
  CommandOutcome command(const Command& command, std::chrono::milliseconds wait = std::chrono::seconds(5));
  std::vector<ActionLogEntry> action_log() const;

  /// JPEG of the camera's latest frame; nullopt before its first frame.
  /// Throws ConfigurationError for unknown cameras.
  std::optional<std::vector<std::uint8_t>> thumbnail(const std::string& camera_id) const;

  /// Summaries of the current or last run; nullopt before any run.
  std::optional<nlohmann::ordered_json> flight_summary() const;
  std::optional<nlohmann::ordered_json> detection_summary() const;

  RunConfig base_config() const;
  /// Error of the last run, empty when it succeeded.
  std::string last_error() const;

 private:
  void publish_idle();
  void run_loop(double pace);

  mutable std::mutex mutex_;
  RunConfig base_;
  StateStore store_;
  std::shared_ptr<FlightRun> run_;
  std::thread thread_;
  std::atomic<bool> active_{false};
  std::atomic<bool> stop_{false};
  std::string last_error_;
  std::vector<ActionLogEntry> idle_log_;
  std::uint64_t next_idle_action_ = 1;
};

/// HTTP front end. Endpoints: GET /state, GET /events, GET /thumb/{id},
/// POST /camera/{id}/params, POST /mode, POST /pipeline, GET /summary/flight,
/// GET /summary/detections, GET /actions, GET /pipelines.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  /// Returns the bound port. Throws IoError when binding fails.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks serving on the calling thread until stop().
  void serve(const std::string& host, int port);
  void stop();

  /// SSE keep-alive comment interval when no new versions appear.
  std::chrono::milliseconds keepalive = std::chrono::milliseconds(1000);
  /// How long command handlers wait for the acknowledgement.
  std::chrono::milliseconds ack_wait = std::chrono::seconds(5);

 private:
  void install_routes();

  Service& service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
};

}  // namespace aerosurvey::service
