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


#include "aerosurvey/service/server.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <algorithm>

#include "aerosurvey/archive/encode.hpp"
#include "aerosurvey/core/error.hpp"

namespace aerosurvey::service {
using nlohmann::ordered_json;

// ------------------------------------------------------------ request bodies

namespace {

void only_keys(const nlohmann::json& body, std::initializer_list<const char*> allowed) {
  if (!body.is_object()) throw ValidationError("request body must be a JSON object");
  for (const auto& [key, value] : body.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ValidationError(fmt::format("unknown field '{}'", key));
    }
  }
}

std::optional<double> number(const nlohmann::json& body, const char* key) {
  if (!body.contains(key) || body.at(key).is_null()) return std::nullopt;
  if (!body.at(key).is_number()) throw ValidationError(fmt::format("'{}' must be a number", key));
  return body.at(key).get<double>();
}

std::string text(const nlohmann::json& body, const char* key) {
  if (!body.contains(key)) throw ValidationError(fmt::format("missing field '{}'", key));
  if (!body.at(key).is_string()) throw ValidationError(fmt::format("'{}' must be a string", key));
  return body.at(key).get<std::string>();
}

}  // namespace

CameraParamsCommand camera_params_from_json(const std::string& camera_id, const nlohmann::json& body) {
  only_keys(body, {"gain_db", "exposure_us", "nuc_interval_s"});
  return {camera_id, number(body, "gain_db"), number(body, "exposure_us"), number(body, "nuc_interval_s")};
}

ModeCommand mode_from_json(const nlohmann::json& body) {
  only_keys(body, {"mode", "score_threshold"});
  return {archive::parse_collection_mode(text(body, "mode")), number(body, "score_threshold")};
}

PipelineCommand pipeline_from_json(const nlohmann::json& body) {
  only_keys(body, {"name"});
  return {text(body, "name")};
}

ordered_json to_json(const Ack& ack) {
  return {{"action_id", ack.action_id},
          {"effective_seq", ack.effective_seq},
          {"effective_time", ack.effective_time.iso8601()},
          {"applied", ack.applied}};
}

// ------------------------------------------------------------------ service

Service::Service(RunConfig base) : base_(std::move(base)) { publish_idle(); }

Service::~Service() {
  stop();
  store_.close();
}

void Service::publish_idle() {
  // Idle: nothing streams or collects until a run starts.
  store_.publish([&](SystemState& s) {
    s.run_status = "idle";
    s.pipeline = base_.pipeline;
    s.counters.disk_space_remaining = base_.disk_quota_bytes;
    for (const auto& m : base_.sim.rig) {
      CameraState c;
      c.camera_id = m.camera_id;
      c.streaming = false;
      const auto it = base_.sim.controls.find(m.camera_id);
      const sim::CameraControl k = it != base_.sim.controls.end() ? it->second : sim::default_control(m.band);
      c.gain_db = k.gain_db;
      c.exposure_us = k.exposure_us;
      if (m.band == geom::Band::ir) c.nuc_interval_s = k.nuc_interval_s;
      s.cameras[m.camera_id] = c;
    }
  });
}

void Service::start(double pace) {
  std::lock_guard lock(mutex_);
  if (active_) throw ValidationError("a run is already active");
  if (thread_.joinable()) thread_.join();
  run_ = std::make_shared<FlightRun>(base_, &store_);
  last_error_.clear();
  stop_ = false;
  active_ = true;
  thread_ = std::thread([this, pace] { run_loop(pace); });
}

void Service::run_loop(double pace) {
  std::shared_ptr<FlightRun> run;
  {
    std::lock_guard lock(mutex_);
    run = run_;
  }
  const auto begin = std::chrono::steady_clock::now();
  const double period = 1.0 / run->config().sim.plan.trigger_rate_hz;
  std::int64_t steps = 0;
  try {
    while (!run->done() && !stop_) {
      run->step();
      ++steps;
      if (pace > 0.0) {
        std::this_thread::sleep_until(begin + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                  std::chrono::duration<double>(period * steps / pace)));
      }
    }
    run->finish();
  } catch (const std::exception& e) {
    const std::string what = e.what();
    {
      std::lock_guard lock(mutex_);
      last_error_ = what;
    }
    store_.publish([&](SystemState& s) {
      s.run_status = "failed";
      s.error = what;
    });
  }
  active_ = false;
}

void Service::stop() {
  stop_ = true;
  wait();
}

void Service::wait() {
  std::thread t;
  {
    std::lock_guard lock(mutex_);
    t = std::move(thread_);
  }
  if (t.joinable()) t.join();
}

bool Service::running() const { return active_; }

CommandOutcome Service::command(const Command& command, std::chrono::milliseconds wait) {
  std::shared_ptr<FlightRun> run;
  {
    std::lock_guard lock(mutex_);
    validate_command(command, base_);
    if (active_) {
      run = run_;
    } else {
      // Idle: the change becomes part of the configuration of the next run.
      ordered_json applied;
      if (const auto* c = std::get_if<CameraParamsCommand>(&command)) {
        const auto& rig = base_.sim.rig;
        const auto m = std::find_if(rig.begin(), rig.end(), [&](const auto& x) { return x.camera_id == c->camera_id; });
        auto [it, inserted] = base_.sim.controls.try_emplace(c->camera_id, sim::default_control(m->band));
        sim::CameraControl& k = it->second;
        if (c->gain_db) k.gain_db = *c->gain_db;
        if (c->exposure_us) k.exposure_us = *c->exposure_us;
        if (c->nuc_interval_s) k.nuc_interval_s = *c->nuc_interval_s;
        const bool ir = m->band == geom::Band::ir;
        applied = {{"camera_id", c->camera_id}, {"gain_db", k.gain_db}, {"exposure_us", k.exposure_us}};
        applied["nuc_interval_s"] = ir ? ordered_json(k.nuc_interval_s) : ordered_json(nullptr);
        store_.publish([&](SystemState& s) {
          CameraState& cs = s.cameras[c->camera_id];
          cs.gain_db = k.gain_db;
          cs.exposure_us = k.exposure_us;
          if (ir) cs.nuc_interval_s = k.nuc_interval_s;
        });
      } else if (const auto* md = std::get_if<ModeCommand>(&command)) {
        base_.manifest.collection_mode = md->mode;
        if (md->score_threshold) base_.manifest.score_threshold = *md->score_threshold;
        applied = {{"mode", archive::to_string(md->mode)}, {"score_threshold", base_.manifest.score_threshold}};
        store_.publish([&](SystemState& s) {
          s.collection_mode = base_.manifest.collection_mode;
          s.score_threshold = base_.manifest.score_threshold;
        });
      } else {
        base_.pipeline = std::get<PipelineCommand>(command).name;
        applied = {{"pipeline", base_.pipeline}};
        store_.publish([&](SystemState& s) { s.pipeline = base_.pipeline; });
      }
      const auto now = std::chrono::system_clock::now();
      const auto us = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count();
      const Timestamp t = Timestamp::from_micros(us);
      ActionLogEntry e{next_idle_action_++, t.iso8601(), to_json(command), 0, t};
      idle_log_.push_back(e);
      return {"applied", e.action_id, Ack{e.action_id, 0, t, applied}};
    }
  }
  std::future<Ack> fut = run->submit(command);
  if (fut.wait_for(wait) != std::future_status::ready) {
    // The id is known once queued; read it back from the pending log later.
    return {"queued", 0, std::nullopt};
  }
  Ack ack = fut.get();
  return {"applied", ack.action_id, ack};
}

std::vector<ActionLogEntry> Service::action_log() const {
  std::lock_guard lock(mutex_);
  std::vector<ActionLogEntry> out = idle_log_;
  if (run_) {
    const auto run_log = run_->action_log();
    out.insert(out.end(), run_log.begin(), run_log.end());
  }
  return out;
}

std::optional<std::vector<std::uint8_t>> Service::thumbnail(const std::string& camera_id) const {
  std::shared_ptr<FlightRun> run;
  {
    std::lock_guard lock(mutex_);
    const auto& rig = base_.sim.rig;
    if (std::none_of(rig.begin(), rig.end(), [&](const auto& m) { return m.camera_id == camera_id; })) {
      throw ConfigurationError(fmt::format("unknown camera '{}'", camera_id));
    }
    run = run_;
  }
  if (!run) return std::nullopt;
  const auto frame = run->latest_frame(camera_id);
  if (!frame || !frame->payload) return std::nullopt;
  return archive::encode_thumbnail(frame->payload->render());
}

std::optional<ordered_json> Service::flight_summary() const {
  std::shared_ptr<FlightRun> run;
  {
    std::lock_guard lock(mutex_);
    run = run_;
  }
  if (!run) return std::nullopt;
  return products::to_json(run->coverage());
}

std::optional<ordered_json> Service::detection_summary() const {
  std::shared_ptr<FlightRun> run;
  {
    std::lock_guard lock(mutex_);
    run = run_;
  }
  if (!run) return std::nullopt;
  return products::to_json(run->detection_summary(run->coverage()));
}

RunConfig Service::base_config() const {
  std::lock_guard lock(mutex_);
  return base_;
}

std::string Service::last_error() const {
  std::lock_guard lock(mutex_);
  return last_error_;
}

// --------------------------------------------------------------------- http

namespace {

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
  send_json(res, status, {{"error", {{"kind", kind}, {"message", message}}}});
}

template <typename F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const ConfigurationError& e) {
    send_error(res, 404, e.kind(), e.what());
  } catch (const Error& e) {
    send_error(res, 400, e.kind(), e.what());
  } catch (const nlohmann::json::exception& e) {
    send_error(res, 400, "parse", e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, "internal", e.what());
  }
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(req.body);
}

ordered_json outcome_json(const CommandOutcome& o) {
  ordered_json j = {{"status", o.status}};
  if (o.ack) {
    j["ack"] = to_json(*o.ack);
  } else {
    j["ack"] = nullptr;
  }
  return j;
}

}  // namespace

HttpServer::HttpServer(Service& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  httplib::Server& s = *server_;

  s.Get("/state", [this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, to_json(service_.state().snapshot()));
  });

  s.Get("/events", [this](const httplib::Request& req, httplib::Response& res) {
    std::uint64_t after = 0;
    bool resume = false;
    std::int64_t limit = -1;
    try {
      if (req.has_param("limit")) limit = std::stoll(req.get_param_value("limit"));
      if (req.has_header("Last-Event-ID")) {
        after = std::stoull(req.get_header_value("Last-Event-ID"));
        resume = true;
      } else if (req.has_param("since")) {
        after = std::stoull(req.get_param_value("since"));
        resume = true;
      }
    } catch (const std::exception&) {
      send_error(res, 400, "validation", "since, limit and Last-Event-ID must be integers");
      return;
    }
    // Without a resume point the stream opens with the current version.
    auto opening = std::make_shared<std::optional<SystemState>>();
    if (!resume) *opening = service_.state().snapshot();
    auto cursor = std::make_shared<std::uint64_t>(resume ? after : (*opening)->version);
    auto sent = std::make_shared<std::int64_t>(0);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [this, cursor, sent, limit, opening](std::size_t, httplib::DataSink& sink) {
          const auto emit = [&](const SystemState& st) {
            const std::string ev =
                fmt::format("id: {}\nevent: state\ndata: {}\n\n", st.version, to_json(st).dump());
            *cursor = st.version;
            ++*sent;
            return sink.write(ev.data(), ev.size());
          };
          if (*opening) {
            const SystemState first = std::move(**opening);
            opening->reset();
            if (limit != 0 && !emit(first)) return false;
          }
          while (!stopping_) {
            if (limit >= 0 && *sent >= limit) {
              sink.done();
              return true;
            }
            bool truncated = false;
            const auto states = service_.state().since(*cursor, keepalive, &truncated);
            if (truncated) {
              const std::string gap = ": history truncated\n\n";
              if (!sink.write(gap.data(), gap.size())) return false;
            }
            if (states.empty()) {
              if (service_.state().closed()) break;
              const std::string ping = ": keepalive\n\n";
              if (!sink.write(ping.data(), ping.size())) return false;
              continue;
            }
            for (const auto& st : states) {
              if (limit >= 0 && *sent >= limit) break;
              if (!emit(st)) return false;
            }
          }
          sink.done();
          return true;
        });
  });

  s.Get(R"(/thumb/([A-Za-z0-9_]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto jpeg = service_.thumbnail(req.matches[1]);
      if (!jpeg) {
        send_error(res, 404, "not_found", fmt::format("no frame yet from '{}'", std::string(req.matches[1])));
        return;
      }
      res.status = 200;
      res.set_content(std::string(jpeg->begin(), jpeg->end()), "image/jpeg");
    });
  });

  const auto command_route = [this](httplib::Response& res, const Command& cmd) {
    const CommandOutcome o = service_.command(cmd, ack_wait);
    send_json(res, o.status == "applied" ? 200 : 202, outcome_json(o));
  };

  s.Post(R"(/camera/([A-Za-z0-9_]+)/params)", [this, command_route](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { command_route(res, camera_params_from_json(req.matches[1], parse_body(req))); });
  });
  s.Post("/mode", [this, command_route](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { command_route(res, mode_from_json(parse_body(req))); });
  });
  s.Post("/pipeline", [this, command_route](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      try {
        command_route(res, pipeline_from_json(parse_body(req)));
      } catch (const ConfigurationError& e) {
        // Unknown pipeline: a bad request, not a missing resource.
        ordered_json names = ordered_json::array();
        for (const auto& p : pipelines()) names.push_back(p.name);
        send_json(res, 400, {{"error", {{"kind", e.kind()}, {"message", e.what()}, {"available", names}}}});
      }
    });
  });

  s.Get("/summary/flight", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const auto j = service_.flight_summary();
      if (!j) return send_error(res, 404, "not_found", "no run yet");
      send_json(res, 200, *j);
    });
  });
  s.Get("/summary/detections", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] {
      const auto j = service_.detection_summary();
      if (!j) return send_error(res, 404, "not_found", "no run yet");
      send_json(res, 200, *j);
    });
  });
  s.Get("/actions", [this](const httplib::Request&, httplib::Response& res) {
    ordered_json out = ordered_json::array();
    for (const auto& e : service_.action_log()) out.push_back(to_json(e));
    send_json(res, 200, out);
  });
  s.Get("/pipelines", [](const httplib::Request&, httplib::Response& res) {
    ordered_json out = ordered_json::array();
    for (const auto& p : pipelines()) {
      out.push_back({{"name", p.name}, {"description", p.description}, {"chip_size", p.chip_size}});
    }
    send_json(res, 200, out);
  });
}

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host);
  } else if (!server_->bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw IoError(fmt::format("cannot bind {}:{}", host, port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::serve(const std::string& host, int port) {
  if (!server_->listen(host, port)) throw IoError(fmt::format("cannot listen on {}:{}", host, port));
}

void HttpServer::stop() {
  stopping_ = true;
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace aerosurvey::service
