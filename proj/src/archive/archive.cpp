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


#include "aerosurvey/archive/archive.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "aerosurvey/archive/encode.hpp"
#include "aerosurvey/core/error.hpp"
#include "aerosurvey/geom/camera_io.hpp"

namespace aerosurvey::archive {
namespace fs = std::filesystem;

void MemorySink::write(const std::string& relative_path, std::span<const std::uint8_t> bytes) {
  files_[relative_path].assign(bytes.begin(), bytes.end());
}

std::pair<geom::Band, geom::View> parse_camera_id(std::string_view id) {
  const auto us = id.find('_');
  if (us == std::string_view::npos) throw ValidationError(fmt::format("camera id '{}' is not <band>_<view>", id));
  return {geom::parse_band(id.substr(0, us)), geom::parse_view(id.substr(us + 1))};
}

bool should_archive(CollectionMode mode, double score_threshold, std::int64_t trigger_seq,
                    std::span<const detect::Detection> detections) {
  switch (mode) {
    case CollectionMode::archive_all: return true;
    case CollectionMode::off: return false;
    case CollectionMode::detection_triggered:
      return std::any_of(detections.begin(), detections.end(), [&](const detect::Detection& d) {
        return d.trigger_seq == trigger_seq && d.score >= score_threshold;
      });
  }
  return false;
}

ImageMeta make_image_meta(const sync::Sample& sample, const sync::FrameHeader& frame,
                          const FlightManifest& manifest) {
  ImageMeta m;
  const auto [band, view] = parse_camera_id(frame.camera_id);
  m.camera_id = frame.camera_id;
  m.band = band;
  m.view = view;
  m.event_time = sample.trigger.time;
  m.trigger_seq = sample.trigger.seq;
  m.image_name = format_image_name(manifest, view, m.event_time, band);
  if (frame.payload) {
    m.width = frame.payload->width();
    m.height = frame.payload->height();
  }
  m.frame_id = frame.frame_id;
  m.arrival_time = frame.arrival_time;
  m.settings = frame.settings;
  m.ins = sample.ins;
  m.location = sample.ins.position;
  m.pose_missing = sample.pose_missing;
  m.partial = sample.partial;
  m.effort = manifest.effort;
  m.flight = manifest.flight;
  m.project = manifest.project;
  return m;
}

ArchivedSample archive_sample(const sync::Sample& sample, std::span<const detect::Detection> detections,
                              const FlightManifest& manifest, ArchiveSink& sink) {
  ArchivedSample out;
  if (!should_archive(manifest.collection_mode, manifest.score_threshold, sample.trigger.seq, detections)) {
    return out;
  }
  out.archived = true;
  for (const auto& [camera_id, frame] : sample.frames) {
    if (!frame.payload) {
      throw ValidationError(fmt::format("frame {} of {} has no pixels to archive", frame.frame_id, camera_id));
    }
    ImageMeta meta = make_image_meta(sample, frame, manifest);
    const std::string image_path = "imagery/" + meta.image_name + std::string(image_extension(meta.band));
    const std::string meta_path = "imagery/" + meta.image_name + ".json";
    sink.write(image_path, encode_image(frame.payload->render(), meta.band));
    const std::string doc = serialize(meta);
    sink.write(meta_path, std::span(reinterpret_cast<const std::uint8_t*>(doc.data()), doc.size()));
    out.files.push_back(image_path);
    out.files.push_back(meta_path);
    out.metadata.push_back(std::move(meta));
  }
  return out;
}

namespace {

// Counts bytes on their way to the real sink.
class CountingSink final : public ArchiveSink {
 public:
  explicit CountingSink(ArchiveSink& inner) : inner_(inner) {}
  void write(const std::string& relative_path, std::span<const std::uint8_t> bytes) override {
    inner_.write(relative_path, bytes);
    bytes_ += static_cast<std::int64_t>(bytes.size());
  }
  std::int64_t bytes() const { return bytes_; }

 private:
  ArchiveSink& inner_;
  std::int64_t bytes_ = 0;
};

}  // namespace

Archiver::Archiver(FlightManifest manifest, ArchiveSink& sink) : manifest_(std::move(manifest)), sink_(sink) {
  manifest_.validate();
}

ArchivedSample Archiver::archive(const sync::Sample& sample, std::span<const detect::Detection> detections) {
  std::lock_guard lock(mutex_);
  CountingSink counting(sink_);
  ++counters_.samples_seen;
  ArchivedSample out;
  try {
    out = archive_sample(sample, detections, manifest_, counting);
  } catch (...) {
    // A failed sample counts as skipped so seen == archived + skipped holds.
    ++counters_.samples_skipped;
    counters_.bytes_written += counting.bytes();
    throw;
  }
  counters_.bytes_written += counting.bytes();
  if (out.archived) {
    ++counters_.samples_archived;
    if (sample.partial) ++counters_.partial_samples_archived;
    counters_.images_written += static_cast<std::int64_t>(out.metadata.size());
  } else {
    ++counters_.samples_skipped;
  }
  return out;
}

void Archiver::set_mode(CollectionMode mode, std::optional<double> score_threshold) {
  std::lock_guard lock(mutex_);
  FlightManifest next = manifest_;
  next.collection_mode = mode;
  if (score_threshold) next.score_threshold = *score_threshold;
  next.validate();
  manifest_ = std::move(next);
}

FlightManifest Archiver::manifest() const {
  std::lock_guard lock(mutex_);
  return manifest_;
}

ArchiveCounters Archiver::counters() const {
  std::lock_guard lock(mutex_);
  return counters_;
}

nlohmann::ordered_json to_json(const SystemConfigSnapshot& s) {
  nlohmann::ordered_json cams = nlohmann::ordered_json::object();
  for (const auto& m : s.cameras) cams[m.camera_id] = geom::camera_to_yaml(m);
  return {{"pipeline", s.pipeline}, {"manifest", to_json(s.manifest)}, {"camera_models", cams}, {"extra", s.extra}};
}

FlightArchive::FlightArchive(const fs::path& root, const FlightManifest& manifest)
    : folder_(root / manifest.folder_name()) {
  manifest.validate();
  std::error_code ec;
  for (const char* sub : {"imagery", "detections", "logs", "config"}) {
    fs::create_directories(folder_ / sub, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", (folder_ / sub).string(), ec.message()));
  }
}

void FlightArchive::write(const std::string& relative_path, std::span<const std::uint8_t> bytes) {
  std::lock_guard lock(mutex_);
  const fs::path target = folder_ / relative_path;
  const fs::path tmp = fs::path(target.string() + ".part");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", target.string()));
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw IoError(fmt::format("failed writing '{}'", target.string()));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError(fmt::format("cannot move '{}' into place: {}", target.string(), ec.message()));
}

void FlightArchive::write_text(const std::string& relative_path, std::string_view text) {
  write(relative_path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void FlightArchive::write_config_snapshot(const SystemConfigSnapshot& snapshot) {
  {
    std::lock_guard lock(mutex_);
    if (config_written_) throw ValidationError("system configuration snapshot already written for this flight");
    config_written_ = true;
  }
  write_text("config/system_config.json", to_json(snapshot).dump(2) + "\n");
  for (const auto& m : snapshot.cameras) write_text("config/" + m.camera_id + ".yaml", geom::camera_to_yaml(m));
}

void FlightArchive::write_detections(std::span<const detect::Detection> detections,
                                     std::span<const std::string> processed) {
  std::ostringstream csv;
  detect::write_detections_csv(detections, csv);
  write_text("detections/detections.csv", csv.str());
  std::string list;
  for (const auto& n : processed) list += n + "\n";
  write_text("detections/processed_images.txt", list);
}

std::vector<std::string> FlightArchive::list_images() const {
  std::vector<std::string> out;
  std::error_code ec;
  for (fs::directory_iterator it(imagery_dir(), ec), end; !ec && it != end; it.increment(ec)) {
    const fs::path& p = it->path();
    const auto ext = p.extension().string();
    if (ext == ".jpg" || ext == ".tif" || ext == ".png") out.push_back(p.stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ImageMeta> read_flight_metadata(const fs::path& flight_folder) {
  const fs::path dir = flight_folder / "imagery";
  if (!fs::is_directory(dir)) throw IoError(fmt::format("'{}' is not a flight folder", flight_folder.string()));
  std::set<std::string> images;
  std::set<std::string> docs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension().string();
    const auto stem = entry.path().stem().string();
    if (ext == ".json") {
      docs.insert(stem);
    } else if (ext == ".jpg" || ext == ".tif" || ext == ".png") {
      if (!images.insert(stem).second) throw ValidationError(fmt::format("image '{}' stored twice", stem));
    }
  }
  std::vector<ImageMeta> out;
  for (const auto& stem : images) {
    if (!docs.count(stem)) throw ValidationError(fmt::format("image '{}' has no metadata document", stem));
    std::ifstream in(dir / (stem + ".json"));
    if (!in) throw IoError(fmt::format("cannot open metadata for '{}'", stem));
    std::stringstream ss;
    ss << in.rdbuf();
    ImageMeta meta = parse_image_meta(ss.str());
    if (meta.image_name != stem) {
      throw ValidationError(fmt::format("metadata for '{}' names image '{}'", stem, meta.image_name));
    }
    out.push_back(std::move(meta));
  }
  for (const auto& stem : docs) {
    if (!images.count(stem)) throw ValidationError(fmt::format("metadata '{}' has no image", stem));
  }
  return out;
}

}  // namespace aerosurvey::archive
