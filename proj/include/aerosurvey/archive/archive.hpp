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


// Collection-mode policy and the flight-folder writer.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aerosurvey/archive/metadata.hpp"
#include "aerosurvey/archive/naming.hpp"
#include "aerosurvey/detect/detection.hpp"
#include "aerosurvey/geom/camera.hpp"
#include "aerosurvey/sync/types.hpp"

namespace aerosurvey::archive {

/// Destination of archived files. Paths are relative to the flight folder
/// ("imagery/<stem>.jpg"). Implementations throw IoError naming the file on
/// any failure.
class ArchiveSink {
 public:
  virtual ~ArchiveSink() = default;
  virtual void write(const std::string& relative_path, std::span<const std::uint8_t> bytes) = 0;
};

/// Keeps files in memory.
class MemorySink final : public ArchiveSink {
 public:
  void write(const std::string& relative_path, std::span<const std::uint8_t> bytes) override;
  const std::map<std::string, std::vector<std::uint8_t>>& files() const { return files_; }

 private:
  std::map<std::string, std::vector<std::uint8_t>> files_;
};

/// Splits "rgb_C" into band and view. Throws ValidationError.
std::pair<geom::Band, geom::View> parse_camera_id(std::string_view camera_id);

/// True when `detections` (of this sample) warrant archiving under `mode`.
bool should_archive(CollectionMode mode, double score_threshold, std::int64_t trigger_seq,
                    std::span<const detect::Detection> detections);

ImageMeta make_image_meta(const sync::Sample& sample, const sync::FrameHeader& frame,
                          const FlightManifest& manifest);

struct ArchivedSample {
  bool archived = false;
  std::vector<std::string> files;  ///< relative paths, image then metadata per frame
  std::vector<ImageMeta> metadata;
};

/// Applies the manifest's collection mode to one sample. Detections of
/// other triggers are ignored. Every image is written with its metadata
/// document; sink failures propagate.
ArchivedSample archive_sample(const sync::Sample& sample, std::span<const detect::Detection> detections,
                              const FlightManifest& manifest, ArchiveSink& sink);

struct ArchiveCounters {
  std::int64_t samples_seen = 0;
  std::int64_t samples_archived = 0;
  std::int64_t samples_skipped = 0;
  std::int64_t partial_samples_archived = 0;
  std::int64_t images_written = 0;
  std::int64_t bytes_written = 0;

  bool operator==(const ArchiveCounters&) const = default;
};

/// Stateful front end: counts samples and lets the mode change between
/// samples. Calls are serialized.
class Archiver {
 public:
  Archiver(FlightManifest manifest, ArchiveSink& sink);

  ArchivedSample archive(const sync::Sample& sample, std::span<const detect::Detection> detections);
  void set_mode(CollectionMode mode, std::optional<double> score_threshold = std::nullopt);

  FlightManifest manifest() const;
  ArchiveCounters counters() const;

 private:
  mutable std::mutex mutex_;
  FlightManifest manifest_;
  ArchiveSink& sink_;
  ArchiveCounters counters_;
};

/// Contents of config/system_config.json.
struct SystemConfigSnapshot {
  std::string pipeline;
  FlightManifest manifest;
  std::vector<geom::CameraModel> cameras;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const SystemConfigSnapshot& snapshot);

/// `<root>/<effort>_fl<NNN>/{imagery,detections,logs,config}`. One writer
/// per folder; writes are serialized and go through a temporary file that
/// is renamed into place.
class FlightArchive final : public ArchiveSink {
 public:
  FlightArchive(const std::filesystem::path& root, const FlightManifest& manifest);

  const std::filesystem::path& folder() const { return folder_; }
  std::filesystem::path imagery_dir() const { return folder_ / "imagery"; }
  std::filesystem::path detections_dir() const { return folder_ / "detections"; }
  std::filesystem::path logs_dir() const { return folder_ / "logs"; }
  std::filesystem::path config_dir() const { return folder_ / "config"; }

  void write(const std::string& relative_path, std::span<const std::uint8_t> bytes) override;
  void write_text(const std::string& relative_path, std::string_view text);

  /// Writes the configuration snapshot and camera YAMLs. Throws
  /// ValidationError when called twice.
  void write_config_snapshot(const SystemConfigSnapshot& snapshot);
  /// detections/detections.csv and detections/processed_images.txt.
  void write_detections(std::span<const detect::Detection> detections, std::span<const std::string> processed);

  /// Image stems under imagery/, sorted. Safe to call while writing.
  std::vector<std::string> list_images() const;

 private:
  std::mutex mutex_;
  std::filesystem::path folder_;
  bool config_written_ = false;
};

/// Image stems of the flight folder with the metadata documents that
/// describe them. Throws ValidationError for an image without exactly one
/// matching metadata document.
std::vector<ImageMeta> read_flight_metadata(const std::filesystem::path& flight_folder);

}  // namespace aerosurvey::archive
