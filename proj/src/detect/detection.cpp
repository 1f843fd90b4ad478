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


#include "aerosurvey/detect/detection.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

#include "aerosurvey/core/csv.hpp"
#include "aerosurvey/core/error.hpp"

namespace aerosurvey::detect {

std::string_view to_string(Label l) {
  switch (l) {
    case Label::hot_spot: return "hot_spot";
    case Label::ringed_seal: return "ringed_seal";
    case Label::bearded_seal: return "bearded_seal";
    case Label::polar_bear: return "polar_bear";
  }
  return "hot_spot";
}

Label parse_label(std::string_view s) {
  for (Label l : {Label::hot_spot, Label::ringed_seal, Label::bearded_seal, Label::polar_bear}) {
    if (to_string(l) == s) return l;
  }
  throw ValidationError(fmt::format("unknown detection label '{}'", s));
}

bool detection_rank_less(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::tie(a.trigger_seq, a.camera_id, a.bbox.y, a.bbox.x, a.bbox.h, a.bbox.w) <
         std::tie(b.trigger_seq, b.camera_id, b.bbox.y, b.bbox.x, b.bbox.h, b.bbox.w);
}

std::vector<Detection> nms(std::vector<Detection> detections, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw ValidationError(fmt::format("NMS IoU threshold {} outside (0, 1)", iou_threshold));
  }
  std::sort(detections.begin(), detections.end(), detection_rank_less);
  std::map<std::pair<std::int64_t, std::string>, std::vector<Box>> kept_boxes;
  std::vector<Detection> out;
  for (auto& d : detections) {
    auto& kept = kept_boxes[{d.trigger_seq, d.camera_id}];
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](const Box& k) { return iou(k, d.bbox) > iou_threshold; });
    if (suppressed) continue;
    kept.push_back(d.bbox);
    out.push_back(std::move(d));
  }
  return out;
}

void write_detections_csv(std::span<const Detection> detections, std::ostream& out) {
  out << "trigger_seq,camera_id,x,y,w,h,score,label,lat,lon\n";
  for (const auto& d : detections) {
    out << fmt::format("{},{},{:.3f},{:.3f},{:.3f},{:.3f},{:.6f},{},", d.trigger_seq, d.camera_id, d.bbox.x, d.bbox.y,
                       d.bbox.w, d.bbox.h, d.score, to_string(d.label));
    if (d.ground) out << fmt::format("{:.9f},{:.9f}", d.ground->lat, d.ground->lon);
    else out << ',';
    out << '\n';
  }
}

void write_detections_csv(std::span<const Detection> detections, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  write_detections_csv(detections, out);
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

std::vector<Detection> read_detections_csv(const std::filesystem::path& path) {
  const csv::Table t = csv::Table::read_file(path);
  t.require({"trigger_seq", "camera_id", "x", "y", "w", "h", "score", "label", "lat", "lon"});
  std::vector<Detection> out;
  out.reserve(t.rows());
  for (std::size_t i = 0; i < t.rows(); ++i) {
    Detection d;
    d.trigger_seq = t.integer(i, "trigger_seq");
    d.camera_id = t.text(i, "camera_id");
    d.bbox = {t.number(i, "x"), t.number(i, "y"), t.number(i, "w"), t.number(i, "h")};
    d.score = t.number(i, "score");
    d.label = parse_label(t.text(i, "label"));
    if (!t.text(i, "lat").empty()) d.ground = geom::GeoPoint{t.number(i, "lat"), t.number(i, "lon"), 0.0};
    out.push_back(std::move(d));
  }
  return out;
}

void write_processed_list(std::span<const std::string> image_names, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  for (const auto& n : image_names) out << n << '\n';
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace aerosurvey::detect
