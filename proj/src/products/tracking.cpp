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


#include "aerosurvey/products/tracking.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>

namespace aerosurvey::products {
namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

bool time_order(const detect::Detection& a, const detect::Detection& b) {
  if (a.trigger_seq != b.trigger_seq) return a.trigger_seq < b.trigger_seq;
  return detect::detection_rank_less(a, b);
}

std::string label_key(detect::Label l) { return std::string(detect::to_string(l)); }

}  // namespace

std::vector<Track> track_detections(std::span<const detect::Detection> detections, const TrackParams& params,
                                    const geom::LocalFrame& frame) {
  std::vector<detect::Detection> dets(detections.begin(), detections.end());
  std::sort(dets.begin(), dets.end(), time_order);
  const std::size_t n = dets.size();
  std::vector<Eigen::Vector2d> xy(n, Eigen::Vector2d::Zero());
  for (std::size_t i = 0; i < n; ++i) {
    if (dets[i].ground) xy[i] = frame.to_enu(*dets[i].ground).head<2>();
  }

  DisjointSets sets(n);
  if (params.radius_m > 0.0) {
    const double r2 = params.radius_m * params.radius_m;
    for (std::size_t i = 0; i < n; ++i) {
      if (!dets[i].ground) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        // Sorted by trigger, so the gap only grows with j.
        if (dets[j].trigger_seq - dets[i].trigger_seq > params.max_gap) break;
        if (dets[j].ground && (xy[j] - xy[i]).squaredNorm() <= r2) sets.join(i, j);
      }
    }
  }

  // Roots are the smallest index of each component, so tracks are numbered
  // by their first member.
  std::map<std::size_t, std::size_t> track_of_root;
  std::vector<Track> tracks;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    auto [it, fresh] = track_of_root.try_emplace(root, tracks.size());
    if (fresh) {
      Track t;
      t.id = static_cast<int>(tracks.size()) + 1;
      tracks.push_back(std::move(t));
    }
    tracks[it->second].members.push_back(dets[i]);
  }

  for (Track& t : tracks) {
    t.first_seq = t.members.front().trigger_seq;
    t.last_seq = t.members.back().trigger_seq;
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    int grounded = 0;
    std::map<detect::Label, std::pair<int, double>> votes;  // count, best score
    t.best_score = 0.0;
    for (const auto& d : t.members) {
      if (d.ground) {
        sum += frame.to_enu(*d.ground);
        ++grounded;
      }
      auto& [count, best] = votes[d.label];
      ++count;
      best = std::max(best, d.score);
      t.best_score = std::max(t.best_score, d.score);
    }
    if (grounded) t.location = frame.to_geo(Eigen::Vector3d(sum / grounded));
    auto winner = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it) {
      const auto& [c, s] = it->second;
      const auto& [wc, ws] = winner->second;
      if (c > wc || (c == wc && s > ws)) winner = it;
    }
    t.label = winner->first;
  }
  return tracks;
}

DetectionSummary detection_summary(std::span<const Track> tracks, const CoverageSummary& coverage) {
  DetectionSummary s;
  s.tracks = static_cast<std::int64_t>(tracks.size());
  s.coverage_km2 = coverage.union_area_km2;
  for (const auto& t : tracks) {
    s.detections += static_cast<std::int64_t>(t.members.size());
    ++s.tracks_per_label[t.label];
  }
  if (s.coverage_km2 > 0.0) {
    s.density_per_km2 = static_cast<double>(s.tracks) / s.coverage_km2;
    for (const auto& [label, count] : s.tracks_per_label) {
      s.density_per_label[label] = static_cast<double>(count) / s.coverage_km2;
    }
  }
  s.track_list.assign(tracks.begin(), tracks.end());
  return s;
}

nlohmann::ordered_json to_json(const DetectionSummary& s) {
  auto per_label = nlohmann::ordered_json::object();
  for (const auto& [label, count] : s.tracks_per_label) {
    nlohmann::ordered_json e = {{"tracks", count}};
    const auto d = s.density_per_label.find(label);
    e["density_per_km2"] = d == s.density_per_label.end() ? nlohmann::ordered_json(nullptr)
                                                          : nlohmann::ordered_json(d->second);
    per_label[label_key(label)] = e;
  }
  auto tracks = nlohmann::ordered_json::array();
  for (const auto& t : s.track_list) {
    nlohmann::ordered_json j = {{"id", t.id},
                                {"label", label_key(t.label)},
                                {"members", t.members.size()},
                                {"best_score", t.best_score},
                                {"first_trigger", t.first_seq},
                                {"last_trigger", t.last_seq}};
    if (t.location) {
      j["lat"] = t.location->lat;
      j["lon"] = t.location->lon;
    } else {
      j["lat"] = nullptr;
      j["lon"] = nullptr;
    }
    tracks.push_back(std::move(j));
  }
  nlohmann::ordered_json out = {{"detections", s.detections},
                                {"tracks", s.tracks},
                                {"coverage_km2", s.coverage_km2}};
  out["density_per_km2"] = s.density_per_km2 ? nlohmann::ordered_json(*s.density_per_km2)
                                            : nlohmann::ordered_json(nullptr);
  out["per_label"] = per_label;
  out["track_list"] = tracks;
  return out;
}

nlohmann::ordered_json tracks_geojson(std::span<const Track> tracks) {
  auto features = nlohmann::ordered_json::array();
  for (const auto& t : tracks) {
    if (!t.location) continue;
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {t.location->lon, t.location->lat}}}},
                        {"properties",
                         {{"track_id", t.id},
                          {"label", label_key(t.label)},
                          {"count", t.members.size()},
                          {"best_score", t.best_score},
                          {"first_trigger", t.first_seq},
                          {"last_trigger", t.last_seq}}}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

std::string format_detection_table(const DetectionSummary& s) {
  std::string out = fmt::format("{:<14} {:>8} {:>14}\n", "label", "tracks", "per_km2");
  for (const auto& [label, count] : s.tracks_per_label) {
    const auto d = s.density_per_label.find(label);
    out += fmt::format("{:<14} {:>8} {:>14}\n", label_key(label), count,
                       d == s.density_per_label.end() ? std::string("-") : fmt::format("{:.6f}", d->second));
  }
  out += fmt::format("{:<14} {:>8} {:>14}\n", "all", s.tracks,
                     s.density_per_km2 ? fmt::format("{:.6f}", *s.density_per_km2) : std::string("-"));
  out += fmt::format("detections {}  coverage {:.6f} km2\n", s.detections, s.coverage_km2);
  return out;
}

}  // namespace aerosurvey::products
