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


#include "aerosurvey/products/coverage.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <cmath>

#include "aerosurvey/core/error.hpp"

namespace aerosurvey::products {
namespace {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint, /*clockwise=*/false, /*closed=*/true>;
using BgMulti = bg::model::multi_polygon<BgPolygon>;

constexpr double kMinArea = 1e-6;  // m²

template <typename BgRing>
void append_ring(BgRing& dst, const Ring& src) {
  for (const auto& p : src) dst.push_back(BgPoint(p.x(), p.y()));
  if (!src.empty()) dst.push_back(BgPoint(src.front().x(), src.front().y()));
}

template <typename BgRing>
Ring to_ring(const BgRing& r) {
  Ring out;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) out.emplace_back(r[i].x(), r[i].y());
  return out;
}

BgMulti to_bg(const Polygon& p) {
  BgPolygon g;
  append_ring(g.outer(), p.outer);
  for (const auto& h : p.holes) {
    g.inners().emplace_back();
    append_ring(g.inners().back(), h);
  }
  bg::correct(g);
  return BgMulti{g};
}

std::vector<Polygon> from_bg(const BgMulti& m) {
  std::vector<Polygon> out;
  for (const auto& g : m) {
    Polygon p;
    p.outer = to_ring(g.outer());
    for (const auto& h : g.inners()) p.holes.push_back(to_ring(h));
    out.push_back(std::move(p));
  }
  return out;
}

double ring_area(const Ring& r) {
  double a = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& p = r[i];
    const auto& n = r[(i + 1) % r.size()];
    a += p.x() * n.y() - n.x() * p.y();
  }
  return 0.5 * a;
}

nlohmann::ordered_json geo_ring(const Ring& r, const geom::LocalFrame& frame, double ground_up) {
  auto ring = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i <= r.size() && !r.empty(); ++i) {
    const auto& p = r[i % r.size()];
    const geom::GeoPoint g = frame.to_geo(Eigen::Vector3d(p.x(), p.y(), ground_up));
    ring.push_back({g.lon, g.lat});
  }
  return ring;
}

nlohmann::ordered_json geo_polygon(const Polygon& p, const geom::LocalFrame& frame, double ground_up) {
  auto rings = nlohmann::ordered_json::array({geo_ring(p.outer, frame, ground_up)});
  for (const auto& h : p.holes) rings.push_back(geo_ring(h, frame, ground_up));
  return rings;
}

bool finite(const geom::Footprint& f) {
  for (const auto& p : f.quad_enu) {
    if (!std::isfinite(p.x()) || !std::isfinite(p.y())) return false;
  }
  return std::isfinite(f.area_m2);
}

}  // namespace

double area_m2(const Polygon& p) {
  double a = std::abs(ring_area(p.outer));
  for (const auto& h : p.holes) a -= std::abs(ring_area(h));
  return a;
}

double area_m2(std::span<const Polygon> polygons) {
  double a = 0.0;
  for (const auto& p : polygons) a += area_m2(p);
  return a;
}

std::vector<Polygon> polygon_union(std::span<const Polygon> polygons) {
  std::vector<BgMulti> level;
  level.reserve(polygons.size());
  for (const auto& p : polygons) {
    if (p.outer.size() >= 3) level.push_back(to_bg(p));
  }
  if (level.empty()) return {};
  while (level.size() > 1) {
    std::vector<BgMulti> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) {
      BgMulti merged;
      bg::union_(level[i], level[i + 1], merged);
      next.push_back(std::move(merged));
    }
    if (level.size() % 2) next.push_back(std::move(level.back()));
    level = std::move(next);
  }
  return from_bg(level.front());
}

Polygon to_polygon(const geom::Footprint& f) {
  Polygon p;
  p.outer.assign(f.quad_enu.begin(), f.quad_enu.end());
  if (ring_area(p.outer) < 0.0) std::reverse(p.outer.begin(), p.outer.end());
  return p;
}

CoverageSummary flight_summary(std::span<const SampleFootprint> footprints, const geom::LocalFrame& frame,
                               double ground_up) {
  CoverageSummary s;
  s.origin = frame.origin();
  s.ground_up = ground_up;
  std::map<std::string, std::vector<Polygon>> per_camera;
  std::vector<Polygon> all;
  for (const auto& sf : footprints) {
    const geom::Footprint& f = sf.footprint;
    if (!finite(f) || !(f.area_m2 > kMinArea)) {
      ++s.degenerate_skipped;
      continue;
    }
    auto [it, fresh] = s.cameras.try_emplace(f.camera_id);
    CameraCoverage& c = it->second;
    if (fresh) {
      c.camera_id = f.camera_id;
      c.first_seq = c.last_seq = sf.trigger_seq;
    }
    c.first_seq = std::min(c.first_seq, sf.trigger_seq);
    c.last_seq = std::max(c.last_seq, sf.trigger_seq);
    c.footprints.push_back(sf);
    c.footprint_area_sum_km2 += f.area_m2 * 1e-6;
    per_camera[f.camera_id].push_back(to_polygon(f));
    all.push_back(to_polygon(f));
  }
  for (auto& [id, c] : s.cameras) {
    c.union_polygons = polygon_union(per_camera[id]);
    c.union_area_km2 = area_m2(c.union_polygons) * 1e-6;
    s.footprint_area_sum_km2 += c.footprint_area_sum_km2;
  }
  s.union_polygons = polygon_union(all);
  s.union_area_km2 = area_m2(s.union_polygons) * 1e-6;
  return s;
}

std::vector<SampleFootprint> compute_footprints(std::span<const FootprintRequest> requests,
                                                const std::map<std::string, geom::CameraModel>& models,
                                                double ground_up, const geom::LocalFrame& frame,
                                                std::int64_t* skipped) {
  std::vector<SampleFootprint> out;
  for (const auto& r : requests) {
    for (const auto& cam : r.cameras) {
      const auto it = models.find(cam);
      if (it == models.end()) throw ConfigurationError(fmt::format("no camera model for '{}'", cam));
      try {
        out.push_back({r.trigger_seq, geom::image_footprint(it->second, r.pose, ground_up, frame)});
      } catch (const HorizonError&) {
        if (skipped) ++*skipped;
      }
    }
  }
  return out;
}

nlohmann::ordered_json camera_geojson(const CameraCoverage& c, const geom::LocalFrame& frame, double ground_up) {
  auto features = nlohmann::ordered_json::array();
  for (const auto& sf : c.footprints) {
    const Polygon p = to_polygon(sf.footprint);
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Polygon"}, {"coordinates", geo_polygon(p, frame, ground_up)}}},
                        {"properties",
                         {{"camera_id", c.camera_id},
                          {"kind", "footprint"},
                          {"trigger_seq", sf.trigger_seq},
                          {"time", sf.footprint.sample_time.iso8601()},
                          {"area_m2", sf.footprint.area_m2}}}});
  }
  auto multi = nlohmann::ordered_json::array();
  for (const auto& p : c.union_polygons) multi.push_back(geo_polygon(p, frame, ground_up));
  features.push_back({{"type", "Feature"},
                      {"geometry", {{"type", "MultiPolygon"}, {"coordinates", multi}}},
                      {"properties",
                       {{"camera_id", c.camera_id},
                        {"kind", "union"},
                        {"first_trigger", c.first_seq},
                        {"last_trigger", c.last_seq},
                        {"footprints", c.footprints.size()},
                        {"area_km2", c.union_area_km2}}}});
  return {{"type", "FeatureCollection"}, {"features", features}};
}

nlohmann::ordered_json to_json(const CoverageSummary& s) {
  auto cams = nlohmann::ordered_json::object();
  for (const auto& [id, c] : s.cameras) {
    cams[id] = {{"footprints", c.footprints.size()},
                {"first_trigger", c.first_seq},
                {"last_trigger", c.last_seq},
                {"footprint_area_sum_km2", c.footprint_area_sum_km2},
                {"union_area_km2", c.union_area_km2}};
  }
  return {{"origin", {{"lat", s.origin.lat}, {"lon", s.origin.lon}, {"alt", s.origin.alt}}},
          {"ground_up", s.ground_up},
          {"cameras", cams},
          {"footprint_area_sum_km2", s.footprint_area_sum_km2},
          {"union_area_km2", s.union_area_km2},
          {"degenerate_skipped", s.degenerate_skipped}};
}

std::string format_area_table(const CoverageSummary& s) {
  std::string out = fmt::format("{:<10} {:>10} {:>14} {:>14}\n", "camera", "footprints", "sum_km2", "union_km2");
  for (const auto& [id, c] : s.cameras) {
    out += fmt::format("{:<10} {:>10} {:>14.6f} {:>14.6f}\n", id, c.footprints.size(), c.footprint_area_sum_km2,
                       c.union_area_km2);
  }
  std::size_t n = 0;
  for (const auto& [id, c] : s.cameras) n += c.footprints.size();
  out += fmt::format("{:<10} {:>10} {:>14.6f} {:>14.6f}\n", "all", n, s.footprint_area_sum_km2, s.union_area_km2);
  if (s.degenerate_skipped) out += fmt::format("skipped {} degenerate footprints\n", s.degenerate_skipped);
  return out;
}

}  // namespace aerosurvey::products
