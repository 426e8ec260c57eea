#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "dronesurvey/diagnostics.hpp"
#include "dronesurvey/geodesy.hpp"

namespace dronesurvey {

/// Simple polygon over WGS-84 vertices, implicitly closed. Vertex altitude is
/// ignored.
struct PolygonRegion {
  std::vector<GeoPoint> vertices;
};

struct CircumRectangle {
  double min_lat = 0.0;
  double max_lat = 0.0;
  double min_lon = 0.0;
  double max_lon = 0.0;

  friend bool operator==(const CircumRectangle&, const CircumRectangle&) = default;
};

/// Downward-facing survey camera. `half_fov_deg` is half the field of view,
/// `overlap_fraction` the desired image overlap, `altitude_m` the flight height.
struct CameraModel {
  double half_fov_deg = 45.0;
  double overlap_fraction = 0.2;
  double altitude_m = 32.0;

  friend bool operator==(const CameraModel&, const CameraModel&) = default;
};

struct LatticeIndex {
  int row = 0;  // along latitude (north)
  int col = 0;  // along longitude (east)

  friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;
};

struct Waypoint {
  GeoPoint position;
  LatticeIndex index;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct WaypointGrid {
  double spacing_m = 0.0;
  CircumRectangle rect;
  std::vector<Waypoint> points;
};

class InvalidRegion : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Points closer than this to an edge (in degrees, about 1 micrometer) are on
// the boundary and count as inside.
inline constexpr double kBoundaryToleranceDeg = 1e-11;

namespace detail {

struct Vec2 {
  double x;  // longitude
  double y;  // latitude
};

inline Vec2 planar(const GeoPoint& p) { return {p.lon_deg, p.lat_deg}; }

inline double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline bool on_segment(Vec2 p, Vec2 a, Vec2 b, double tol) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 == 0.0 ? 0.0 : ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  const double ex = a.x + t * dx - p.x;
  const double ey = a.y + t * dy - p.y;
  return ex * ex + ey * ey <= tol * tol;
}

inline bool segments_touch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return on_segment(a, c, d, 0.0) || on_segment(b, c, d, 0.0) || on_segment(c, a, b, 0.0) ||
         on_segment(d, a, b, 0.0);
}

// Number of lattice steps along one axis: indices run while the coordinate
// stays below max + spacing, so a span that is an exact multiple of the
// spacing ends on the boundary and any remainder adds one overhanging step.
inline int lattice_count(double span_m, double spacing_m) {
  const double ratio = span_m / spacing_m;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<int>(nearest) + 1;
  }
  return static_cast<int>(std::ceil(ratio)) + 1;
}

}  // namespace detail

/// Validates the region and returns it with vertices normalized. A trailing
/// vertex equal to the first (an explicitly closed ring) is dropped.
inline PolygonRegion validated(PolygonRegion region) {
  auto& v = region.vertices;
  for (auto& p : v) p = validated(p);
  if (v.size() > 1 && v.front().lat_deg == v.back().lat_deg &&
      v.front().lon_deg == v.back().lon_deg) {
    v.pop_back();
  }
  if (v.size() < 3) {
    throw InvalidRegion("polygon region needs at least 3 distinct vertices");
  }
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    if (a.lat_deg == b.lat_deg && a.lon_deg == b.lon_deg) {
      std::ostringstream msg;
      msg << "polygon vertices " << i << " and " << (i + 1) % n << " are repeated";
      throw InvalidRegion(msg.str());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (detail::segments_touch(detail::planar(v[i]), detail::planar(v[(i + 1) % n]),
                                 detail::planar(v[j]), detail::planar(v[(j + 1) % n]))) {
        std::ostringstream msg;
        msg << "polygon edges " << i << " and " << j << " intersect";
        throw InvalidRegion(msg.str());
      }
    }
  }
  return region;
}

/// Checks 0 < half_fov < 90, 0 <= overlap < 1, altitude > 0.
inline const CameraModel& validated(const CameraModel& camera) {
  if (!(camera.half_fov_deg > 0.0 && camera.half_fov_deg < 90.0)) {
    throw std::domain_error("camera half_fov_deg must lie in (0, 90)");
  }
  if (!(camera.overlap_fraction >= 0.0 && camera.overlap_fraction < 1.0)) {
    throw std::domain_error("camera overlap_fraction must lie in [0, 1)");
  }
  if (!(camera.altitude_m > 0.0) || !std::isfinite(camera.altitude_m)) {
    throw std::domain_error("camera altitude_m must be positive");
  }
  return camera;
}

inline CircumRectangle bounding_rectangle(const PolygonRegion& region) {
  if (region.vertices.size() < 3) {
    throw InvalidRegion("polygon region needs at least 3 vertices");
  }
  CircumRectangle rect{region.vertices.front().lat_deg, region.vertices.front().lat_deg,
                       region.vertices.front().lon_deg, region.vertices.front().lon_deg};
  for (const auto& p : region.vertices) {
    rect.min_lat = std::min(rect.min_lat, p.lat_deg);
    rect.max_lat = std::max(rect.max_lat, p.lat_deg);
    rect.min_lon = std::min(rect.min_lon, p.lon_deg);
    rect.max_lon = std::max(rect.max_lon, p.lon_deg);
  }
  return rect;
}

/// Ground width imaged by one photo: 2 h tan(theta).
inline double footprint_width(const CameraModel& camera) {
  validated(camera);
  return 2.0 * camera.altitude_m * std::tan(camera.half_fov_deg * std::numbers::pi / 180.0);
}

/// Distance between neighbouring capture points for the requested overlap:
/// w = 2 h tan(theta) (1 - y) / (1 + y).
inline double grid_spacing(const CameraModel& camera) {
  return footprint_width(camera) * (1.0 - camera.overlap_fraction) /
         (1.0 + camera.overlap_fraction);
}

/// Enumerates lattice points from the south-west corner of `rect`. Rows step
/// north by `spacing_m`; within a row, columns step east by `spacing_m`
/// converted at that row's latitude, so same-row neighbours are exactly one
/// spacing apart on the ground. Rows and columns overhang max_lat / max_lon by
/// less than one spacing.
inline std::vector<Waypoint> generate_lattice(const CircumRectangle& rect, double spacing_m,
                                              double origin_alt_m) {
  if (!(spacing_m > 0.0) || !std::isfinite(spacing_m)) {
    throw std::domain_error("lattice spacing must be positive and finite");
  }
  if (rect.min_lat > rect.max_lat || rect.min_lon > rect.max_lon) {
    throw std::invalid_argument("circum-rectangle bounds are inverted");
  }
  const GeoPoint corner = validated(GeoPoint{rect.min_lat, rect.min_lon, origin_alt_m});
  const auto south_scale = meters_per_degree(rect.min_lat);
  const double span_north_m = (rect.max_lat - rect.min_lat) * south_scale.lat_m;
  const double span_east_m = (rect.max_lon - rect.min_lon) * south_scale.lon_m;

  if (spacing_m > 10.0 * span_north_m && spacing_m > 10.0 * span_east_m) {
    if (span_north_m > 0.0 || span_east_m > 0.0) {
      std::ostringstream msg;
      msg << "spacing " << spacing_m << " m exceeds ten times the rectangle span ("
          << span_north_m << " m x " << span_east_m << " m); returning a single waypoint";
      warn(msg.str());
    }
    return {Waypoint{corner, {0, 0}}};
  }

  const int rows = detail::lattice_count(span_north_m, spacing_m);
  const int cols = detail::lattice_count(span_east_m, spacing_m);
  const double dlat = spacing_m / south_scale.lat_m;

  std::vector<Waypoint> points;
  points.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  for (int i = 0; i < rows; ++i) {
    const double lat = rect.min_lat + i * dlat;
    if (lat > 90.0) break;
    const double row_lon_m = meters_per_degree(lat).lon_m;
    if (row_lon_m == 0.0) {
      points.push_back({GeoPoint{lat, corner.lon_deg, origin_alt_m}, {i, 0}});
      continue;
    }
    const double dlon = spacing_m / row_lon_m;
    for (int j = 0; j < cols; ++j) {
      points.push_back(
          {GeoPoint{lat, normalize_longitude(rect.min_lon + j * dlon), origin_alt_m}, {i, j}});
    }
  }
  return points;
}

/// Ray casting along increasing longitude. An edge is crossed when one
/// endpoint is strictly north of the point and the other is at or south of
/// it. Points on the boundary are inside.
inline bool point_in_polygon(const GeoPoint& p, const PolygonRegion& region) {
  const auto& v = region.vertices;
  const std::size_t n = v.size();
  if (n < 3) throw InvalidRegion("polygon region needs at least 3 vertices");
  const detail::Vec2 q = detail::planar(p);
  for (std::size_t i = 0, k = n - 1; i < n; k = i++) {
    if (detail::on_segment(q, detail::planar(v[k]), detail::planar(v[i]), kBoundaryToleranceDeg)) {
      return true;
    }
  }
  bool inside = false;
  for (std::size_t i = 0, k = n - 1; i < n; k = i++) {
    const detail::Vec2 a = detail::planar(v[k]);
    const detail::Vec2 b = detail::planar(v[i]);
    if ((a.y > q.y) != (b.y > q.y)) {
      const double x_cross = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (x_cross > q.x) inside = !inside;
    }
  }
  return inside;
}

/// Circum-rectangle, spacing, lattice and polygon filter in one pass.
inline WaypointGrid generate_waypoints(const PolygonRegion& region, const CameraModel& camera) {
  const PolygonRegion poly = validated(region);
  validated(camera);
  WaypointGrid grid;
  grid.rect = bounding_rectangle(poly);
  grid.spacing_m = grid_spacing(camera);
  auto lattice = generate_lattice(grid.rect, grid.spacing_m, camera.altitude_m);
  std::erase_if(lattice, [&](const Waypoint& w) { return !point_in_polygon(w.position, poly); });
  grid.points = std::move(lattice);
  if (grid.points.empty()) {
    warn("survey region is thinner than the grid spacing everywhere; no waypoints generated");
  }
  return grid;
}

}  // namespace dronesurvey
