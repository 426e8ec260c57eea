#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dronesurvey/diagnostics.hpp"

namespace dronesurvey {

// Spherical earth, WGS-84 equatorial radius (meters).
inline constexpr double kEarthRadiusM = 6378137.0;

// Spans wider than this (degrees) break the flat-plane assumption.
inline constexpr double kFlatPlaneSpanDeg = 1.0;

/// WGS-84 position. Longitude is kept in [-180, 180).
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_m = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Metric displacement in the local east/north/up frame.
struct EnuOffset {
  double east_m = 0.0;
  double north_m = 0.0;
  double up_m = 0.0;

  friend bool operator==(const EnuOffset&, const EnuOffset&) = default;

  friend EnuOffset operator+(const EnuOffset& a, const EnuOffset& b) {
    return {a.east_m + b.east_m, a.north_m + b.north_m, a.up_m + b.up_m};
  }
  friend EnuOffset operator*(double k, const EnuOffset& o) {
    return {k * o.east_m, k * o.north_m, k * o.up_m};
  }
};

/// Engine-frame position: north/east/down in centimeters (1 engine unit = 1 cm).
struct NedCm {
  double north_cm = 0.0;
  double east_cm = 0.0;
  double down_cm = 0.0;

  friend bool operator==(const NedCm&, const NedCm&) = default;

  friend NedCm operator+(const NedCm& a, const NedCm& b) {
    return {a.north_cm + b.north_cm, a.east_cm + b.east_cm, a.down_cm + b.down_cm};
  }
};

struct MetersPerDegree {
  double lat_m;
  double lon_m;
};

/// Wraps a longitude into [-180, 180).
inline double normalize_longitude(double lon_deg) {
  if (lon_deg >= -180.0 && lon_deg < 180.0) return lon_deg;
  double wrapped = std::fmod(lon_deg + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  wrapped -= 180.0;
  // fmod can land exactly on +180 after the shift for tiny negative inputs.
  if (wrapped >= 180.0) wrapped -= 360.0;
  return wrapped;
}

/// Checks the GeoPoint invariants and returns the point with its longitude
/// normalized. Throws std::domain_error on violation.
inline GeoPoint validated(GeoPoint p) {
  if (!std::isfinite(p.lat_deg) || p.lat_deg < -90.0 || p.lat_deg > 90.0) {
    std::ostringstream msg;
    msg << "latitude " << p.lat_deg << " outside [-90, 90]";
    throw std::domain_error(msg.str());
  }
  if (!std::isfinite(p.lon_deg)) throw std::domain_error("longitude is not finite");
  if (!std::isfinite(p.alt_m) || p.alt_m < 0.0) {
    std::ostringstream msg;
    msg << "altitude " << p.alt_m << " m must be finite and non-negative";
    throw std::domain_error(msg.str());
  }
  p.lon_deg = normalize_longitude(p.lon_deg);
  return p;
}

inline MetersPerDegree meters_per_degree(double lat_deg) {
  if (!std::isfinite(lat_deg) || lat_deg < -90.0 || lat_deg > 90.0) {
    std::ostringstream msg;
    msg << "latitude " << lat_deg << " outside [-90, 90]";
    throw std::domain_error(msg.str());
  }
  const double per_lat = std::numbers::pi * kEarthRadiusM / 180.0;
  // cos(pi/2) is ~6e-17 in floating point; the pole is pinned to exactly zero.
  const double per_lon =
      std::abs(lat_deg) == 90.0 ? 0.0 : per_lat * std::cos(lat_deg * std::numbers::pi / 180.0);
  return {per_lat, per_lon};
}

namespace detail {

inline double signed_lon_delta(double from_deg, double to_deg) {
  return normalize_longitude(to_deg - from_deg);
}

inline void check_flat_plane_span(double dlat_deg, double dlon_deg) {
  if (std::abs(dlat_deg) > kFlatPlaneSpanDeg || std::abs(dlon_deg) > kFlatPlaneSpanDeg) {
    std::ostringstream msg;
    msg << "span of " << std::abs(dlat_deg) << " deg lat / " << std::abs(dlon_deg)
        << " deg lon exceeds the flat-plane limit of " << kFlatPlaneSpanDeg << " deg";
    warn(msg.str());
  }
}

}  // namespace detail

/// Local displacement from `origin` to `target`. The longitude scale is taken
/// at the origin's latitude.
inline EnuOffset gps_difference(const GeoPoint& origin, const GeoPoint& target) {
  const GeoPoint o = validated(origin);
  const GeoPoint t = validated(target);
  const double dlat = t.lat_deg - o.lat_deg;
  const double dlon = detail::signed_lon_delta(o.lon_deg, t.lon_deg);
  detail::check_flat_plane_span(dlat, dlon);
  const auto scale = meters_per_degree(o.lat_deg);
  return {dlon * scale.lon_m, dlat * scale.lat_m, t.alt_m - o.alt_m};
}

/// Inverse of gps_difference at the same origin.
inline GeoPoint gps_offset(const GeoPoint& origin, const EnuOffset& offset) {
  const GeoPoint o = validated(origin);
  if (!std::isfinite(offset.east_m) || !std::isfinite(offset.north_m) ||
      !std::isfinite(offset.up_m)) {
    throw std::domain_error("offset components must be finite");
  }
  const auto scale = meters_per_degree(o.lat_deg);
  if (scale.lon_m == 0.0 && offset.east_m != 0.0) {
    throw std::domain_error("east displacement is undefined at a pole");
  }
  const double dlat = offset.north_m / scale.lat_m;
  const double dlon = offset.east_m == 0.0 ? 0.0 : offset.east_m / scale.lon_m;
  detail::check_flat_plane_span(dlat, dlon);
  GeoPoint result{o.lat_deg + dlat, o.lon_deg + dlon, o.alt_m + offset.up_m};
  if (result.lat_deg < -90.0 || result.lat_deg > 90.0) {
    std::ostringstream msg;
    msg << "offset moves latitude to " << result.lat_deg << ", outside [-90, 90]";
    throw std::domain_error(msg.str());
  }
  if (result.alt_m < 0.0) {
    std::ostringstream msg;
    msg << "offset moves altitude to " << result.alt_m << " m, below the reference plane";
    throw std::domain_error(msg.str());
  }
  result.lon_deg = normalize_longitude(result.lon_deg);
  return result;
}

inline NedCm to_engine_ned(const EnuOffset& offset) {
  return {100.0 * offset.north_m, 100.0 * offset.east_m, -100.0 * offset.up_m};
}

/// Distance in meters: great-circle ground distance on the survey sphere
/// combined in quadrature with the altitude difference. Symmetric and a true
/// metric; agrees with |gps_difference| to second order at survey scale.
inline double distance_m(const GeoPoint& a, const GeoPoint& b) {
  const GeoPoint p = validated(a);
  const GeoPoint q = validated(b);
  constexpr double kRad = std::numbers::pi / 180.0;
  const double dlat = (q.lat_deg - p.lat_deg) * kRad;
  const double dlon = detail::signed_lon_delta(p.lon_deg, q.lon_deg) * kRad;
  detail::check_flat_plane_span(dlat / kRad, dlon / kRad);
  const double s_lat = std::sin(0.5 * dlat);
  const double s_lon = std::sin(0.5 * dlon);
  const double h = s_lat * s_lat + std::cos(p.lat_deg * kRad) * std::cos(q.lat_deg * kRad) * s_lon * s_lon;
  const double ground = 2.0 * kEarthRadiusM * std::atan2(std::sqrt(h), std::sqrt(std::max(0.0, 1.0 - h)));
  const double up = q.alt_m - p.alt_m;
  return std::hypot(ground, up);
}

}  // namespace dronesurvey
