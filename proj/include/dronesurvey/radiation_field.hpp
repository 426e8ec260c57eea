#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <stdexcept>

#include "dronesurvey/geodesy.hpp"

namespace dronesurvey {

/// Isotropic point emitter; `sigma` is the dose rate in uSv/s at 1 m.
struct RadiationSource {
  GeoPoint position;
  double sigma = 0.0;

  friend bool operator==(const RadiationSource&, const RadiationSource&) = default;
};

struct RadiationReading {
  double intensity = 0.0;  // uSv/s
  GeoPoint position;
};

// Readings closer than this to a source are evaluated at this distance.
inline constexpr double kMinSourceDistanceM = 0.1;

inline const RadiationSource& validated(const RadiationSource& source) {
  if (!std::isfinite(source.sigma) || source.sigma < 0.0) {
    throw std::domain_error("radiation source sigma must be finite and non-negative");
  }
  validated(source.position);
  return source;
}

/// Inverse-square falloff from the 1 m reference strength, lossless medium.
inline double inverse_square(double sigma, double distance_m) {
  const double d = std::max(distance_m, kMinSourceDistanceM);
  return sigma / (d * d);
}

inline double strength_at(const RadiationSource& source, const GeoPoint& p) {
  return inverse_square(source.sigma, distance_m(source.position, p));
}

/// Superposed field of all sources.
inline double total_intensity(std::span<const RadiationSource> sources, const GeoPoint& p) {
  double total = 0.0;
  for (const auto& s : sources) total += strength_at(s, p);
  return total;
}

struct NoiseSpec {
  enum class Kind { none, gaussian };
  Kind kind = Kind::none;
  double relative_sd = 0.0;

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double relative_sd) { return {Kind::gaussian, relative_sd}; }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

using NoiseEngine = std::mt19937_64;

/// Simulated detector output. Gaussian noise is multiplicative,
/// intensity * (1 + eps) with eps ~ N(0, sd^2), clamped at zero.
inline double sample_reading(double intensity, const NoiseSpec& noise, NoiseEngine& rng) {
  if (noise.kind == NoiseSpec::Kind::none) return intensity;
  if (!(noise.relative_sd >= 0.0) || !std::isfinite(noise.relative_sd)) {
    throw std::domain_error("gaussian noise relative_sd must be finite and non-negative");
  }
  if (noise.relative_sd == 0.0) return intensity;
  std::normal_distribution<double> eps(0.0, noise.relative_sd);
  return std::max(0.0, intensity * (1.0 + eps(rng)));
}

}  // namespace dronesurvey
