#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "dronesurvey/geodesy.hpp"
#include "dronesurvey/radiation_field.hpp"
#include "dronesurvey/route_planner.hpp"
#include "dronesurvey/survey_grid.hpp"

namespace dronesurvey {

/// Stand-in for the captured image.
struct CameraMeta {
  double altitude_m = 0.0;
  double half_fov_deg = 0.0;
  double footprint_width_m = 0.0;
  LatticeIndex index;

  friend bool operator==(const CameraMeta&, const CameraMeta&) = default;
};

struct ObservationRecord {
  double t = 0.0;  // seconds since mission start
  std::string agent_id;
  GeoPoint position;
  double radiation = 0.0;  // uSv/s
  CameraMeta camera;

  friend bool operator==(const ObservationRecord&, const ObservationRecord&) = default;
};

enum class EventKind { takeoff, waypoint_reached, route_complete };

inline const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::takeoff: return "takeoff";
    case EventKind::waypoint_reached: return "waypoint_reached";
    case EventKind::route_complete: return "route_complete";
  }
  return "unknown";
}

struct MissionEvent {
  EventKind kind = EventKind::takeoff;
  double t = 0.0;
  std::string agent_id;
  GeoPoint position;
  std::optional<ObservationRecord> observation;  // set for waypoint_reached

  friend bool operator==(const MissionEvent&, const MissionEvent&) = default;
};

/// Events ordered by (t, agent_id); an agent's own events keep flight order.
struct EventLog {
  std::string mission_id;
  std::string config_digest;
  std::vector<MissionEvent> events;

  std::vector<ObservationRecord> observations() const {
    std::vector<ObservationRecord> out;
    for (const auto& e : events) {
      if (e.observation) out.push_back(*e.observation);
    }
    return out;
  }
};

struct SimulationOptions {
  double dwell_s = 0.0;  // hover time per captured waypoint
  std::string mission_id = "mission";
  std::string config_digest;
};

inline double leg_duration(const GeoPoint& a, const GeoPoint& b, double velocity_mps) {
  if (!(velocity_mps > 0.0) || !std::isfinite(velocity_mps)) {
    throw std::domain_error("velocity must be positive and finite");
  }
  return distance_m(a, b) / velocity_mps;
}

/// Flies every route at constant velocity from a simultaneous launch at t = 0,
/// recording an observation on arrival at each waypoint. Noise draws are taken
/// in merged log order from a generator seeded with `seed`.
inline EventLog simulate(const RoutePlan& plan, std::span<const Agent> fleet, const CameraModel& camera,
                         std::span<const RadiationSource> sources, const NoiseSpec& noise,
                         std::uint64_t seed, const SimulationOptions& options = {}) {
  validate_fleet(fleet);
  validated(camera);
  for (const auto& s : sources) validated(s);
  if (!(options.dwell_s >= 0.0) || !std::isfinite(options.dwell_s)) {
    throw std::domain_error("dwell time must be finite and non-negative");
  }

  std::unordered_set<std::string> planned;
  for (const auto& r : plan.routes) {
    find_agent(fleet, r.agent_id);
    if (!planned.insert(r.agent_id).second) {
      throw std::invalid_argument("plan has more than one route for agent '" + r.agent_id + "'");
    }
  }
  for (const auto& a : fleet) {
    if (!planned.contains(a.id)) {
      throw std::invalid_argument("fleet agent '" + a.id + "' has no route in the plan");
    }
  }

  std::optional<double> mission_alt;
  for (const auto& r : plan.routes) {
    for (const auto& w : r.waypoints) {
      if (!mission_alt) mission_alt = w.position.alt_m;
      if (std::abs(w.position.alt_m - *mission_alt) > 1e-9) {
        throw std::invalid_argument("waypoints do not share a single mission altitude");
      }
    }
  }

  const double footprint = footprint_width(camera);

  struct Keyed {
    MissionEvent event;
    std::size_t seq;
  };
  std::vector<Keyed> keyed;
  for (const auto& r : plan.routes) {
    const Agent& agent = find_agent(fleet, r.agent_id);
    std::size_t seq = 0;
    keyed.push_back({{EventKind::takeoff, 0.0, agent.id, agent.home, std::nullopt}, seq++});
    GeoPoint at = agent.home;
    double flown_m = 0.0;
    double t = 0.0;
    std::size_t captured = 0;
    for (const auto& w : r.waypoints) {
      flown_m += distance_m(at, w.position);
      at = w.position;
      t = flown_m / agent.velocity_mps + static_cast<double>(captured) * options.dwell_s;
      ObservationRecord obs{t, agent.id, w.position, 0.0,
                            CameraMeta{camera.altitude_m, camera.half_fov_deg, footprint, w.index}};
      keyed.push_back({{EventKind::waypoint_reached, t, agent.id, w.position, obs}, seq++});
      ++captured;
    }
    if (captured > 0) t += options.dwell_s;
    keyed.push_back({{EventKind::route_complete, t, agent.id, at, std::nullopt}, seq++});
  }

  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return std::tie(a.event.t, a.event.agent_id, a.seq) < std::tie(b.event.t, b.event.agent_id, b.seq);
  });

  EventLog log{options.mission_id, options.config_digest, {}};
  log.events.reserve(keyed.size());
  NoiseEngine rng(seed);
  for (auto& k : keyed) {
    if (k.event.observation) {
      const double exact = total_intensity(sources, k.event.position);
      k.event.observation->radiation = sample_reading(exact, noise, rng);
    }
    log.events.push_back(std::move(k.event));
  }
  return log;
}

}  // namespace dronesurvey
