#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dronesurvey/mission_io.hpp"
#include "dronesurvey/mission_sim.hpp"
#include "dronesurvey/route_planner.hpp"
#include "dronesurvey/survey_grid.hpp"

namespace dronesurvey {

struct MissionPlan {
  WaypointGrid grid;
  RoutePlan plan;
};

/// Keeps the first `n` agents of the fleet.
inline MissionConfig with_agent_count(MissionConfig cfg, std::size_t n) {
  if (n == 0) throw std::invalid_argument("--agents must be at least 1");
  if (n > cfg.fleet.size()) {
    throw std::invalid_argument("--agents " + std::to_string(n) + " exceeds fleet size " +
                                std::to_string(cfg.fleet.size()));
  }
  cfg.fleet.resize(n);
  return cfg;
}

inline MissionPlan plan_mission(const MissionConfig& cfg) {
  MissionPlan mp;
  mp.grid = generate_waypoints(cfg.region, cfg.camera);
  mp.plan = plan_routes(cfg.fleet, std::span<const Waypoint>(mp.grid.points));
  return mp;
}

inline EventLog run_mission(const MissionConfig& cfg, const MissionPlan& mp) {
  SimulationOptions opts;
  opts.dwell_s = cfg.dwell_s;
  opts.mission_id = cfg.mission_id;
  opts.config_digest = config_digest(cfg);
  return simulate(mp.plan, cfg.fleet, cfg.camera, cfg.sources, cfg.noise, cfg.seed, opts);
}

/// Heuristic quality summary. The lower bound and exact optimum are filled in
/// only when the instance is small enough for the exact methods.
struct BoundReport {
  std::size_t waypoints = 0;
  std::size_t agents = 0;
  double nn_makespan_s = 0.0;
  double nn_longest_route_m = 0.0;
  std::optional<double> tsp_tour_m;
  std::optional<double> lower_bound_m;  // tsp_tour_m / agents
  std::optional<double> optimal_makespan_s;
};

inline BoundReport bound_report(const MissionConfig& cfg, const MissionPlan& mp) {
  BoundReport rep;
  rep.waypoints = mp.grid.points.size();
  rep.agents = cfg.fleet.size();
  rep.nn_makespan_s = makespan(mp.plan, cfg.fleet);
  for (const auto& r : mp.plan.routes) {
    rep.nn_longest_route_m =
        std::max(rep.nn_longest_route_m, route_cost(find_agent(cfg.fleet, r.agent_id).home, r.waypoints));
  }
  std::vector<GeoPoint> points;
  points.reserve(mp.grid.points.size());
  for (const auto& w : mp.grid.points) points.push_back(w.position);
  if (points.size() <= kHeldKarpMaxPoints) {
    rep.tsp_tour_m = tsp_optimal(points);
    rep.lower_bound_m = *rep.tsp_tour_m / static_cast<double>(rep.agents);
  }
  if (points.size() <= kBruteForceMaxPoints && cfg.fleet.size() <= kBruteForceMaxAgents) {
    rep.optimal_makespan_s = brute_force_mtsp(points, cfg.fleet).makespan_s;
  }
  return rep;
}

inline Json bound_report_to_json(const BoundReport& rep) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  return Json{{"waypoints", rep.waypoints},
              {"agents", rep.agents},
              {"nn_makespan_s", rep.nn_makespan_s},
              {"nn_longest_route_m", rep.nn_longest_route_m},
              {"tsp_tour_m", opt(rep.tsp_tour_m)},
              {"lower_bound_m", opt(rep.lower_bound_m)},
              {"optimal_makespan_s", opt(rep.optimal_makespan_s)}};
}

inline Json plan_to_json(const MissionPlan& mp) {
  Json routes = Json::array();
  for (const auto& r : mp.plan.routes) {
    Json wps = Json::array();
    for (const auto& w : r.waypoints) {
      wps.push_back(Json{{"row", w.index.row},
                         {"col", w.index.col},
                         {"lat", w.position.lat_deg},
                         {"lon", w.position.lon_deg},
                         {"alt", w.position.alt_m}});
    }
    routes.push_back(Json{{"agent_id", r.agent_id}, {"waypoints", std::move(wps)}});
  }
  const auto& rect = mp.grid.rect;
  return Json{{"spacing_m", mp.grid.spacing_m},
              {"rect",
               {{"min_lat", rect.min_lat}, {"max_lat", rect.max_lat}, {"min_lon", rect.min_lon}, {"max_lon", rect.max_lon}}},
              {"waypoint_count", mp.grid.points.size()},
              {"routes", std::move(routes)}};
}

}  // namespace dronesurvey
