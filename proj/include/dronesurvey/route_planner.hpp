#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "dronesurvey/geodesy.hpp"
#include "dronesurvey/survey_grid.hpp"

namespace dronesurvey {

struct Agent {
  std::string id;
  GeoPoint home;
  double velocity_mps = 1.0;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Travel cost between two positions. Must be non-negative with cost(p, p) = 0.
using CostFunction = std::function<double(const GeoPoint&, const GeoPoint&)>;

inline CostFunction default_cost() { return [](const GeoPoint& a, const GeoPoint& b) { return distance_m(a, b); }; }

struct AgentRoute {
  std::string agent_id;
  std::vector<Waypoint> waypoints;  // visit order, home excluded
};

/// One route per agent, in fleet order.
struct RoutePlan {
  std::vector<AgentRoute> routes;

  const AgentRoute* find(const std::string& agent_id) const {
    auto it = std::find_if(routes.begin(), routes.end(),
                           [&](const AgentRoute& r) { return r.agent_id == agent_id; });
    return it == routes.end() ? nullptr : &*it;
  }

  std::size_t waypoint_count() const {
    std::size_t total = 0;
    for (const auto& r : routes) total += r.waypoints.size();
    return total;
  }
};

class InstanceTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline void validate_fleet(std::span<const Agent> fleet) {
  if (fleet.empty()) throw std::invalid_argument("fleet must contain at least one agent");
  std::unordered_set<std::string> seen;
  for (const auto& a : fleet) {
    if (a.id.empty()) throw std::invalid_argument("agent id must not be empty");
    if (!seen.insert(a.id).second) throw std::invalid_argument("duplicate agent id '" + a.id + "'");
    if (!(a.velocity_mps > 0.0) || !std::isfinite(a.velocity_mps)) {
      throw std::invalid_argument("agent '" + a.id + "' velocity must be positive and finite");
    }
    validated(a.home);
  }
}

namespace detail {

inline void reject_duplicate_waypoints(std::span<const Waypoint> waypoints) {
  std::vector<std::tuple<double, double, double>> keys;
  keys.reserve(waypoints.size());
  for (const auto& w : waypoints) {
    keys.emplace_back(w.position.lat_deg, w.position.lon_deg, w.position.alt_m);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw std::invalid_argument("waypoint set contains duplicate positions");
  }
}

}  // namespace detail

/// Round-robin nearest-neighbour assignment. Each agent starts at its home;
/// agents take turns in fleet order, and the agent whose turn it is appends
/// the unvisited waypoint cheapest to reach from its current position. Ties go
/// to the lowest lattice index, then to input order.
inline RoutePlan plan_routes(std::span<const Agent> agents, std::span<const Waypoint> waypoints,
                             const CostFunction& cost = default_cost()) {
  validate_fleet(agents);
  detail::reject_duplicate_waypoints(waypoints);

  std::vector<std::size_t> to_visit(waypoints.size());
  std::iota(to_visit.begin(), to_visit.end(), std::size_t{0});
  std::stable_sort(to_visit.begin(), to_visit.end(), [&](std::size_t a, std::size_t b) {
    return waypoints[a].index < waypoints[b].index;
  });

  RoutePlan plan;
  plan.routes.reserve(agents.size());
  std::vector<GeoPoint> position;
  position.reserve(agents.size());
  for (const auto& a : agents) {
    plan.routes.push_back({a.id, {}});
    position.push_back(a.home);
  }

  std::size_t current = 0;
  while (!to_visit.empty()) {
    std::size_t best_slot = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t slot = 0; slot < to_visit.size(); ++slot) {
      const double c = cost(position[current], waypoints[to_visit[slot]].position);
      if (c < best_cost) {
        best_cost = c;
        best_slot = slot;
      }
    }
    const Waypoint& chosen = waypoints[to_visit[best_slot]];
    plan.routes[current].waypoints.push_back(chosen);
    position[current] = chosen.position;
    to_visit.erase(to_visit.begin() + static_cast<std::ptrdiff_t>(best_slot));
    current = (current + 1) % agents.size();
  }
  return plan;
}

/// Convenience overload for bare positions; ties resolve by input order.
inline RoutePlan plan_routes(std::span<const Agent> agents, std::span<const GeoPoint> points,
                             const CostFunction& cost = default_cost()) {
  std::vector<Waypoint> waypoints;
  waypoints.reserve(points.size());
  for (const auto& p : points) waypoints.push_back({p, {}});
  return plan_routes(agents, std::span<const Waypoint>(waypoints), cost);
}

/// Cost of flying home -> first -> ... -> last (no return leg).
inline double route_cost(const GeoPoint& home, std::span<const Waypoint> route,
                         const CostFunction& cost = default_cost()) {
  double total = 0.0;
  GeoPoint at = home;
  for (const auto& w : route) {
    total += cost(at, w.position);
    at = w.position;
  }
  return total;
}

inline const Agent& find_agent(std::span<const Agent> fleet, const std::string& id) {
  auto it = std::find_if(fleet.begin(), fleet.end(), [&](const Agent& a) { return a.id == id; });
  if (it == fleet.end()) throw std::invalid_argument("route references unknown agent '" + id + "'");
  return *it;
}

/// Per-route flight time in seconds, in plan order.
inline std::vector<double> route_durations(const RoutePlan& plan, std::span<const Agent> fleet,
                                           const CostFunction& cost = default_cost()) {
  std::vector<double> durations;
  durations.reserve(plan.routes.size());
  for (const auto& r : plan.routes) {
    const Agent& agent = find_agent(fleet, r.agent_id);
    durations.push_back(route_cost(agent.home, r.waypoints, cost) / agent.velocity_mps);
  }
  return durations;
}

/// Completion time of the slowest agent, all agents launching together.
inline double makespan(const RoutePlan& plan, std::span<const Agent> fleet,
                       const CostFunction& cost = default_cost()) {
  const auto durations = route_durations(plan, fleet, cost);
  double worst = 0.0;
  for (double d : durations) worst = std::max(worst, d);
  return worst;
}

enum class TspMode { tour, path };

inline constexpr std::size_t kHeldKarpMaxPoints = 18;

/// Exact Held-Karp optimum. `tour` closes the cycle; `path` is an open path,
/// optionally anchored at an external `start` position (cost from start to the
/// first point is included).
inline double tsp_optimal(std::span<const GeoPoint> points, const CostFunction& cost = default_cost(),
                          TspMode mode = TspMode::tour,
                          const std::optional<GeoPoint>& start = std::nullopt) {
  const std::size_t n = points.size();
  if (n > kHeldKarpMaxPoints) {
    std::ostringstream msg;
    msg << "exact TSP is limited to " << kHeldKarpMaxPoints << " points (got " << n
        << "); use mtsp_lower_bound on a smaller instance or report the heuristic only";
    throw InstanceTooLarge(msg.str());
  }
  if (n == 0) return 0.0;
  if (n == 1) return mode == TspMode::path && start ? cost(*start, points[0]) : 0.0;

  std::vector<double> c(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = i == j ? 0.0 : cost(points[i], points[j]);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Tours fix point 0 as the start and run the table over the other n - 1.
  const bool tour = mode == TspMode::tour;
  const std::size_t m = tour ? n - 1 : n;
  const std::size_t offset = tour ? 1 : 0;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> dp((std::size_t{1} << m) * m, kInf);
  auto at = [&](std::size_t mask, std::size_t last) -> double& { return dp[mask * m + last]; };

  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t node = k + offset;
    double init = 0.0;
    if (tour) {
      init = c[0 * n + node];
    } else if (start) {
      init = cost(*start, points[node]);
    }
    at(std::size_t{1} << k, k) = init;
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t last = 0; last < m; ++last) {
      if (!(mask & (std::size_t{1} << last))) continue;
      const double here = at(mask, last);
      if (here == kInf) continue;
      for (std::size_t next = 0; next < m; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t grown = mask | (std::size_t{1} << next);
        const double cand = here + c[(last + offset) * n + (next + offset)];
        if (cand < at(grown, next)) at(grown, next) = cand;
      }
    }
  }
  double best = kInf;
  for (std::size_t last = 0; last < m; ++last) {
    const double closing = tour ? c[(last + offset) * n + 0] : 0.0;
    best = std::min(best, at(full, last) + closing);
  }
  return best;
}

/// Lower bound on the total cost of an n-agent solution: optimal single tour / n.
inline double mtsp_lower_bound(std::span<const GeoPoint> points, std::size_t n_agents,
                               const CostFunction& cost = default_cost()) {
  if (n_agents == 0) throw std::invalid_argument("lower bound needs at least one agent");
  return tsp_optimal(points, cost, TspMode::tour) / static_cast<double>(n_agents);
}

struct MtspOptimum {
  double makespan_s = 0.0;
  RoutePlan plan;
};

inline constexpr std::size_t kBruteForceMaxPoints = 8;
inline constexpr std::size_t kBruteForceMaxAgents = 3;

/// Exhaustive minimum makespan over every assignment of points to agents and
/// every visiting order within each assignment. Agents start at their homes
/// and do not return.
inline MtspOptimum brute_force_mtsp(std::span<const GeoPoint> points, std::span<const Agent> agents,
                                    const CostFunction& cost = default_cost()) {
  validate_fleet(agents);
  const std::size_t n = points.size();
  const std::size_t k = agents.size();
  if (n > kBruteForceMaxPoints || k > kBruteForceMaxAgents) {
    std::ostringstream msg;
    msg << "brute-force MTSP is limited to " << kBruteForceMaxPoints << " points and "
        << kBruteForceMaxAgents << " agents (got " << n << " points, " << k << " agents)";
    throw InstanceTooLarge(msg.str());
  }

  const std::size_t subsets = std::size_t{1} << n;
  // best_time[a][mask]: fastest ordering of `mask` for agent a.
  std::vector<std::vector<double>> best_time(k, std::vector<double>(subsets, 0.0));
  std::vector<std::vector<std::vector<std::size_t>>> best_order(
      k, std::vector<std::vector<std::size_t>>(subsets));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<std::size_t> order;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (std::size_t{1} << i)) order.push_back(i);
      }
      double best = std::numeric_limits<double>::infinity();
      std::vector<std::size_t> best_perm;
      do {
        double total = 0.0;
        GeoPoint at = agents[a].home;
        for (std::size_t idx : order) {
          total += cost(at, points[idx]);
          at = points[idx];
        }
        if (total < best) {
          best = total;
          best_perm = order;
        }
      } while (std::next_permutation(order.begin(), order.end()));
      best_time[a][mask] = best / agents[a].velocity_mps;
      best_order[a][mask] = std::move(best_perm);
    }
  }

  std::size_t assignments = 1;
  for (std::size_t i = 0; i < n; ++i) assignments *= k;

  double best_makespan = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_masks(k, 0);
  std::vector<std::size_t> masks(k);
  for (std::size_t code = 0; code < assignments; ++code) {
    std::fill(masks.begin(), masks.end(), 0);
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      masks[rest % k] |= std::size_t{1} << i;
      rest /= k;
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < k; ++a) worst = std::max(worst, best_time[a][masks[a]]);
    if (worst < best_makespan) {
      best_makespan = worst;
      best_masks = masks;
    }
  }

  MtspOptimum result;
  result.makespan_s = best_makespan;
  for (std::size_t a = 0; a < k; ++a) {
    AgentRoute route{agents[a].id, {}};
    for (std::size_t idx : best_order[a][best_masks[a]]) route.waypoints.push_back({points[idx], {}});
    result.plan.routes.push_back(std::move(route));
  }
  return result;
}

}  // namespace dronesurvey
