// Acceptance suite: one PASS/FAIL line per criterion.
//
// usage: acceptance <dronesurvey-cli> <sample-config> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "dronesurvey/dronesurvey.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace dronesurvey;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Criterion {
 public:
  explicit Criterion(Outcome& out) : out_(out) {}
  void require(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
  }

 private:
  Outcome& out_;
};

int failures = 0;

void run_criterion(int id, const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (out.pass && elapsed >= budget_s) {
    out.pass = false;
    out.detail += " (runtime budget exceeded)";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] AC%d %s -- %s [%.3f s / budget %.0f s]\n", out.pass ? "PASS" : "FAIL", id, name.c_str(),
              out.detail.c_str(), elapsed, budget_s);
  std::fflush(stdout);
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v;
  return ss.str();
}

const GeoPoint kGalway{53.28, -9.06, 0};

std::vector<GeoPoint> random_cloud(std::mt19937_64& rng, std::size_t n, double half_span_m) {
  std::uniform_real_distribution<double> u(-half_span_m, half_span_m);
  std::vector<GeoPoint> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back(gps_offset(kGalway, {u(rng), u(rng), 0}));
  return pts;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// --- criteria ---------------------------------------------------------------

Outcome spacing_formula() {
  Outcome out;
  Criterion c(out);
  const CameraModel cam{45.0, 0.2, 32.0};
  const double w = grid_spacing(cam);
  const double W = footprint_width(cam);
  const double identity = (W - w) / (W + w);
  c.require(std::abs(w - 42.6667) <= 1e-4, "spacing " + fmt(w) + " differs from 42.6667 by more than 1e-4");
  c.require(std::abs(identity - 0.2) <= 1e-12, "overlap identity " + fmt(identity));
  if (out.pass) out.detail = "w = " + fmt(w) + " m, (W-w)/(W+w) = " + fmt(identity);
  return out;
}

Outcome radiation_law() {
  Outcome out;
  Criterion c(out);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> sigma(1e-3, 1e4), dist(kMinSourceDistanceM, 500.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const RadiationSource src{kGalway, sigma(rng)};
    const double d = dist(rng);
    const GeoPoint p{kGalway.lat_deg, kGalway.lon_deg, d};
    const double got = strength_at(src, p);
    const double want = src.sigma / (d * d);
    const double rel = std::abs(got - want) / want;
    worst = std::max(worst, rel);
    c.require(rel <= 1e-12, "sigma/d^2 mismatch at d = " + fmt(d));
    const double doubled = strength_at(src, GeoPoint{p.lat_deg, p.lon_deg, 2 * d});
    c.require(std::abs(doubled - got / 4.0) <= 1e-12 * got, "strength(2d) != strength(d)/4 at d = " + fmt(d));
  }
  if (out.pass) out.detail = "1000 samples, worst relative error " + fmt(worst);
  return out;
}

Outcome partition_and_balance() {
  Outcome out;
  Criterion c(out);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> radius(30.0, 280.0), lat(-60.0, 60.0), lon(-179.0, 179.0);
  std::uniform_int_distribution<std::size_t> agents(1, 8);
  std::size_t max_points = 0, total_points = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GeoPoint centre{lat(rng), lon(rng), 0};
    const auto scale = meters_per_degree(centre.lat_deg);
    const double r = radius(rng);
    PolygonRegion deg = oracle::random_star_polygon(rng, 0.0, 0.0, 1.0);
    for (auto& v : deg.vertices) {
      v = {centre.lat_deg + v.lat_deg * r / scale.lat_m, centre.lon_deg + v.lon_deg * r / scale.lon_m, 0};
    }
    const WaypointGrid grid = generate_waypoints(deg, CameraModel{});
    std::vector<Agent> fleet;
    const std::size_t n = agents(rng);
    for (std::size_t a = 0; a < n; ++a) {
      fleet.push_back({"rav-" + std::to_string(a), gps_offset(centre, {-r - 20.0 * a, -r, 0}), 5.0});
    }
    const RoutePlan plan = plan_routes(fleet, std::span<const Waypoint>(grid.points));
    c.require(grid.points.size() <= 200, "instance exceeded 200 waypoints");
    max_points = std::max(max_points, grid.points.size());
    total_points += grid.points.size();

    std::multiset<std::tuple<double, double, double>> covered, expected;
    std::size_t lo = grid.points.size(), hi = 0;
    for (const auto& route : plan.routes) {
      for (const auto& w : route.waypoints) covered.insert({w.position.lat_deg, w.position.lon_deg, w.position.alt_m});
      lo = std::min(lo, route.waypoints.size());
      hi = std::max(hi, route.waypoints.size());
    }
    for (const auto& w : grid.points) expected.insert({w.position.lat_deg, w.position.lon_deg, w.position.alt_m});
    c.require(covered == expected, "trial " + std::to_string(trial) + " is not a disjoint cover");
    c.require(plan.routes.size() == n, "trial " + std::to_string(trial) + " lost an agent");
    c.require(hi - lo <= 1, "trial " + std::to_string(trial) + " route-length spread " + std::to_string(hi - lo));
  }
  if (out.pass) {
    out.detail = "200 instances, " + std::to_string(total_points) + " waypoints total, max " +
                 std::to_string(max_points) + " per instance";
  }
  return out;
}

Outcome oracle_dominance_and_bound() {
  Outcome out;
  Criterion c(out);
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<std::size_t> npts(1, 8), nagents(2, 3);
  int bound_violations = 0;
  double worst_ratio = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto pts = random_cloud(rng, npts(rng), 250.0);
    const GeoPoint home = random_cloud(rng, 1, 250.0).front();
    const double v = 4.0;
    std::vector<Agent> fleet;
    for (std::size_t a = 0; a < nagents(rng); ++a) fleet.push_back({"rav-" + std::to_string(a), home, v});

    const RoutePlan plan = plan_routes(fleet, pts);
    const double nn = makespan(plan, fleet);
    const MtspOptimum opt = brute_force_mtsp(pts, fleet);
    c.require(nn >= opt.makespan_s * (1.0 - 1e-12),
              "trial " + std::to_string(trial) + ": NN " + fmt(nn) + " < optimum " + fmt(opt.makespan_s));

    std::vector<GeoPoint> with_home = pts;
    with_home.push_back(home);
    const double hk = tsp_optimal(with_home);
    const double brute = oracle::brute_force_tour(with_home, default_cost());
    c.require(std::abs(hk - brute) <= 1e-9 * std::max(1.0, brute),
              "trial " + std::to_string(trial) + ": Held-Karp " + fmt(hk) + " vs brute force " + fmt(brute));
    c.require(std::abs(tsp_optimal(pts) - oracle::brute_force_tour(pts, default_cost())) <= 1e-9 * std::max(1.0, brute),
              "trial " + std::to_string(trial) + ": Held-Karp mismatch without home");

    const double bound = hk / static_cast<double>(fleet.size());
    const double achieved = nn * v;
    if (bound > achieved * (1.0 + 1e-12)) ++bound_violations;
    if (achieved > 0) worst_ratio = std::max(worst_ratio, bound / achieved);
  }
  out.detail = "NN >= brute-force optimum and Held-Karp == permutation brute force on 100 instances; "
               "tour/n <= NN makespan*v violated on " +
               std::to_string(bound_violations) + "/100 (reported, not asserted), max bound/achieved " +
               fmt(worst_ratio);
  return out;
}

Outcome point_in_polygon_agreement() {
  Outcome out;
  Criterion c(out);
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  int disagreements = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto poly = oracle::random_star_polygon(rng, 0.0, 0.0, 1.0);
    const GeoPoint p{u(rng), u(rng), 0};
    if (point_in_polygon(p, poly) != (oracle::winding_number(p, poly) != 0)) ++disagreements;
  }
  c.require(disagreements == 0, std::to_string(disagreements) + " disagreements with the winding-number oracle");
  const PolygonRegion square{{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}};
  c.require(point_in_polygon({0.5, 0.5, 0}, square), "square centre not inside");
  c.require(!point_in_polygon({0.5, 1.5, 0}, square), "point beyond the square reported inside");
  PolygonRegion notch;
  const double xy[][2] = {{0, 0}, {4, 0}, {4, 3}, {3, 3}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
  for (auto& p : xy) notch.vertices.push_back({p[1], p[0], 0});
  c.require(!point_in_polygon({2, 2, 0}, notch), "U-notch point reported inside");
  if (out.pass) out.detail = "1000/1000 agree; square and U-notch fixtures exact";
  return out;
}

Outcome geodesy_round_trip() {
  Outcome out;
  Criterion c(out);
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> lat(-80, 80), lon(-180, 180), alt(0, 1000), off(-10000, 10000), up(0, 1000);
  double worst_deg = 0.0, worst_m = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const GeoPoint origin{lat(rng), lon(rng), alt(rng)};
    const GeoPoint p = gps_offset(origin, {off(rng), off(rng), up(rng)});
    const GeoPoint back = gps_offset(origin, gps_difference(origin, p));
    worst_deg = std::max({worst_deg, std::abs(back.lat_deg - p.lat_deg),
                          std::abs(normalize_longitude(back.lon_deg - p.lon_deg))});
    worst_m = std::max(worst_m, std::abs(back.alt_m - p.alt_m));
  }
  c.require(worst_deg <= 1e-9, "angular error " + fmt(worst_deg) + " deg");
  c.require(worst_m <= 1e-6, "altitude error " + fmt(worst_m) + " m");
  if (out.pass) out.detail = "10000 pairs, worst " + fmt(worst_deg) + " deg / " + fmt(worst_m) + " m";
  return out;
}

Outcome end_to_end_determinism(const std::string& cli, const std::string& config, const fs::path& scratch) {
  Outcome out;
  Criterion c(out);
  const fs::path a = scratch / "sim_a", b = scratch / "sim_b";
  fs::remove_all(a);
  fs::remove_all(b);
  c.require(run_cli(cli, "simulate --config \"" + config + "\" --out \"" + a.string() + "\"") == 0, "first run failed");
  c.require(run_cli(cli, "simulate --config \"" + config + "\" --out \"" + b.string() + "\"") == 0, "second run failed");
  if (!out.pass) return out;
  c.require(read_file(a / "routes.geojson") == read_file(b / "routes.geojson"), "GeoJSON differs between runs");
  const std::string log = read_file(a / "observations.jsonl");
  c.require(log == read_file(b / "observations.jsonl"), "observation logs differ between runs");

  const MissionConfig cfg = parse_mission_config(read_file(config));
  const double expected = makespan(plan_mission(cfg).plan, cfg.fleet);
  std::istringstream lines(log);
  std::string line;
  double latest = 0.0;
  std::size_t observations = 0;
  while (std::getline(lines, line)) {
    const Json rec = Json::parse(line);
    if (rec["record"] != "waypoint_reached") continue;
    ++observations;
    latest = std::max(latest, rec["t"].get<double>());
  }
  c.require(std::abs(latest - expected) <= 1e-9 * std::max(1.0, expected),
            "max timestamp " + fmt(latest) + " vs makespan " + fmt(expected));
  if (out.pass) {
    out.detail = "byte-identical outputs; " + std::to_string(observations) + " observations, max t " + fmt(latest) +
                 " s = makespan";
  }
  return out;
}

Outcome campus_plan(const std::string& cli, const std::string& config, const fs::path& scratch) {
  Outcome out;
  Criterion c(out);
  const fs::path dir = scratch / "plan";
  fs::remove_all(dir);
  c.require(run_cli(cli, "plan --config \"" + config + "\" --out \"" + dir.string() + "\"") == 0, "plan failed");
  if (!out.pass) return out;
  const Json doc = Json::parse(read_file(dir / "routes.geojson"));
  const auto problems = oracle::geojson_problems(doc);
  c.require(problems.empty(), problems.empty() ? "" : problems.front());

  std::map<std::pair<double, double>, int> point_features, route_visits;
  int lines = 0;
  for (const auto& f : doc["features"]) {
    const auto& g = f["geometry"];
    if (g["type"] == "Point") {
      point_features[{g["coordinates"][0].get<double>(), g["coordinates"][1].get<double>()}]++;
    } else if (g["type"] == "LineString") {
      ++lines;
      for (std::size_t k = 1; k < g["coordinates"].size(); ++k) {
        route_visits[{g["coordinates"][k][0].get<double>(), g["coordinates"][k][1].get<double>()}]++;
      }
    }
  }
  c.require(lines == 3, std::to_string(lines) + " LineString routes instead of 3");
  c.require(!point_features.empty(), "no waypoints");
  bool exactly_once = route_visits.size() == point_features.size();
  for (const auto& [pos, count] : point_features) {
    exactly_once = exactly_once && count == 1 && route_visits.count(pos) && route_visits.at(pos) == 1;
  }
  c.require(exactly_once, "routes do not visit every waypoint exactly once");
  if (out.pass) {
    out.detail = "valid FeatureCollection, " + std::to_string(point_features.size()) +
                 " waypoints covered once by 3 routes";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: acceptance <dronesurvey-cli> <sample-config> <scratch-dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::string config = argv[2];
  const fs::path scratch = argv[3];
  fs::create_directories(scratch);
  set_warning_handler({});

  run_criterion(1, "spacing formula", 1, spacing_formula);
  run_criterion(2, "radiation inverse-square law", 1, radiation_law);
  run_criterion(3, "partition and balance", 10, partition_and_balance);
  run_criterion(4, "oracle dominance and lower bound", 60, oracle_dominance_and_bound);
  run_criterion(5, "point-in-polygon", 5, point_in_polygon_agreement);
  run_criterion(6, "geodesy round trip", 1, geodesy_round_trip);
  run_criterion(7, "end-to-end determinism", 5, [&] { return end_to_end_determinism(cli, config, scratch); });
  run_criterion(8, "campus plan GeoJSON", 5, [&] { return campus_plan(cli, config, scratch); });

  std::printf("%d of 8 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
