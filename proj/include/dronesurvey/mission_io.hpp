#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "dronesurvey/geodesy.hpp"
#include "dronesurvey/mission_sim.hpp"
#include "dronesurvey/radiation_field.hpp"
#include "dronesurvey/route_planner.hpp"
#include "dronesurvey/survey_grid.hpp"

namespace dronesurvey {

using Json = nlohmann::ordered_json;

struct MissionConfig {
  std::string mission_id = "mission";
  PolygonRegion region;
  CameraModel camera;
  std::vector<Agent> fleet;
  std::vector<RadiationSource> sources;
  NoiseSpec noise;
  std::uint64_t seed = 0;
  double dwell_s = 0.0;
};

/// Raised for malformed or invalid mission documents; `path()` names the
/// offending element, e.g. "fleet[1].velocity_mps".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

namespace detail {

inline std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

inline std::string indexed(const std::string& parent, std::size_t i) {
  return parent + "[" + std::to_string(i) + "]";
}

class JsonReader {
 public:
  JsonReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {}

  void expect_object() const {
    if (!node_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    expect_object();
    for (const auto& [k, _] : node_.items()) {
      bool known = false;
      for (auto allowed : keys) known = known || k == allowed;
      if (!known) throw ConfigError(join(path_, k), "unknown key");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const Json& at(const std::string& key) const {
    if (!node_.contains(key)) throw ConfigError(join(path_, key), "required key is missing");
    return node_.at(key);
  }

  double number(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number()) throw ConfigError(join(path_, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(join(path_, key), "expected a finite number");
    return x;
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v.get<std::string>();
  }

  const Json& array(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array()) throw ConfigError(join(path_, key), "expected an array");
    return v;
  }

  std::string path(const std::string& key) const { return join(path_, key); }

 private:
  const Json& node_;
  std::string path_;
};

inline GeoPoint read_geo_point(const Json& node, const std::string& path) {
  JsonReader r(node, path);
  r.allow_only({"lat", "lon", "alt"});
  GeoPoint p{r.number("lat"), r.number("lon"), r.number_or("alt", 0.0)};
  if (p.lat_deg < -90.0 || p.lat_deg > 90.0) {
    throw ConfigError(r.path("lat"), "invariant -90 <= lat <= 90 violated");
  }
  if (p.alt_m < 0.0) throw ConfigError(r.path("alt"), "invariant alt >= 0 violated");
  return validated(p);
}

inline Json write_geo_point(const GeoPoint& p) {
  return Json{{"lat", p.lat_deg}, {"lon", p.lon_deg}, {"alt", p.alt_m}};
}

}  // namespace detail

/// Parses and validates a mission document (JSON). Missing optional values
/// take their defaults: altitude 32 m, overlap 0.2, half-FOV 45 deg, no noise,
/// seed 0, zero dwell.
inline MissionConfig parse_mission_config(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("malformed document: ") + e.what());
  }
  detail::JsonReader root(doc, "");
  if (!doc.is_object()) throw ConfigError("$", "expected an object at top level");
  root.allow_only({"mission_id", "region", "camera", "fleet", "sources", "noise", "seed", "dwell_s"});

  MissionConfig cfg;
  if (root.has("mission_id")) {
    cfg.mission_id = root.string("mission_id");
    if (cfg.mission_id.empty()) throw ConfigError("mission_id", "must not be empty");
  }

  const Json& region = root.array("region");
  for (std::size_t i = 0; i < region.size(); ++i) {
    cfg.region.vertices.push_back(detail::read_geo_point(region[i], detail::indexed("region", i)));
  }
  try {
    cfg.region = validated(cfg.region);
  } catch (const std::exception& e) {
    throw ConfigError("region", e.what());
  }

  if (root.has("camera")) {
    detail::JsonReader cam(root.at("camera"), "camera");
    cam.allow_only({"half_fov_deg", "overlap_fraction", "altitude_m"});
    cfg.camera.half_fov_deg = cam.number_or("half_fov_deg", cfg.camera.half_fov_deg);
    cfg.camera.overlap_fraction = cam.number_or("overlap_fraction", cfg.camera.overlap_fraction);
    cfg.camera.altitude_m = cam.number_or("altitude_m", cfg.camera.altitude_m);
  }
  if (!(cfg.camera.half_fov_deg > 0.0 && cfg.camera.half_fov_deg < 90.0)) {
    throw ConfigError("camera.half_fov_deg", "invariant 0 < half_fov_deg < 90 violated");
  }
  if (!(cfg.camera.overlap_fraction >= 0.0 && cfg.camera.overlap_fraction < 1.0)) {
    throw ConfigError("camera.overlap_fraction", "invariant 0 <= overlap_fraction < 1 violated");
  }
  if (!(cfg.camera.altitude_m > 0.0)) {
    throw ConfigError("camera.altitude_m", "invariant altitude_m > 0 violated");
  }

  const Json& fleet = root.array("fleet");
  if (fleet.empty()) throw ConfigError("fleet", "invariant fleet non-empty violated");
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    const std::string path = detail::indexed("fleet", i);
    detail::JsonReader a(fleet[i], path);
    a.allow_only({"id", "home", "velocity_mps"});
    Agent agent;
    agent.id = a.string("id");
    if (agent.id.empty()) throw ConfigError(a.path("id"), "must not be empty");
    for (const auto& other : cfg.fleet) {
      if (other.id == agent.id) throw ConfigError(a.path("id"), "invariant unique agent ids violated");
    }
    agent.home = detail::read_geo_point(a.at("home"), a.path("home"));
    agent.velocity_mps = a.number("velocity_mps");
    if (!(agent.velocity_mps > 0.0)) {
      throw ConfigError(a.path("velocity_mps"), "invariant velocity_mps > 0 violated");
    }
    cfg.fleet.push_back(std::move(agent));
  }

  if (root.has("sources")) {
    const Json& sources = root.array("sources");
    for (std::size_t i = 0; i < sources.size(); ++i) {
      const std::string path = detail::indexed("sources", i);
      detail::JsonReader s(sources[i], path);
      s.allow_only({"position", "sigma"});
      RadiationSource src{detail::read_geo_point(s.at("position"), s.path("position")), s.number("sigma")};
      if (src.sigma < 0.0) throw ConfigError(s.path("sigma"), "invariant sigma >= 0 violated");
      cfg.sources.push_back(src);
    }
  }

  if (root.has("noise")) {
    detail::JsonReader n(root.at("noise"), "noise");
    n.allow_only({"kind", "relative_sd"});
    const std::string kind = n.string("kind");
    if (kind == "none") {
      if (n.has("relative_sd")) throw ConfigError(n.path("relative_sd"), "not allowed for kind 'none'");
      cfg.noise = NoiseSpec::none();
    } else if (kind == "gaussian") {
      const double sd = n.number("relative_sd");
      if (sd < 0.0) throw ConfigError(n.path("relative_sd"), "invariant relative_sd >= 0 violated");
      cfg.noise = NoiseSpec::gaussian(sd);
    } else {
      throw ConfigError(n.path("kind"), "expected 'none' or 'gaussian'");
    }
  }

  if (root.has("seed")) {
    const Json& seed = root.at("seed");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    cfg.seed = seed.get<std::uint64_t>();
  }

  cfg.dwell_s = root.number_or("dwell_s", 0.0);
  if (cfg.dwell_s < 0.0) throw ConfigError("dwell_s", "invariant dwell_s >= 0 violated");
  return cfg;
}

inline Json mission_config_to_json(const MissionConfig& cfg) {
  Json doc;
  doc["mission_id"] = cfg.mission_id;
  Json region = Json::array();
  for (const auto& v : cfg.region.vertices) region.push_back(detail::write_geo_point(v));
  doc["region"] = std::move(region);
  doc["camera"] = Json{{"half_fov_deg", cfg.camera.half_fov_deg},
                       {"overlap_fraction", cfg.camera.overlap_fraction},
                       {"altitude_m", cfg.camera.altitude_m}};
  Json fleet = Json::array();
  for (const auto& a : cfg.fleet) {
    fleet.push_back(Json{{"id", a.id}, {"home", detail::write_geo_point(a.home)}, {"velocity_mps", a.velocity_mps}});
  }
  doc["fleet"] = std::move(fleet);
  Json sources = Json::array();
  for (const auto& s : cfg.sources) {
    sources.push_back(Json{{"position", detail::write_geo_point(s.position)}, {"sigma", s.sigma}});
  }
  doc["sources"] = std::move(sources);
  if (cfg.noise.kind == NoiseSpec::Kind::gaussian) {
    doc["noise"] = Json{{"kind", "gaussian"}, {"relative_sd", cfg.noise.relative_sd}};
  } else {
    doc["noise"] = Json{{"kind", "none"}};
  }
  doc["seed"] = cfg.seed;
  doc["dwell_s"] = cfg.dwell_s;
  return doc;
}

inline std::string serialize_mission_config(const MissionConfig& cfg) {
  return mission_config_to_json(cfg).dump(2) + "\n";
}

/// FNV-1a 64 over the compact canonical serialization, as 16 hex digits.
inline std::string config_digest(const MissionConfig& cfg) {
  const std::string canonical = mission_config_to_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// --- GeoJSON ----------------------------------------------------------------

inline Json lon_lat(const GeoPoint& p) { return Json::array({p.lon_deg, p.lat_deg}); }

/// Waypoints as Point features and each non-empty route as a LineString from
/// the agent's home. Coordinates are [longitude, latitude].
inline Json export_geojson(const WaypointGrid& grid, const RoutePlan& plan, std::span<const Agent> fleet) {
  using Key = std::tuple<double, double, double>;
  auto key = [](const GeoPoint& p) { return Key{p.lat_deg, p.lon_deg, p.alt_m}; };

  std::map<Key, std::pair<std::string, std::size_t>> assignment;
  for (const auto& r : plan.routes) {
    for (std::size_t k = 0; k < r.waypoints.size(); ++k) {
      assignment[key(r.waypoints[k].position)] = {r.agent_id, k + 1};
    }
  }

  Json features = Json::array();
  std::size_t matched = 0;
  for (const auto& w : grid.points) {
    Json props{{"kind", "waypoint"}, {"row", w.index.row}, {"col", w.index.col}};
    if (auto it = assignment.find(key(w.position)); it != assignment.end()) {
      props["agent_id"] = it->second.first;
      props["visit_order"] = it->second.second;
      ++matched;
    } else {
      props["agent_id"] = nullptr;
      props["visit_order"] = nullptr;
    }
    features.push_back(Json{{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", lon_lat(w.position)}}},
                            {"properties", std::move(props)}});
  }
  if (matched != assignment.size()) {
    throw std::invalid_argument("route plan contains waypoints that are not in the grid");
  }

  for (const auto& r : plan.routes) {
    if (r.waypoints.empty()) continue;
    const Agent& agent = find_agent(fleet, r.agent_id);
    Json coords = Json::array();
    coords.push_back(lon_lat(agent.home));
    for (const auto& w : r.waypoints) coords.push_back(lon_lat(w.position));
    features.push_back(Json{
        {"type", "Feature"},
        {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
        {"properties",
         {{"kind", "route"},
          {"agent_id", r.agent_id},
          {"leg_count", r.waypoints.size()},
          {"total_length_m", route_cost(agent.home, r.waypoints)}}}});
  }
  return Json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

// --- observation log --------------------------------------------------------

/// Line-delimited JSON: a header line, then one line per event.
inline std::string write_observation_log(const EventLog& log) {
  std::string out;
  out += Json{{"record", "header"},
              {"mission_id", log.mission_id},
              {"config_digest", log.config_digest},
              {"event_count", log.events.size()}}
             .dump();
  out += '\n';
  for (const auto& e : log.events) {
    Json line{{"record", to_string(e.kind)},
              {"t", e.t},
              {"agent_id", e.agent_id},
              {"lat", e.position.lat_deg},
              {"lon", e.position.lon_deg},
              {"alt", e.position.alt_m}};
    if (e.observation) {
      const auto& cam = e.observation->camera;
      line["radiation"] = e.observation->radiation;
      line["camera_meta"] = Json{{"altitude_m", cam.altitude_m},
                                 {"half_fov_deg", cam.half_fov_deg},
                                 {"footprint_width_m", cam.footprint_width_m},
                                 {"row", cam.index.row},
                                 {"col", cam.index.col}};
    }
    out += line.dump();
    out += '\n';
  }
  return out;
}

/// Writes to a sibling temporary file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dronesurvey
