// dronesurvey: plan, simulate and evaluate multi-drone survey missions.
//
//   dronesurvey plan     --config mission.json --out outdir
//   dronesurvey simulate --config mission.json --out outdir [--seed N]
//   dronesurvey bound    --config mission.json [--out outdir]
//   dronesurvey validate --config mission.json
//
// Every subcommand accepts --agents N to fly only the first N agents.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dronesurvey/dronesurvey.hpp"

namespace fs = std::filesystem;
using namespace dronesurvey;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> agents;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_out) {
  cmd->add_option("--config", opts.config, "Mission configuration (JSON)")->required()->check(CLI::ExistingFile);
  auto* out = cmd->add_option("--out", opts.out, "Output directory");
  if (needs_out) out->required();
  cmd->add_option("--seed", opts.seed, "Override the configured noise seed");
  cmd->add_option("--agents", opts.agents, "Use only the first N agents of the fleet");
}

MissionConfig load(const CommonOptions& opts) {
  MissionConfig cfg = parse_mission_config(read_file(opts.config));
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.agents) cfg = with_agent_count(std::move(cfg), *opts.agents);
  return cfg;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

void write_plan_outputs(const fs::path& dir, const MissionConfig& cfg, const MissionPlan& mp) {
  write_file_atomic(dir / "plan.json", plan_to_json(mp).dump(2) + "\n");
  write_file_atomic(dir / "routes.geojson", export_geojson(mp.grid, mp.plan, cfg.fleet).dump(2) + "\n");
}

int run_plan(const CommonOptions& opts) {
  const MissionConfig cfg = load(opts);
  const MissionPlan mp = plan_mission(cfg);
  const fs::path dir = prepare_out(opts.out);
  write_plan_outputs(dir, cfg, mp);
  std::cout << "planned " << mp.grid.points.size() << " waypoints (spacing " << mp.grid.spacing_m
            << " m) across " << cfg.fleet.size() << " agents; makespan " << makespan(mp.plan, cfg.fleet)
            << " s\n";
  return 0;
}

int run_simulate(const CommonOptions& opts) {
  const MissionConfig cfg = load(opts);
  const MissionPlan mp = plan_mission(cfg);
  const EventLog log = run_mission(cfg, mp);
  const fs::path dir = prepare_out(opts.out);
  write_plan_outputs(dir, cfg, mp);
  write_file_atomic(dir / "observations.jsonl", write_observation_log(log));
  std::cout << "simulated " << log.observations().size() << " observations; log written to "
            << (dir / "observations.jsonl").string() << "\n";
  return 0;
}

int run_bound(const CommonOptions& opts) {
  const MissionConfig cfg = load(opts);
  const MissionPlan mp = plan_mission(cfg);
  const std::string report = bound_report_to_json(bound_report(cfg, mp)).dump(2) + "\n";
  if (!opts.out.empty()) write_file_atomic(prepare_out(opts.out) / "bound.json", report);
  std::cout << report;
  return 0;
}

int run_validate(const CommonOptions& opts) {
  const MissionConfig cfg = load(opts);
  const WaypointGrid grid = generate_waypoints(cfg.region, cfg.camera);
  std::cout << "ok: mission '" << cfg.mission_id << "', " << cfg.region.vertices.size() << " vertices, "
            << cfg.fleet.size() << " agents, " << grid.points.size() << " waypoints, digest "
            << config_digest(cfg) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-drone survey planning and simulation"};
  app.require_subcommand(1);

  CommonOptions plan_opts, sim_opts, bound_opts, validate_opts;
  add_common(app.add_subcommand("plan", "Generate the waypoint grid, routes and GeoJSON"), plan_opts, true);
  add_common(app.add_subcommand("simulate", "Plan and fly the mission, writing the observation log"), sim_opts, true);
  add_common(app.add_subcommand("bound", "Report heuristic makespan against lower bounds"), bound_opts, false);
  add_common(app.add_subcommand("validate", "Check a mission configuration"), validate_opts, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("plan")) return run_plan(plan_opts);
    if (app.got_subcommand("simulate")) return run_simulate(sim_opts);
    if (app.got_subcommand("bound")) return run_bound(bound_opts);
    if (app.got_subcommand("validate")) return run_validate(validate_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
