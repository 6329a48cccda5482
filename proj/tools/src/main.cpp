#include <cstdlib>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "icenav/cli/commands.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("icenav");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* level = std::getenv("ICENAV_LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(level));
}

}  // namespace

int main(int argc, char** argv) {
  using namespace icenav;
  using namespace icenav::cli;
  setup_logging();

  CLI::App app{"Route planning for ice-going vessels on an adaptive mesh"};
  app.require_subcommand(1);
  const std::map<std::string, Objective> objectives{
      {"time", Objective::travel_time}, {"fuel", Objective::fuel}, {"distance", Objective::distance}};

  MeshBuildOptions mb;
  auto* mesh_cmd = app.add_subcommand("mesh-build", "Build the mesh and neighbour graph from grid files");
  mesh_cmd->add_option("--config", mb.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  mesh_cmd->add_option("--out", mb.out, "Mesh JSON output (default: mesh.file from the config)");

  RouteOptions ro;
  auto* route_cmd = app.add_subcommand("route", "Plan a route between two named waypoints");
  route_cmd->add_option("--config", ro.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  route_cmd->add_option("--from", ro.from, "Start waypoint name")->required();
  route_cmd->add_option("--to", ro.to, "End waypoint name")->required();
  route_cmd->add_option("--objective", ro.objective, "time, fuel or distance")
      ->transform(CLI::CheckedTransformer(objectives));
  route_cmd->add_flag("--smooth", ro.smooth, "Smooth the mesh-optimal route");
  route_cmd->add_option("--out", ro.out, "GeoJSON output (default: FROM_TO.geojson)");
  route_cmd->add_option("--trace", ro.trace, "CSV of total time per smoothing sweep");

  ValidateOptions vo;
  auto* validate_cmd = app.add_subcommand("validate", "Count route samples in ice above the vessel limit");
  validate_cmd->add_option("--config", vo.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  validate_cmd->add_option("--routes", vo.routes, "GeoJSON route file or directory")->required();
  validate_cmd->add_option("--raw", vo.raw, "Raw grid files (default: validation.files from the config)");
  validate_cmd->add_option("--out", vo.out, "CSV output (default: stdout)");

  CompareOptions co;
  auto* compare_cmd = app.add_subcommand("compare", "Mesh-optimal vs smoothed times over many waypoint pairs");
  compare_cmd->add_option("--config", co.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  compare_cmd->add_option("--pairs", co.pairs, "CSV of from,to names (default: pairs from the config)");
  compare_cmd->add_option("--objective", co.objective, "time, fuel or distance")
      ->transform(CLI::CheckedTransformer(objectives));
  compare_cmd->add_option("--out", co.out, "CSV output (default: stdout)");
  compare_cmd->add_option("--routes-dir", co.routes_dir, "Write one GeoJSON per pair here");
  compare_cmd->add_option("--threads", co.threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);

  CrossingTableOptions xo;
  auto* table_cmd = app.add_subcommand("crossing-table", "Tabulate the crossing objective between two cells");
  table_cmd->add_option("--config", xo.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
  table_cmd->add_option("--src", xo.src, "Source cell id")->required();
  table_cmd->add_option("--dst", xo.dst, "Destination cell id")->required();
  table_cmd->add_option("--samples", xo.samples, "Number of rows");
  table_cmd->add_option("--out", xo.out, "CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*mesh_cmd) return cmd_mesh_build(mb, std::cout, std::cerr);
  if (*route_cmd) return cmd_route(ro, std::cout, std::cerr);
  if (*validate_cmd) return cmd_validate(vo, std::cout, std::cerr);
  if (*compare_cmd) return cmd_compare(co, std::cout, std::cerr);
  return cmd_crossing_table(xo, std::cout, std::cerr);
}
