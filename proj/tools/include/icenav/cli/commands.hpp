#pragma once

// Subcommands of the icenav tool. Each returns a process exit code and
// reports failures on `err`:
//   0 success, 1 usage or config, 2 I/O, 3 no route, 4 smoothing did not converge.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "icenav/cli/config.hpp"
#include "icenav/neighbour_graph.hpp"
#include "icenav/route.hpp"

namespace icenav::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kNoRoute = 3, kNotConverged = 4 };

/// Mesh with its graph, as built from the grid or read from the mesh file.
struct LoadedMesh {
  Bounds region;
  NeighbourGraph graph;
  std::string id;  // content id of the serialised mesh
};

NeighbourGraph build_graph(const RunConfig& cfg);
/// Reads cfg.mesh_file when it exists, otherwise builds from the grid.
LoadedMesh obtain_mesh(const RunConfig& cfg);

struct MeshBuildOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
};

struct RouteOptions {
  std::filesystem::path config;
  std::string from;
  std::string to;
  std::optional<Objective> objective;
  bool smooth = false;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> trace;
};

struct ValidateOptions {
  std::filesystem::path config;
  std::filesystem::path routes;  // GeoJSON file or directory of them
  std::vector<std::filesystem::path> raw;  // overrides the config's validation files
  std::optional<std::filesystem::path> out;
};

struct CompareOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> pairs;  // defaults to the config's pairs
  std::optional<Objective> objective;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> routes_dir;  // one GeoJSON per pair
  int threads = 0;  // 0: hardware concurrency
};

struct CrossingTableOptions {
  std::filesystem::path config;
  int src = -1;
  int dst = -1;
  int samples = 201;
  std::optional<std::filesystem::path> out;
};

int cmd_mesh_build(const MeshBuildOptions& o, std::ostream& out, std::ostream& err);
int cmd_route(const RouteOptions& o, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err);
int cmd_crossing_table(const CrossingTableOptions& o, std::ostream& out, std::ostream& err);

/// One row of the comparison table.
struct PairResult {
  std::string from;
  std::string to;
  std::string status;  // ok, no_route, not_converged
  double dijkstra_days = 0.0;
  double smoothed_days = 0.0;
  double improvement_pct = 0.0;
};

/// Fixed-precision CSV with mean and standard deviation rows over the ok pairs.
std::string comparison_csv(const std::vector<PairResult>& rows);

}  // namespace icenav::cli
