#pragma once

// Run configuration: one JSON document naming the grid, region, mesh,
// vessel, smoothing, waypoints and validation inputs. Relative paths are
// resolved against the directory holding the document.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "icenav/geo.hpp"
#include "icenav/grid.hpp"
#include "icenav/mesh.hpp"
#include "icenav/route.hpp"
#include "icenav/smoother.hpp"
#include "icenav/validation.hpp"
#include "icenav/vessel.hpp"

namespace icenav::cli {

struct Waypoint {
  std::string name;
  geo::GeoPoint position;
};

struct ValidationInputs {
  std::vector<std::filesystem::path> files;
  std::optional<TimeWindow> time_window;
  ValidationConfig config;
};

struct RunConfig {
  std::filesystem::path source;
  std::vector<std::filesystem::path> grid_files;
  std::optional<TimeWindow> time_window;
  Bounds region;
  double initial_cell_size = 0.0;  // degrees
  SplitConfig split;
  std::optional<std::filesystem::path> mesh_file;
  VesselConfig vessel;
  SmoothingConfig smoothing;
  Objective objective = Objective::travel_time;
  std::vector<Waypoint> waypoints;
  std::vector<std::pair<std::string, std::string>> pairs;
  ValidationInputs validation;

  const Waypoint& waypoint(const std::string& name) const;  // throws ParseError
};

RunConfig parse_config(const std::string& text, const std::filesystem::path& source);
RunConfig load_config(const std::filesystem::path& path);

/// "from,to" per line; blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> load_pairs(const std::filesystem::path& path);

}  // namespace icenav::cli
