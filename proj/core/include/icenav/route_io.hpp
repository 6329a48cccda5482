#pragma once

// GeoJSON (RFC 7946) route export and per-sweep smoothing traces.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "icenav/route.hpp"
#include "icenav/smoother.hpp"

namespace icenav {

struct RouteRecord {
  std::string kind;  // "dijkstra" or "smoothed"
  Route route;
  std::optional<int> iterations;
  std::optional<bool> converged;
};

struct RouteSummary {
  std::string from;
  std::string to;
  Objective objective = Objective::travel_time;
  std::string mesh_id;
};

/// Improvement of `after` over `before` in percent; 0 when before is 0.
double improvement_percent(double before, double after);

/// FeatureCollection with one LineString per record and a "summary" member.
std::string route_geojson(const std::vector<RouteRecord>& records, const RouteSummary& summary);

/// LineString coordinates of every feature in a GeoJSON document.
std::vector<std::vector<geo::GeoPoint>> read_route_lines(std::istream& in, const std::string& source = "<stream>");
std::vector<std::vector<geo::GeoPoint>> read_route_lines_file(const std::filesystem::path& path);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);

}  // namespace icenav
