#pragma once

// Routes as polylines through mesh cells, and the metric used to cost them.
//
// A leg from P to Q inside one cell is costed on the equirectangular offset
// at the legs' mean latitude, with that cell's current and safe speed. Every
// reported route time, Dijkstra or smoothed, goes through this one metric.

#include <string>
#include <vector>

#include "icenav/geo.hpp"
#include "icenav/neighbour_graph.hpp"
#include "icenav/vessel.hpp"

namespace icenav {

enum class Objective { travel_time, fuel, distance };

Objective parse_objective(const std::string& name);  // time|travel_time|fuel|distance
std::string to_string(Objective o);

/// Read-only view of an augmented mesh shared by the planner and smoother.
struct MeshView {
  const NeighbourGraph& graph;
  const std::vector<CellPerformance>& perf;
  double earth_radius = geo::kEarthRadius;

  const CellBox& cell(int id) const { return graph.cell(id); }
  const CellPerformance& performance(int id) const { return perf.at(static_cast<std::size_t>(id)); }
  bool accessible(int id) const { return !graph.blocked(id) && performance(id).accessible; }
};

struct LegCost {
  double time_s = 0.0;
  double distance_m = 0.0;
  double fuel_t = 0.0;
  bool feasible = true;

  double cost(Objective o) const;
};

/// Straight in-cell leg measured with the offset at `ref_lat`.
LegCost leg_cost(const geo::GeoPoint& from, const geo::GeoPoint& to, double ref_lat, int cell, const MeshView& mesh);

/// Route-metric cost of a leg: reference latitude is the mean of the ends.
LegCost leg_cost(const geo::GeoPoint& from, const geo::GeoPoint& to, int cell, const MeshView& mesh);

struct RouteLeg {
  int cell = -1;
  double time_s = 0.0;
  double distance_m = 0.0;
  double fuel_t = 0.0;
};

struct Route {
  std::vector<geo::GeoPoint> points;
  std::vector<RouteLeg> legs;  // legs[k] joins points[k] and points[k + 1]
  double total_time_s = 0.0;
  double total_distance_m = 0.0;
  double total_fuel_t = 0.0;

  double total(Objective o) const;
};

/// Costs consecutive points, leg k lying in cells[k]. Throws InfeasibleError
/// if a leg cannot be travelled against its current.
Route evaluate_route(const std::vector<geo::GeoPoint>& points, const std::vector<int>& cells, const MeshView& mesh);

}  // namespace icenav
