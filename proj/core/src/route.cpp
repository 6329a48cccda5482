#include "icenav/route.hpp"

#include <string>

#include "icenav/crossing.hpp"
#include "icenav/error.hpp"

namespace icenav {

Objective parse_objective(const std::string& name) {
  if (name == "time" || name == "travel_time") return Objective::travel_time;
  if (name == "fuel") return Objective::fuel;
  if (name == "distance") return Objective::distance;
  throw ParseError("unknown objective '" + name + "' (expected time, fuel or distance)");
}

std::string to_string(Objective o) {
  switch (o) {
    case Objective::travel_time:
      return "time";
    case Objective::fuel:
      return "fuel";
    case Objective::distance:
      return "distance";
  }
  return "time";
}

double LegCost::cost(Objective o) const {
  switch (o) {
    case Objective::travel_time:
      return time_s;
    case Objective::fuel:
      return fuel_t;
    case Objective::distance:
      return distance_m;
  }
  return time_s;
}

double Route::total(Objective o) const {
  switch (o) {
    case Objective::travel_time:
      return total_time_s;
    case Objective::fuel:
      return total_fuel_t;
    case Objective::distance:
      return total_distance_m;
  }
  return total_time_s;
}

LegCost leg_cost(const geo::GeoPoint& from, const geo::GeoPoint& to, double ref_lat, int cell, const MeshView& mesh) {
  const CellBox& c = mesh.cell(cell);
  const CellPerformance& perf = mesh.performance(cell);
  const geo::Vec2 d = geo::equirect_offset(from, to, ref_lat, mesh.earth_radius);
  const TravelTime t = travel_time(d, c.current(), perf.speed_mps());
  LegCost out;
  out.distance_m = d.norm();
  out.feasible = t.ok();
  out.time_s = t.seconds;
  out.fuel_t = t.seconds * perf.fuel_rate / geo::kSecondsPerDay;
  return out;
}

LegCost leg_cost(const geo::GeoPoint& from, const geo::GeoPoint& to, int cell, const MeshView& mesh) {
  return leg_cost(from, to, 0.5 * (from.lat + to.lat), cell, mesh);
}

Route evaluate_route(const std::vector<geo::GeoPoint>& points, const std::vector<int>& cells, const MeshView& mesh) {
  if (points.size() != cells.size() + 1) throw DomainError("route needs one cell per leg");
  Route r;
  r.points = points;
  r.legs.reserve(cells.size());
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const LegCost c = leg_cost(points[k], points[k + 1], cells[k], mesh);
    if (!c.feasible) throw InfeasibleError("route leg " + std::to_string(k) + " runs against an overpowering current");
    r.legs.push_back({cells[k], c.time_s, c.distance_m, c.fuel_t});
    r.total_time_s += c.time_s;
    r.total_distance_m += c.distance_m;
    r.total_fuel_t += c.fuel_t;
  }
  return r;
}

}  // namespace icenav
