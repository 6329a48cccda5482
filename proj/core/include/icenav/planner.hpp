#pragma once

// Mesh-optimal routes: Dijkstra over adjacent cell pairs whose crossing points
// minimise travel time.

#include <optional>
#include <vector>

#include "icenav/crossing.hpp"
#include "icenav/route.hpp"

namespace icenav {

struct AdjacentCellPair {
  int src = -1;
  int dst = -1;
  int code = 0;
  geo::GeoPoint crossing;
  CrossingSolution solution;  // t1 in src, t2 in dst
  double d1 = 0.0;            // metres travelled in src
  double d2 = 0.0;            // metres travelled in dst
  double leg_time = 0.0;      // seconds
  double leg_distance = 0.0;  // metres
  double leg_fuel = 0.0;      // tons

  double cost(Objective o) const;
};

/// Orthogonal pair rotated into the left-to-right frame of the flat solver.
struct PairFrame {
  CrossingProblem problem;
  double seg_lo = 0.0;  // shared boundary extent in solver y coordinates
  double seg_hi = 0.0;
  bool horizontal = true;
  double boundary = 0.0;   // lon of a meridian boundary, lat of a parallel one
  double origin = 0.0;     // src centre coordinate along the boundary
  double y_per_degree = 0.0;

  geo::GeoPoint point_at(double y) const;
};

PairFrame normalise_pair(const MeshView& mesh, int src, int dst, int code);

/// Crossing for one directed pair; nullopt when the current makes it infeasible.
std::optional<AdjacentCellPair> solve_pair(const MeshView& mesh, int src, int dst, int code,
                                           const SolverOptions& opts = {});

class EdgeTable {
 public:
  explicit EdgeTable(std::size_t cells) : out_(cells) {}

  void add(const AdjacentCellPair& e) { out_.at(static_cast<std::size_t>(e.src)).push_back(e); }
  const std::vector<AdjacentCellPair>& from(int src) const { return out_.at(static_cast<std::size_t>(src)); }
  const AdjacentCellPair* find(int src, int dst) const;
  std::size_t cell_count() const { return out_.size(); }
  std::size_t size() const;

 private:
  std::vector<std::vector<AdjacentCellPair>> out_;
};

/// Materialises both directions of every pruned graph edge.
EdgeTable build_edges(const MeshView& mesh, const SolverOptions& opts = {});

struct DijkstraPath {
  geo::GeoPoint start;
  geo::GeoPoint end;
  Objective objective = Objective::travel_time;
  std::vector<int> cells;
  // start, centre, crossing, centre, ..., centre, end; or start, end within one cell.
  std::vector<geo::GeoPoint> nodes;
  std::vector<int> leg_cells;  // cell of each leg between consecutive nodes
  std::vector<LegCost> legs;
  double cost = 0.0;  // in objective units
  double total_time_s = 0.0;
  double total_distance_m = 0.0;
  double total_fuel_t = 0.0;
};

/// Cost of joining a waypoint to its cell centre (either direction).
LegCost attach_leg(const geo::GeoPoint& from, const geo::GeoPoint& to, int cell, const MeshView& mesh);

/// Accessible cell containing a waypoint; throws PlacementError otherwise.
int place_waypoint(const MeshView& mesh, const geo::GeoPoint& p);

/// The Dijkstra polyline costed with the route metric, for comparison with smoothed routes.
Route path_route(const DijkstraPath& path, const MeshView& mesh);

DijkstraPath plan(const EdgeTable& edges, const MeshView& mesh, const geo::GeoPoint& start, const geo::GeoPoint& end,
                  Objective objective = Objective::travel_time);

}  // namespace icenav
