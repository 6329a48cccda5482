#pragma once

// Off-mesh smoothing of Dijkstra paths.
//
// A smoothing state is a polyline start, c1, ..., c(n-1), end where every
// interior point lies on the boundary between the cells of the legs on either
// side. Each sweep re-solves every crossing between its neighbours with the
// latitude-corrected solvers, inserting extra cells where the optimum leaves
// the shared boundary (horseshoes) or a diagonal corner can be cut.

#include <optional>
#include <vector>

#include "icenav/crossing.hpp"
#include "icenav/planner.hpp"
#include "icenav/route.hpp"

namespace icenav {

struct SmoothingConfig {
  double epsilon = 1000.0;            // metres; entry/exit proximity snap
  int max_iterations = 1000;          // sweeps
  double convergence_tol_days = 1e-3;
  double ice_step_limit = 10.0;       // SIC percentage points over the original pair
  bool allow_horseshoe = true;
  bool allow_diagonal = true;
  bool refine = true;                 // final per-crossing minimisation of the route metric
  SolverOptions solver;

  void validate() const;
};

struct SmoothingState {
  std::vector<geo::GeoPoint> points;
  std::vector<int> cells;  // cells[k] holds the leg points[k] -> points[k + 1]
  int iteration = 0;
  double last_total_time = 0.0;
};

/// Boundary shared by two touching cells; a single point for diagonal pairs.
struct BoundarySegment {
  bool meridian = true;  // constant longitude; otherwise constant latitude
  double fixed = 0.0;
  double lo = 0.0;
  double hi = 0.0;

  geo::GeoPoint at(double along) const { return meridian ? geo::GeoPoint{fixed, along} : geo::GeoPoint{along, fixed}; }
  double along(const geo::GeoPoint& p) const { return meridian ? p.lat : p.lon; }
  double across(const geo::GeoPoint& p) const { return meridian ? p.lon : p.lat; }
};

BoundarySegment shared_segment(const MeshView& mesh, int a, int b);

enum class StepOutcome { inside, special_case, overshoot, infeasible };

struct StepResult {
  StepOutcome outcome = StepOutcome::inside;
  geo::GeoPoint crossing;       // proposed point, always on the shared segment
  geo::GeoPoint unconstrained;  // solver optimum on the boundary line
  bool low = false;             // overshoot below the segment's lower end
  // Overshoot only: replacement cell sequence from src to dst inclusive;
  // empty when the mesh offers no such cells.
  std::vector<int> horseshoe;
};

/// Places the crossing when a special configuration makes the solver moot:
/// entry and exit within epsilon, or entry/exit lying on the boundary line.
std::optional<geo::GeoPoint> apply_special_cases(const MeshView& mesh, const geo::GeoPoint& entry,
                                                 const geo::GeoPoint& exit, int src, int dst,
                                                 const SmoothingConfig& cfg);

StepResult smooth_step_horizontal(const MeshView& mesh, const geo::GeoPoint& entry, const geo::GeoPoint& exit,
                                  int src, int dst, const SmoothingConfig& cfg);
StepResult smooth_step_vertical(const MeshView& mesh, const geo::GeoPoint& entry, const geo::GeoPoint& exit,
                                int src, int dst, const SmoothingConfig& cfg);

struct DiagonalInsertion {
  int cell = -1;
  geo::GeoPoint first;   // src -> cell crossing
  geo::GeoPoint second;  // cell -> dst crossing
  double time_s = 0.0;   // entry to exit through the inserted cell
};

/// Best off-diagonal cell to route through instead of the shared corner, if
/// any accessible candidate beats the corner.
std::optional<DiagonalInsertion> smooth_step_diagonal(const MeshView& mesh, const geo::GeoPoint& entry,
                                                      const geo::GeoPoint& exit, int src, int dst,
                                                      const SmoothingConfig& cfg);

/// True when every candidate is accessible and no more than ice_step_limit
/// above the ice concentration of the original pair.
bool ice_step_allows(const MeshView& mesh, int src, int dst, const std::vector<int>& candidates,
                     const SmoothingConfig& cfg);

/// Collapses every revisit of a cell so the route never re-enters a cell.
/// Returns true when anything was removed.
bool remove_reversing_edges(SmoothingState& state);

struct TraceRow {
  int iteration = 0;
  double total_time_s = 0.0;
  std::size_t node_count = 0;
};

struct SmoothedRoute {
  Route route;
  std::vector<int> cells;
  int iterations = 0;
  bool converged = false;
  std::vector<TraceRow> trace;
};

SmoothingState initial_state(const DijkstraPath& path);

SmoothedRoute smooth(const DijkstraPath& path, const MeshView& mesh, const SmoothingConfig& cfg = {});

}  // namespace icenav
