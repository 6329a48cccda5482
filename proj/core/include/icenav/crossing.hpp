#pragma once

// Two-cell crossing problems under constant per-cell currents.
//
// Both cells are expressed in a frame where the route runs left to right.
// The entry point sits a forward distance x from the shared boundary in the
// left cell, the exit point a forward distance a beyond it in the right cell,
// and the exit is offset by Y along the boundary. The unknown y is the
// crossing offset along the boundary, measured from the entry point. Current
// components are (forward, lateral) in that frame.

#include <optional>

#include "icenav/geo.hpp"

namespace icenav {

enum class TravelStatus { ok, infeasible, undefined };

struct TravelTime {
  double seconds = 0.0;
  TravelStatus status = TravelStatus::ok;

  bool ok() const { return status == TravelStatus::ok; }
};

/// Time to cover displacement d at water speed s in current u (all SI).
TravelTime travel_time(const geo::Vec2& d, const geo::Vec2& u, double s);

struct CellTraversal {
  double speed = 0.0;     // m/s
  geo::Vec2 current;      // (forward, lateral) m/s
  double half_span = 0.0; // metres; equatorial metres for smoothed_horizontal
};

enum class Orientation { flat_horizontal, smoothed_horizontal, smoothed_vertical };

struct CrossingProblem {
  CellTraversal left;
  CellTraversal right;
  double Y = 0.0;  // metres
  Orientation orientation = Orientation::flat_horizontal;
  double entry_lat = 0.0;     // lambda, degrees
  double exit_lat = 0.0;      // tau (horizontal) or psi (vertical), degrees
  double boundary_lat = 0.0;  // theta, vertical only, degrees
  double earth_radius = geo::kEarthRadius;
};

struct CrossingSolution {
  double yval = 0.0;
  double t1 = 0.0;  // seconds in the left cell
  double t2 = 0.0;  // seconds in the right cell
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // |dT/dy| scaled by the faster cell speed
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iter = 100;
  double bracket_factor = 4.0;  // search y within this multiple of the total span
};

/// Objective pieces at a given crossing offset.
struct CrossingEval {
  double t1 = 0.0;
  double t2 = 0.0;
  double f = 0.0;   // F(y) = X2 g1 + X1 g2, sign of dT/dy
  double df = 0.0;  // dF/dy
  double slope = 0.0;  // dT/dy in s/m
  bool feasible = false;

  double total() const { return t1 + t2; }
};

CrossingEval evaluate_crossing(const CrossingProblem& p, double y);

/// Total time t1 + t2 at y; +inf when a leg cannot be travelled.
double crossing_objective(const CrossingProblem& p, double y);

/// Interval searched by the solvers.
std::pair<double, double> crossing_bracket(const CrossingProblem& p, const SolverOptions& opts = {});

/// Straight-line initial guess Y x / (x + a).
double straight_line_guess(const CrossingProblem& p);

CrossingSolution solve_flat(const CrossingProblem& p, std::optional<double> init_y = std::nullopt,
                            const SolverOptions& opts = {});
CrossingSolution solve_smoothed_horizontal(const CrossingProblem& p, std::optional<double> init_y = std::nullopt,
                                           const SolverOptions& opts = {});
CrossingSolution solve_smoothed_vertical(const CrossingProblem& p, std::optional<double> init_y = std::nullopt,
                                         const SolverOptions& opts = {});
/// Dispatches on p.orientation.
CrossingSolution solve_crossing(const CrossingProblem& p, std::optional<double> init_y = std::nullopt,
                                const SolverOptions& opts = {});

}  // namespace icenav
