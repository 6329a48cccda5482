#pragma once

// Independent reference computations used to check the library.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "icenav/crossing.hpp"
#include "icenav/planner.hpp"

namespace icenav::testing {

struct GridMin {
  double arg = 0.0;
  double value = std::numeric_limits<double>::infinity();
  double spacing = 0.0;
};

/// Dense scan of f at n evenly spaced points over [lo, hi].
inline GridMin grid_search(const std::function<double(double)>& f, double lo, double hi, int n) {
  GridMin best;
  best.spacing = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double y = lo + best.spacing * i;
    const double v = f(y);
    if (v < best.value) {
      best.value = v;
      best.arg = y;
    }
  }
  return best;
}

/// Travel time straight from the quadratic s^2 t^2 = |d - t u|^2, positive root.
inline double quadratic_travel_time(double dx, double dy, double ux, double uy, double s) {
  const double a = s * s - ux * ux - uy * uy;
  const double b = 2.0 * (ux * dx + uy * dy);
  const double c = -(dx * dx + dy * dy);
  if (a == 0.0) return -c / b;
  const double disc = b * b - 4.0 * a * c;
  return (-b + std::sqrt(disc)) / (2.0 * a);
}

/// Crossing objective written out per orientation, independent of the solver code.
inline double reference_objective(const CrossingProblem& p, double y) {
  const double x = p.left.half_span;
  const double a = p.right.half_span;
  double f1 = x;
  double f2 = a;
  double l1 = y;
  double l2 = p.Y - y;
  const double rad = M_PI / 180.0;
  if (p.orientation == Orientation::smoothed_horizontal) {
    f1 = x * std::cos(p.entry_lat * rad + y / p.earth_radius);
    f2 = a * std::cos(p.exit_lat * rad - (p.Y - y) / p.earth_radius);
  } else if (p.orientation == Orientation::smoothed_vertical) {
    const double ct = std::cos(p.boundary_lat * rad);
    l1 = std::cos(p.entry_lat * rad) / ct * y;
    l2 = std::cos(p.exit_lat * rad) / ct * (p.Y - y);
  }
  return quadratic_travel_time(f1, l1, p.left.current.x, p.left.current.y, p.left.speed) +
         quadratic_travel_time(f2, l2, p.right.current.x, p.right.current.y, p.right.speed);
}

/// Minimum cost over every simple cell sequence from the start cell to the end
/// cell, summed in the same order as the planner: head, edges, tail.
inline double enumerate_min_cost(const EdgeTable& edges, const MeshView& mesh, const geo::GeoPoint& start,
                                 const geo::GeoPoint& end, Objective o) {
  const int c0 = place_waypoint(mesh, start);
  const int cn = place_waypoint(mesh, end);
  if (c0 == cn) return attach_leg(start, end, c0, mesh).cost(o);
  const double head = attach_leg(start, mesh.cell(c0).centre, c0, mesh).cost(o);
  const double tail = attach_leg(mesh.cell(cn).centre, end, cn, mesh).cost(o);
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> on_path(mesh.graph.size(), false);
  std::function<void(int, double)> dfs = [&](int c, double cost) {
    if (c == cn) {
      best = std::min(best, cost + tail);
      return;
    }
    on_path[static_cast<std::size_t>(c)] = true;
    for (const auto& e : edges.from(c)) {
      if (!on_path[static_cast<std::size_t>(e.dst)]) dfs(e.dst, cost + e.cost(o));
    }
    on_path[static_cast<std::size_t>(c)] = false;
  };
  dfs(c0, head);
  return best;
}

}  // namespace icenav::testing
