#include "icenav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

#include "icenav/error.hpp"

namespace icenav {
namespace {

std::string describe(const geo::GeoPoint& p) {
  std::ostringstream os;
  os << "(lon " << p.lon << ", lat " << p.lat << ")";
  return os.str();
}

// Cells reachable from `from`, and blocked cells bordering that set.
std::string frontier_message(const EdgeTable& edges, const MeshView& mesh, int from) {
  std::vector<bool> seen(mesh.graph.size(), false);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = true;
  std::set<int> frontier;
  std::size_t reached = 0;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    ++reached;
    for (const auto& e : edges.from(c)) {
      if (!seen[static_cast<std::size_t>(e.dst)]) {
        seen[static_cast<std::size_t>(e.dst)] = true;
        stack.push_back(e.dst);
      }
    }
    for (const auto& t : mesh.graph.touching(c)) {
      if (!mesh.accessible(t.dst)) frontier.insert(t.dst);
    }
  }
  std::ostringstream os;
  os << reached << " reachable cells are enclosed";
  if (frontier.empty()) {
    os << " by the mesh edge or impassable currents";
    return os.str();
  }
  Bounds box = mesh.cell(*frontier.begin()).bounds();
  for (int id : frontier) {
    const Bounds b = mesh.cell(id).bounds();
    box.lon_min = std::min(box.lon_min, b.lon_min);
    box.lon_max = std::max(box.lon_max, b.lon_max);
    box.lat_min = std::min(box.lat_min, b.lat_min);
    box.lat_max = std::max(box.lat_max, b.lat_max);
  }
  os << " by " << frontier.size() << " blocked cells spanning lon [" << box.lon_min << ", " << box.lon_max
     << "], lat [" << box.lat_min << ", " << box.lat_max << "]: ids";
  int shown = 0;
  for (int id : frontier) {
    if (shown++ == 12) {
      os << " ...";
      break;
    }
    os << ' ' << id;
  }
  return os.str();
}

}  // namespace

double AdjacentCellPair::cost(Objective o) const {
  switch (o) {
    case Objective::travel_time:
      return leg_time;
    case Objective::fuel:
      return leg_fuel;
    case Objective::distance:
      return leg_distance;
  }
  return leg_time;
}

geo::GeoPoint PairFrame::point_at(double y) const {
  const double along = origin + y / y_per_degree;
  return horizontal ? geo::GeoPoint{boundary, along} : geo::GeoPoint{along, boundary};
}

PairFrame normalise_pair(const MeshView& mesh, int src, int dst, int code) {
  const CellBox& a = mesh.cell(src);
  const CellBox& b = mesh.cell(dst);
  const Bounds ba = a.bounds();
  const Bounds bb = b.bounds();
  const double m = geo::metres_per_degree(mesh.earth_radius);
  PairFrame f;
  CrossingProblem& p = f.problem;
  p.orientation = Orientation::flat_horizontal;
  p.earth_radius = mesh.earth_radius;
  p.left.speed = mesh.performance(src).speed_mps();
  p.right.speed = mesh.performance(dst).speed_mps();
  if (is_horizontal(code)) {
    const double sgn = code > 0 ? 1.0 : -1.0;
    f.horizontal = true;
    f.boundary = code > 0 ? ba.lon_max : ba.lon_min;
    f.origin = a.centre.lat;
    f.y_per_degree = m;
    p.left.half_span = a.half_width_m(mesh.earth_radius);
    p.right.half_span = b.half_width_m(mesh.earth_radius);
    p.left.current = {sgn * a.current_u, a.current_v};
    p.right.current = {sgn * b.current_u, b.current_v};
    p.Y = (b.centre.lat - a.centre.lat) * m;
    f.seg_lo = (std::max(ba.lat_min, bb.lat_min) - a.centre.lat) * m;
    f.seg_hi = (std::min(ba.lat_max, bb.lat_max) - a.centre.lat) * m;
  } else if (is_vertical(code)) {
    const double sgn = code < 0 ? 1.0 : -1.0;  // +1 heading north
    f.horizontal = false;
    f.boundary = code < 0 ? ba.lat_max : ba.lat_min;
    f.origin = a.centre.lon;
    f.y_per_degree = m * geo::lat_scale(f.boundary);
    p.left.half_span = a.half_height_m(mesh.earth_radius);
    p.right.half_span = b.half_height_m(mesh.earth_radius);
    p.left.current = {sgn * a.current_v, a.current_u};
    p.right.current = {sgn * b.current_v, b.current_u};
    p.Y = geo::lon_delta(a.centre.lon, b.centre.lon) * f.y_per_degree;
    f.seg_lo = geo::lon_delta(a.centre.lon, std::max(ba.lon_min, bb.lon_min)) * f.y_per_degree;
    f.seg_hi = geo::lon_delta(a.centre.lon, std::min(ba.lon_max, bb.lon_max)) * f.y_per_degree;
  } else {
    throw DomainError("normalise_pair needs an orthogonal case code");
  }
  return f;
}

std::optional<AdjacentCellPair> solve_pair(const MeshView& mesh, int src, int dst, int code,
                                           const SolverOptions& opts) {
  AdjacentCellPair e;
  e.src = src;
  e.dst = dst;
  e.code = code;
  const double r_src = mesh.performance(src).fuel_rate / geo::kSecondsPerDay;
  const double r_dst = mesh.performance(dst).fuel_rate / geo::kSecondsPerDay;
  if (is_diagonal(code)) {
    const Bounds ba = mesh.cell(src).bounds();
    const bool east = code == 1 || code == 3;
    const bool north = code == 1 || code == -3;
    e.crossing = {east ? ba.lon_max : ba.lon_min, north ? ba.lat_max : ba.lat_min};
    const LegCost l1 = leg_cost(mesh.cell(src).centre, e.crossing, mesh.cell(src).centre.lat, src, mesh);
    const LegCost l2 = leg_cost(e.crossing, mesh.cell(dst).centre, mesh.cell(dst).centre.lat, dst, mesh);
    if (!l1.feasible || !l2.feasible) return std::nullopt;
    e.solution.t1 = l1.time_s;
    e.solution.t2 = l2.time_s;
    e.solution.converged = true;
    e.d1 = l1.distance_m;
    e.d2 = l2.distance_m;
  } else {
    const PairFrame f = normalise_pair(mesh, src, dst, code);
    try {
      e.solution = solve_flat(f.problem, std::nullopt, opts);
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
    // The crossing must stay on the shared boundary segment.
    const double y = std::clamp(e.solution.yval, f.seg_lo, f.seg_hi);
    if (y != e.solution.yval) {
      const CrossingEval ev = evaluate_crossing(f.problem, y);
      e.solution.yval = y;
      e.solution.t1 = ev.t1;
      e.solution.t2 = ev.t2;
    }
    if (!std::isfinite(e.solution.t1) || !std::isfinite(e.solution.t2)) return std::nullopt;
    e.crossing = f.point_at(y);
    e.d1 = std::hypot(f.problem.left.half_span, y);
    e.d2 = std::hypot(f.problem.right.half_span, f.problem.Y - y);
  }
  e.leg_time = e.solution.t1 + e.solution.t2;
  e.leg_distance = e.d1 + e.d2;
  e.leg_fuel = e.solution.t1 * r_src + e.solution.t2 * r_dst;
  return e;
}

const AdjacentCellPair* EdgeTable::find(int src, int dst) const {
  for (const auto& e : from(src)) {
    if (e.dst == dst) return &e;
  }
  return nullptr;
}

std::size_t EdgeTable::size() const {
  std::size_t n = 0;
  for (const auto& list : out_) n += list.size();
  return n;
}

EdgeTable build_edges(const MeshView& mesh, const SolverOptions& opts) {
  EdgeTable table(mesh.graph.size());
  for (std::size_t i = 0; i < mesh.graph.size(); ++i) {
    const int src = static_cast<int>(i);
    if (!mesh.accessible(src)) continue;
    for (const Edge& g : mesh.graph.neighbours(src)) {
      if (!mesh.accessible(g.dst)) continue;
      if (auto e = solve_pair(mesh, src, g.dst, g.code, opts)) table.add(*e);
    }
  }
  return table;
}

LegCost attach_leg(const geo::GeoPoint& from, const geo::GeoPoint& to, int cell, const MeshView& mesh) {
  return leg_cost(from, to, mesh.cell(cell).centre.lat, cell, mesh);
}

int place_waypoint(const MeshView& mesh, const geo::GeoPoint& p) {
  const auto cell = mesh.graph.locate(p);
  if (!cell) throw PlacementError("waypoint " + describe(p) + " lies outside the mesh");
  if (!mesh.accessible(*cell)) {
    throw PlacementError("waypoint " + describe(p) + " lies in blocked cell " + std::to_string(*cell));
  }
  return *cell;
}

Route path_route(const DijkstraPath& path, const MeshView& mesh) {
  return evaluate_route(path.nodes, path.leg_cells, mesh);
}

DijkstraPath plan(const EdgeTable& edges, const MeshView& mesh, const geo::GeoPoint& start, const geo::GeoPoint& end,
                  Objective objective) {
  const int c0 = place_waypoint(mesh, start);
  const int cn = place_waypoint(mesh, end);
  DijkstraPath path;
  path.start = start;
  path.end = end;
  path.objective = objective;

  const auto push_leg = [&](const LegCost& leg, int cell) {
    path.legs.push_back(leg);
    path.leg_cells.push_back(cell);
    path.total_time_s += leg.time_s;
    path.total_distance_m += leg.distance_m;
    path.total_fuel_t += leg.fuel_t;
  };

  if (c0 == cn) {
    const LegCost direct = attach_leg(start, end, c0, mesh);
    if (!direct.feasible) throw NoRouteError("current in cell " + std::to_string(c0) + " prevents the direct leg");
    path.cells = {c0};
    path.nodes = {start, end};
    push_leg(direct, c0);
    path.cost = direct.cost(objective);
    return path;
  }

  const LegCost head = attach_leg(start, mesh.cell(c0).centre, c0, mesh);
  const LegCost tail = attach_leg(mesh.cell(cn).centre, end, cn, mesh);
  if (!head.feasible || !tail.feasible) {
    throw NoRouteError("current prevents joining a waypoint to its cell centre");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::size_t n = mesh.graph.size();
  std::vector<double> dist(n, kInf);
  std::vector<int> prev(n, -1);
  std::vector<bool> done(n, false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[static_cast<std::size_t>(c0)] = head.cost(objective);
  queue.emplace(dist[static_cast<std::size_t>(c0)], c0);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (done[static_cast<std::size_t>(u)]) continue;
    done[static_cast<std::size_t>(u)] = true;
    if (u == cn) break;
    for (const auto& e : edges.from(u)) {
      const double nd = d + e.cost(objective);
      if (nd < dist[static_cast<std::size_t>(e.dst)]) {
        dist[static_cast<std::size_t>(e.dst)] = nd;
        prev[static_cast<std::size_t>(e.dst)] = u;
        queue.emplace(nd, e.dst);
      }
    }
  }
  if (!done[static_cast<std::size_t>(cn)]) {
    throw NoRouteError("no route from " + describe(start) + " to " + describe(end) + ": " +
                       frontier_message(edges, mesh, c0));
  }

  for (int c = cn; c != -1; c = prev[static_cast<std::size_t>(c)]) path.cells.push_back(c);
  std::reverse(path.cells.begin(), path.cells.end());

  path.nodes.push_back(start);
  path.nodes.push_back(mesh.cell(c0).centre);
  push_leg(head, c0);
  for (std::size_t k = 0; k + 1 < path.cells.size(); ++k) {
    const AdjacentCellPair* e = edges.find(path.cells[k], path.cells[k + 1]);
    const double r1 = mesh.performance(e->src).fuel_rate / geo::kSecondsPerDay;
    const double r2 = mesh.performance(e->dst).fuel_rate / geo::kSecondsPerDay;
    path.nodes.push_back(e->crossing);
    path.nodes.push_back(mesh.cell(e->dst).centre);
    push_leg({e->solution.t1, e->d1, e->solution.t1 * r1, true}, e->src);
    push_leg({e->solution.t2, e->d2, e->solution.t2 * r2, true}, e->dst);
  }
  path.nodes.push_back(end);
  push_leg(tail, cn);
  path.cost = dist[static_cast<std::size_t>(cn)] + tail.cost(objective);
  return path;
}

}  // namespace icenav
