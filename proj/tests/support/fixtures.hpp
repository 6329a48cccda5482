#pragma once

// Synthetic grids and meshes shared by the unit and acceptance tests.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "icenav/grid.hpp"
#include "icenav/mesh.hpp"
#include "icenav/neighbour_graph.hpp"
#include "icenav/route.hpp"
#include "icenav/vessel.hpp"

namespace icenav::testing {

/// Regular grid with nodes every `step` degrees over [lon0, lon1] x [lat0, lat1].
inline EnvGrid make_grid(double lon0, double lon1, double lat0, double lat1, double step,
                         const std::function<double(double, double)>& sic,
                         const std::function<double(double, double)>& depth = nullptr) {
  EnvGrid g;
  for (double x = lon0; x <= lon1 + 1e-9; x += step) g.lons.push_back(x);
  for (double y = lat0; y <= lat1 + 1e-9; y += step) g.lats.push_back(y);
  for (double lat : g.lats) {
    for (double lon : g.lons) {
      g.sic.push_back(sic(lon, lat));
      g.depth.push_back(depth ? depth(lon, lat) : EnvGrid::kMissing);
      g.current_u.push_back(0.0);
      g.current_v.push_back(0.0);
    }
  }
  return g;
}

/// Equal cells of `size` degrees tiling cols x rows from (lon0, lat0), row-major from the south-west.
inline std::vector<CellBox> uniform_cells(double lon0, double lat0, int cols, int rows, double size,
                                          double sic = 0.0) {
  std::vector<CellBox> cells;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      CellBox cell;
      cell.id = static_cast<int>(cells.size());
      cell.centre = {lon0 + (c + 0.5) * size, lat0 + (r + 0.5) * size};
      cell.half_width = 0.5 * size;
      cell.half_height = 0.5 * size;
      cell.agg_sic = sic;
      cell.data_count = 16;
      cells.push_back(cell);
    }
  }
  return cells;
}

/// Axis-aligned cell over [lon0, lon1] x [lat0, lat1].
inline CellBox box_cell(int id, double lon0, double lon1, double lat0, double lat1, double sic = 0.0) {
  CellBox c;
  c.id = id;
  c.centre = {0.5 * (lon0 + lon1), 0.5 * (lat0 + lat1)};
  c.half_width = 0.5 * (lon1 - lon0);
  c.half_height = 0.5 * (lat1 - lat0);
  c.agg_sic = sic;
  c.data_count = 16;
  return c;
}

/// Quadtree leaves over cols x rows root cells, each split with probability
/// `split_prob` down to `max_depth`. Ids follow depth-first order.
inline std::vector<CellBox> random_quadtree(std::mt19937_64& rng, double lon0, double lat0, int cols, int rows,
                                            double size, double split_prob, int max_depth) {
  std::vector<CellBox> cells;
  std::function<void(double, double, double, int)> visit = [&](double x, double y, double s, int depth) {
    if (depth < max_depth && std::uniform_real_distribution<double>(0, 1)(rng) < split_prob) {
      const double h = s / 2;
      visit(x, y, h, depth + 1);
      visit(x + h, y, h, depth + 1);
      visit(x, y + h, h, depth + 1);
      visit(x + h, y + h, h, depth + 1);
      return;
    }
    CellBox c = box_cell(static_cast<int>(cells.size()), x, x + s, y, y + s);
    c.depth_level = depth;
    cells.push_back(c);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) visit(lon0 + c * size, lat0 + r * size, size, 0);
  }
  return cells;
}

/// Owns a graph and its performance table so MeshView references stay valid.
struct MeshFixture {
  VesselConfig vessel;
  NeighbourGraph graph;
  std::vector<CellPerformance> perf;
  double earth_radius = geo::kEarthRadius;

  explicit MeshFixture(std::vector<CellBox> cells, VesselConfig v = {})
      : vessel(v),
        graph(std::move(cells), [v](const CellBox& c) { return is_blocked(c, v.max_ice_conc); }),
        perf(augment_mesh(graph.cells(), vessel)) {}

  MeshView view() const { return MeshView{graph, perf, earth_radius}; }
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace icenav::testing
