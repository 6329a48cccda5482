#pragma once

// Non-uniform quadtree mesh built from an EnvGrid.

#include <vector>

#include "icenav/geo.hpp"
#include "icenav/grid.hpp"

namespace icenav {

struct SplitConfig {
  int max_depth = 3;
  int min_data_points = 4;
  double sic_variance_threshold = 100.0;  // percent^2
  // A cell straddles these bounds when it holds SIC below the lower and above
  // the upper value. The pair is meant to bracket the vessel's SIC limit.
  double sic_split_lower = 70.0;
  double sic_split_upper = 90.0;
  double land_depth_threshold = -10.0;  // metres; shallower nodes count as land

  void validate() const;
};

struct CellBox {
  int id = -1;
  geo::GeoPoint centre;      // (cx, cy)
  double half_width = 0.0;   // w: degrees of longitude
  double half_height = 0.0;  // degrees of latitude
  int depth_level = 0;
  double agg_sic = 0.0;      // percent
  double current_u = 0.0;    // m/s eastward
  double current_v = 0.0;    // m/s northward
  double land_fraction = 0.0;
  int data_count = 0;        // grid nodes with valid SIC inside the cell

  Bounds bounds() const {
    return {centre.lon - half_width, centre.lon + half_width, centre.lat - half_height,
            centre.lat + half_height};
  }
  /// Latitude-corrected physical half-width w * cos(cy), in metres.
  double half_width_m(double radius = geo::kEarthRadius) const {
    return half_width * geo::metres_per_degree(radius) * geo::lat_scale(centre.lat);
  }
  double half_height_m(double radius = geo::kEarthRadius) const {
    return half_height * geo::metres_per_degree(radius);
  }
  geo::Vec2 current() const { return {current_u, current_v}; }
};

struct Aggregate {
  double sic = 0.0;
  double current_u = 0.0;
  double current_v = 0.0;
  double land_fraction = 0.0;
  int data_count = 0;
  // Extra statistics consulted by the split condition.
  double sic_min = 0.0;
  double sic_max = 0.0;
  double sic_variance = 0.0;

  /// No valid SIC node inside: the cell must not be split further and is blocked.
  bool empty() const { return data_count == 0; }
};

/// Aggregates grid nodes inside `cell`. Node membership is half-open
/// [min, max) on both axes, closed on the edges shared with `region`, so the
/// leaves of a mesh partition the region's nodes exactly.
Aggregate aggregate(const Bounds& cell, const Bounds& region, const EnvGrid& grid,
                    double land_depth_threshold);

bool should_split(const Aggregate& agg, const SplitConfig& cfg);

/// Tiles `region` with square cells of `initial_cell_size` degrees and splits
/// each recursively. Leaf ids are dense, assigned in row-major root order
/// (south to north, west to east) and SW, SE, NW, NE child order.
std::vector<CellBox> build_mesh(const EnvGrid& grid, const SplitConfig& cfg, const Bounds& region,
                                double initial_cell_size);

/// Default accessibility rule: no data, too much ice, or any land.
bool is_blocked(const CellBox& cell, double max_ice_conc);

}  // namespace icenav
