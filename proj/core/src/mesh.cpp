#include "icenav/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "icenav/error.hpp"

namespace icenav {
namespace {

// Index range of axis values inside [lo, hi), or [lo, hi] when closed_hi.
std::pair<std::size_t, std::size_t> node_range(const std::vector<double>& axis, double lo, double hi,
                                               bool closed_hi) {
  const auto first = std::lower_bound(axis.begin(), axis.end(), lo);
  const auto last = closed_hi ? std::upper_bound(axis.begin(), axis.end(), hi)
                              : std::lower_bound(axis.begin(), axis.end(), hi);
  return {static_cast<std::size_t>(first - axis.begin()),
          static_cast<std::size_t>(std::max(first, last) - axis.begin())};
}

std::array<Bounds, 4> quarters(const Bounds& b) {
  const double mx = 0.5 * (b.lon_min + b.lon_max);
  const double my = 0.5 * (b.lat_min + b.lat_max);
  return {{{b.lon_min, mx, b.lat_min, my},
           {mx, b.lon_max, b.lat_min, my},
           {b.lon_min, mx, my, b.lat_max},
           {mx, b.lon_max, my, b.lat_max}}};
}

class MeshBuilder {
 public:
  MeshBuilder(const EnvGrid& grid, const SplitConfig& cfg, const Bounds& region)
      : grid_(grid), cfg_(cfg), region_(region) {}

  void split(const Bounds& cell, int depth) {
    const Aggregate agg = aggregate(cell, region_, grid_, cfg_.land_depth_threshold);
    if (depth < cfg_.max_depth && should_split(agg, cfg_)) {
      const auto children = quarters(cell);
      const bool enough_data = std::all_of(children.begin(), children.end(), [&](const Bounds& c) {
        return aggregate(c, region_, grid_, cfg_.land_depth_threshold).data_count >= cfg_.min_data_points;
      });
      if (enough_data) {
        for (const auto& child : children) split(child, depth + 1);
        return;
      }
    }
    emit(cell, depth, agg);
  }

  std::vector<CellBox> take() { return std::move(cells_); }

 private:
  void emit(const Bounds& b, int depth, const Aggregate& agg) {
    CellBox c;
    c.id = static_cast<int>(cells_.size());
    c.centre = {0.5 * (b.lon_min + b.lon_max), 0.5 * (b.lat_min + b.lat_max)};
    c.half_width = 0.5 * b.width();
    c.half_height = 0.5 * b.height();
    c.depth_level = depth;
    c.agg_sic = agg.sic;
    c.current_u = agg.current_u;
    c.current_v = agg.current_v;
    c.land_fraction = agg.land_fraction;
    c.data_count = agg.data_count;
    cells_.push_back(c);
  }

  const EnvGrid& grid_;
  const SplitConfig& cfg_;
  Bounds region_;
  std::vector<CellBox> cells_;
};

}  // namespace

void SplitConfig::validate() const {
  if (max_depth < 0) throw DomainError("split config: max_depth must be >= 0");
  if (min_data_points < 1) throw DomainError("split config: min_data_points must be >= 1");
  if (sic_variance_threshold < 0.0) throw DomainError("split config: sic_variance_threshold must be >= 0");
  if (sic_split_lower > sic_split_upper) throw DomainError("split config: sic bounds must be ordered");
}

Aggregate aggregate(const Bounds& cell, const Bounds& region, const EnvGrid& grid, double land_depth_threshold) {
  const auto [i0, i1] = node_range(grid.lons, cell.lon_min, cell.lon_max, cell.lon_max >= region.lon_max);
  const auto [j0, j1] = node_range(grid.lats, cell.lat_min, cell.lat_max, cell.lat_max >= region.lat_max);

  Aggregate agg;
  double sic_sum = 0.0;
  double sic_sq = 0.0;
  double u_sum = 0.0;
  double v_sum = 0.0;
  int current_count = 0;
  int depth_count = 0;
  int land_count = 0;
  agg.sic_min = 100.0;
  agg.sic_max = 0.0;
  for (std::size_t j = j0; j < j1; ++j) {
    for (std::size_t i = i0; i < i1; ++i) {
      const std::size_t k = grid.index(j, i);
      const double sic = grid.sic[k];
      if (!EnvGrid::is_missing(sic)) {
        ++agg.data_count;
        sic_sum += sic;
        sic_sq += sic * sic;
        agg.sic_min = std::min(agg.sic_min, sic);
        agg.sic_max = std::max(agg.sic_max, sic);
      }
      const double u = grid.current_u[k];
      const double v = grid.current_v[k];
      if (!EnvGrid::is_missing(u) && !EnvGrid::is_missing(v)) {
        ++current_count;
        u_sum += u;
        v_sum += v;
      }
      const double d = grid.depth[k];
      if (!EnvGrid::is_missing(d)) {
        ++depth_count;
        if (d > land_depth_threshold) ++land_count;
      }
    }
  }
  if (agg.data_count == 0) {
    agg.sic = EnvGrid::kMissing;
    agg.sic_min = agg.sic_max = EnvGrid::kMissing;
  } else {
    const double n = agg.data_count;
    agg.sic = sic_sum / n;
    agg.sic_variance = std::max(0.0, sic_sq / n - agg.sic * agg.sic);
  }
  if (current_count > 0) {
    agg.current_u = u_sum / current_count;
    agg.current_v = v_sum / current_count;
  }
  if (depth_count > 0) agg.land_fraction = static_cast<double>(land_count) / depth_count;
  return agg;
}

bool should_split(const Aggregate& agg, const SplitConfig& cfg) {
  if (agg.empty()) return false;
  const bool straddles = agg.sic_min < cfg.sic_split_lower && agg.sic_max > cfg.sic_split_upper;
  const bool varied = agg.sic_variance > cfg.sic_variance_threshold;
  const bool coastal = agg.land_fraction > 0.0 && agg.land_fraction < 1.0;
  return straddles || varied || coastal;
}

std::vector<CellBox> build_mesh(const EnvGrid& grid, const SplitConfig& cfg, const Bounds& region,
                                double initial_cell_size) {
  cfg.validate();
  if (region.empty()) throw DomainError("mesh region is empty");
  if (!(initial_cell_size > 0.0)) throw DomainError("initial cell size must be positive");
  const Bounds extent = grid.extent();
  if (region.lon_min < extent.lon_min || region.lon_max > extent.lon_max || region.lat_min < extent.lat_min ||
      region.lat_max > extent.lat_max) {
    throw DomainError("mesh region lies outside the grid extent");
  }

  const auto count = [&](double span, const char* axis) {
    const double n = std::round(span / initial_cell_size);
    if (n < 1.0 || std::abs(n * initial_cell_size - span) > 1e-9 * std::max(1.0, span)) {
      throw DomainError(std::string("region ") + axis + " extent is not a multiple of the initial cell size");
    }
    return static_cast<int>(n);
  };
  const int cols = count(region.width(), "longitude");
  const int rows = count(region.height(), "latitude");

  MeshBuilder builder(grid, cfg, region);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      // Outer edges are pinned to the region so the cover is exact.
      const Bounds root{
          c == 0 ? region.lon_min : region.lon_min + c * initial_cell_size,
          c == cols - 1 ? region.lon_max : region.lon_min + (c + 1) * initial_cell_size,
          r == 0 ? region.lat_min : region.lat_min + r * initial_cell_size,
          r == rows - 1 ? region.lat_max : region.lat_min + (r + 1) * initial_cell_size,
      };
      builder.split(root, 0);
    }
  }
  return builder.take();
}

bool is_blocked(const CellBox& cell, double max_ice_conc) {
  return cell.data_count == 0 || cell.agg_sic > max_ice_conc || cell.land_fraction > 0.0;
}

}  // namespace icenav
