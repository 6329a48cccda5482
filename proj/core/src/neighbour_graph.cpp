#include "icenav/neighbour_graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "icenav/error.hpp"

namespace icenav {

std::optional<int> touch_code(const Bounds& a, const Bounds& b, double tol) {
  const double ov_lon = std::min(a.lon_max, b.lon_max) - std::max(a.lon_min, b.lon_min);
  const double ov_lat = std::min(a.lat_max, b.lat_max) - std::max(a.lat_min, b.lat_min);
  if (ov_lon > tol && ov_lat > tol) throw StructuralError("mesh cells overlap");
  if (ov_lon < -tol || ov_lat < -tol) return std::nullopt;

  const bool east = std::abs(a.lon_max - b.lon_min) <= tol;
  const bool west = std::abs(a.lon_min - b.lon_max) <= tol;
  const bool north = std::abs(a.lat_max - b.lat_min) <= tol;
  const bool south = std::abs(a.lat_min - b.lat_max) <= tol;

  if (ov_lat > tol) {
    if (east) return 2;
    if (west) return -2;
  }
  if (ov_lon > tol) {
    if (south) return 4;
    if (north) return -4;
  }
  if (east && north) return 1;
  if (east && south) return 3;
  if (west && south) return -1;
  if (west && north) return -3;
  return std::nullopt;
}

NeighbourGraph::NeighbourGraph(std::vector<CellBox> cells, const BlockedFn& blocked, double tol)
    : cells_(std::move(cells)), tol_(tol) {
  const std::size_t n = cells_.size();
  blocked_.resize(n);
  pruned_.resize(n);
  touching_.resize(n);
  if (n == 0) return;

  double max_w = 0.0;
  double max_h = 0.0;
  extent_ = cells_[0].bounds();
  for (std::size_t i = 0; i < n; ++i) {
    const CellBox& c = cells_[i];
    if (c.id != static_cast<int>(i)) {
      throw StructuralError("cell ids must be dense and ordered; found id " + std::to_string(c.id) +
                            " at position " + std::to_string(i));
    }
    if (!(c.half_width > 0.0 && c.half_height > 0.0)) {
      throw StructuralError("cell " + std::to_string(c.id) + " has a degenerate extent");
    }
    blocked_[i] = blocked(c);
    const Bounds b = c.bounds();
    extent_.lon_min = std::min(extent_.lon_min, b.lon_min);
    extent_.lon_max = std::max(extent_.lon_max, b.lon_max);
    extent_.lat_min = std::min(extent_.lat_min, b.lat_min);
    extent_.lat_max = std::max(extent_.lat_max, b.lat_max);
    max_w = std::max(max_w, b.width());
    max_h = std::max(max_h, b.height());
  }

  // Buckets no smaller than the largest cell keep the per-cell candidate set small.
  bucket_w_ = max_w;
  bucket_h_ = max_h;
  bucket_cols_ = std::max(1, static_cast<int>(std::ceil(extent_.width() / bucket_w_)));
  bucket_rows_ = std::max(1, static_cast<int>(std::ceil(extent_.height() / bucket_h_)));
  buckets_.assign(static_cast<std::size_t>(bucket_cols_ * bucket_rows_), {});
  for (std::size_t i = 0; i < n; ++i) {
    for (int k : bucket_range(cells_[i].bounds())) buckets_[static_cast<std::size_t>(k)].push_back(static_cast<int>(i));
  }

  for (std::size_t i = 0; i < n; ++i) {
    std::set<int> candidates;
    for (int k : bucket_range(cells_[i].bounds())) {
      for (int j : buckets_[static_cast<std::size_t>(k)]) {
        if (j != static_cast<int>(i)) candidates.insert(j);
      }
    }
    for (int j : candidates) {
      const auto code = touch_code(cells_[i].bounds(), cells_[static_cast<std::size_t>(j)].bounds(), tol_);
      if (!code) continue;
      const Edge e{static_cast<int>(i), j, *code};
      touching_[i].push_back(e);
      if (!blocked_[i] && !blocked_[static_cast<std::size_t>(j)]) pruned_[i].push_back(e);
    }
  }
}

std::vector<int> NeighbourGraph::bucket_range(const Bounds& b) const {
  const auto col = [&](double lon) {
    return std::clamp(static_cast<int>(std::floor((lon - extent_.lon_min) / bucket_w_)), 0, bucket_cols_ - 1);
  };
  const auto row = [&](double lat) {
    return std::clamp(static_cast<int>(std::floor((lat - extent_.lat_min) / bucket_h_)), 0, bucket_rows_ - 1);
  };
  std::vector<int> out;
  const double pad = 2.0 * tol_;
  for (int r = row(b.lat_min - pad); r <= row(b.lat_max + pad); ++r) {
    for (int c = col(b.lon_min - pad); c <= col(b.lon_max + pad); ++c) out.push_back(r * bucket_cols_ + c);
  }
  return out;
}

std::optional<int> NeighbourGraph::edge_code(int src, int dst) const {
  if (src < 0 || dst < 0 || src >= static_cast<int>(size())) return std::nullopt;
  for (const Edge& e : neighbours(src)) {
    if (e.dst == dst) return e.code;
  }
  return std::nullopt;
}

std::optional<int> NeighbourGraph::touch(int src, int dst) const {
  if (src < 0 || dst < 0 || src >= static_cast<int>(size())) return std::nullopt;
  for (const Edge& e : touching(src)) {
    if (e.dst == dst) return e.code;
  }
  return std::nullopt;
}

std::vector<Edge> NeighbourGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& list : pruned_) out.insert(out.end(), list.begin(), list.end());
  return out;
}

std::size_t NeighbourGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : pruned_) total += list.size();
  return total;
}

std::optional<int> NeighbourGraph::locate(const geo::GeoPoint& p) const {
  if (cells_.empty()) return std::nullopt;
  // Meshes may keep longitudes outside [-180, 180) when they span the antimeridian.
  for (double shift : {0.0, 360.0, -360.0}) {
    if (auto id = locate_exact({p.lon + shift, p.lat})) return id;
  }
  return std::nullopt;
}

std::optional<int> NeighbourGraph::locate_exact(const geo::GeoPoint& p) const {
  const Bounds probe{p.lon, p.lon, p.lat, p.lat};
  std::optional<int> best;
  for (int k : bucket_range(probe)) {
    for (int id : buckets_[static_cast<std::size_t>(k)]) {
      const Bounds b = cells_[static_cast<std::size_t>(id)].bounds();
      const bool inside = p.lon >= b.lon_min - tol_ && p.lon <= b.lon_max + tol_ && p.lat >= b.lat_min - tol_ &&
                          p.lat <= b.lat_max + tol_;
      if (inside && (!best || id < *best)) best = id;
    }
  }
  return best;
}

}  // namespace icenav
