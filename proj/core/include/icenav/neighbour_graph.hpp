#pragma once

// Adjacency between quadtree leaves, labelled with compass case codes.
//
//   -3 NW   -4 N   1 NE
//   -2 W           2 E
//   -1 SW    4 S   3 SE
//
// A code always describes the direction from the source cell to the target.

#include <functional>
#include <optional>
#include <vector>

#include "icenav/geo.hpp"
#include "icenav/mesh.hpp"

namespace icenav {

struct Edge {
  int src = -1;
  int dst = -1;
  int code = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

inline bool is_diagonal(int code) { return code == 1 || code == 3 || code == -1 || code == -3; }
inline bool is_horizontal(int code) { return code == 2 || code == -2; }
inline bool is_vertical(int code) { return code == 4 || code == -4; }

/// Compass code for the geometric relation of b to a, if they touch.
/// Throws StructuralError when the two boxes overlap with positive area.
std::optional<int> touch_code(const Bounds& a, const Bounds& b, double tol);

class NeighbourGraph {
 public:
  using BlockedFn = std::function<bool(const CellBox&)>;

  /// Cell ids must be dense and equal to their position in `cells`.
  NeighbourGraph(std::vector<CellBox> cells, const BlockedFn& blocked, double tol = 1e-9);

  const std::vector<CellBox>& cells() const { return cells_; }
  const CellBox& cell(int id) const { return cells_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return cells_.size(); }
  bool blocked(int id) const { return blocked_.at(static_cast<std::size_t>(id)); }

  /// Pruned out-edges of a cell, sorted by target id. Empty for blocked cells.
  const std::vector<Edge>& neighbours(int id) const { return pruned_.at(static_cast<std::size_t>(id)); }
  /// Every touching cell, blocked or not.
  const std::vector<Edge>& touching(int id) const { return touching_.at(static_cast<std::size_t>(id)); }

  /// Code of the pruned edge src -> dst, if present.
  std::optional<int> edge_code(int src, int dst) const;
  /// Code of the geometric contact src -> dst regardless of blocking.
  std::optional<int> touch(int src, int dst) const;

  /// All pruned edges ordered by (src, dst).
  std::vector<Edge> edges() const;
  std::size_t edge_count() const;

  /// Lowest-id cell whose closed extent contains p.
  std::optional<int> locate(const geo::GeoPoint& p) const;

  double tolerance() const { return tol_; }

 private:
  std::vector<int> bucket_range(const Bounds& b) const;
  std::optional<int> locate_exact(const geo::GeoPoint& p) const;

  std::vector<CellBox> cells_;
  std::vector<bool> blocked_;
  std::vector<std::vector<Edge>> pruned_;
  std::vector<std::vector<Edge>> touching_;
  double tol_;

  Bounds extent_{};
  int bucket_cols_ = 1;
  int bucket_rows_ = 1;
  double bucket_w_ = 1.0;
  double bucket_h_ = 1.0;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace icenav
