#pragma once

// JSON interchange for meshes and their neighbour graphs.
//
//   {"format": "icenav-mesh", "version": 1,
//    "region": {"lon_min": .., "lon_max": .., "lat_min": .., "lat_max": ..},
//    "cells": [{"id", "centre": [lon, lat], "half_width", "half_height",
//               "depth_level", "sic", "current": [u, v], "land_fraction",
//               "data_count", "blocked"}, ...],
//    "edges": [[src, dst, code], ...]}
//
// sic is null for cells without data.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "icenav/grid.hpp"
#include "icenav/neighbour_graph.hpp"

namespace icenav {

struct MeshDocument {
  Bounds region;
  std::vector<CellBox> cells;
  std::vector<bool> blocked;
  std::vector<Edge> edges;
};

std::string mesh_to_json(const NeighbourGraph& graph, const Bounds& region);
void write_mesh(std::ostream& out, const NeighbourGraph& graph, const Bounds& region);
MeshDocument read_mesh(std::istream& in, const std::string& source = "<stream>");
MeshDocument read_mesh_file(const std::filesystem::path& path);

/// Rebuilds the graph with the blocked flags stored in the document.
NeighbourGraph graph_from_document(const MeshDocument& doc);

/// FNV-1a 64-bit hash, hex encoded; identifies a serialised mesh.
std::string content_id(const std::string& bytes);

}  // namespace icenav
