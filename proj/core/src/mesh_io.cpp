#include "icenav/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "icenav/error.hpp"

namespace icenav {

using nlohmann::json;

std::string mesh_to_json(const NeighbourGraph& graph, const Bounds& region) {
  json cells = json::array();
  for (const CellBox& c : graph.cells()) {
    json sic = EnvGrid::is_missing(c.agg_sic) ? json(nullptr) : json(c.agg_sic);
    cells.push_back({{"id", c.id},
                     {"centre", {c.centre.lon, c.centre.lat}},
                     {"half_width", c.half_width},
                     {"half_height", c.half_height},
                     {"depth_level", c.depth_level},
                     {"sic", sic},
                     {"current", {c.current_u, c.current_v}},
                     {"land_fraction", c.land_fraction},
                     {"data_count", c.data_count},
                     {"blocked", static_cast<bool>(graph.blocked(c.id))}});
  }
  json edges = json::array();
  for (const Edge& e : graph.edges()) edges.push_back({e.src, e.dst, e.code});
  const json doc = {{"format", "icenav-mesh"},
                    {"version", 1},
                    {"region",
                     {{"lon_min", region.lon_min},
                      {"lon_max", region.lon_max},
                      {"lat_min", region.lat_min},
                      {"lat_max", region.lat_max}}},
                    {"cells", cells},
                    {"edges", edges}};
  return doc.dump(1) + "\n";
}

void write_mesh(std::ostream& out, const NeighbourGraph& graph, const Bounds& region) {
  out << mesh_to_json(graph, region);
}

MeshDocument read_mesh(std::istream& in, const std::string& source) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(source + ": invalid mesh JSON: " + e.what());
  }
  const auto field = [&](const json& obj, const char* key) -> const json& {
    if (!obj.contains(key)) throw ParseError(source + ": mesh document lacks field '" + key + "'");
    return obj.at(key);
  };
  try {
    if (field(doc, "format").get<std::string>() != "icenav-mesh") {
      throw ParseError(source + ": field 'format' is not 'icenav-mesh'");
    }
    MeshDocument m;
    const json& r = field(doc, "region");
    m.region = {field(r, "lon_min").get<double>(), field(r, "lon_max").get<double>(),
                field(r, "lat_min").get<double>(), field(r, "lat_max").get<double>()};
    for (const json& c : field(doc, "cells")) {
      CellBox cell;
      cell.id = field(c, "id").get<int>();
      const json& centre = field(c, "centre");
      cell.centre = {centre.at(0).get<double>(), centre.at(1).get<double>()};
      cell.half_width = field(c, "half_width").get<double>();
      cell.half_height = field(c, "half_height").get<double>();
      cell.depth_level = field(c, "depth_level").get<int>();
      const json& sic = field(c, "sic");
      cell.agg_sic = sic.is_null() ? EnvGrid::kMissing : sic.get<double>();
      const json& cur = field(c, "current");
      cell.current_u = cur.at(0).get<double>();
      cell.current_v = cur.at(1).get<double>();
      cell.land_fraction = field(c, "land_fraction").get<double>();
      cell.data_count = field(c, "data_count").get<int>();
      m.cells.push_back(cell);
      m.blocked.push_back(field(c, "blocked").get<bool>());
    }
    for (const json& e : field(doc, "edges")) {
      m.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
    }
    return m;
  } catch (const json::exception& e) {
    throw ParseError(source + ": malformed mesh document: " + e.what());
  }
}

MeshDocument read_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file '" + path.string() + "'");
  return read_mesh(in, path.string());
}

NeighbourGraph graph_from_document(const MeshDocument& doc) {
  const auto& blocked = doc.blocked;
  return NeighbourGraph(doc.cells, [&blocked](const CellBox& c) {
    return blocked.at(static_cast<std::size_t>(c.id));
  });
}

std::string content_id(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace icenav
