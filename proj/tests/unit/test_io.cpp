#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "icenav/error.hpp"
#include "icenav/mesh_io.hpp"
#include "icenav/route_io.hpp"

using namespace icenav;
using icenav::testing::make_grid;

namespace {

NeighbourGraph sample_graph(Bounds& region) {
  const EnvGrid g = make_grid(0, 4, -66, -64, 0.125, [](double lon, double lat) {
    return std::clamp(40.0 * (lon - 1.0) + 10.0 * (lat + 66.0), 0.0, 100.0);
  }, [](double lon, double) { return lon > 3.6 ? 5.0 : -500.0; });
  region = {0, 4, -66, -64};
  auto cells = build_mesh(g, {}, region, 1.0);
  return NeighbourGraph(std::move(cells), [](const CellBox& c) { return is_blocked(c, 80.0); });
}

}  // namespace

TEST(MeshIo, RoundTrip) {
  Bounds region;
  const NeighbourGraph graph = sample_graph(region);
  ASSERT_GT(graph.size(), 8u);
  const std::string text = mesh_to_json(graph, region);
  std::istringstream in(text);
  const MeshDocument doc = read_mesh(in);
  ASSERT_EQ(doc.cells.size(), graph.size());
  for (std::size_t i = 0; i < doc.cells.size(); ++i) {
    const CellBox& a = graph.cells()[i];
    const CellBox& b = doc.cells[i];
    EXPECT_EQ(a.id, b.id);
    EXPECT_EQ(a.centre, b.centre);
    EXPECT_EQ(a.half_width, b.half_width);
    EXPECT_EQ(a.depth_level, b.depth_level);
    EXPECT_EQ(a.land_fraction, b.land_fraction);
    EXPECT_EQ(a.data_count, b.data_count);
    if (std::isnan(a.agg_sic)) {
      EXPECT_TRUE(std::isnan(b.agg_sic));
    } else {
      EXPECT_EQ(a.agg_sic, b.agg_sic);
    }
    EXPECT_EQ(doc.blocked[i], graph.blocked(static_cast<int>(i)));
  }
  const NeighbourGraph rebuilt = graph_from_document(doc);
  ASSERT_EQ(rebuilt.edge_count(), graph.edge_count());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    const auto& x = graph.neighbours(static_cast<int>(i));
    const auto& y = rebuilt.neighbours(static_cast<int>(i));
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t e = 0; e < x.size(); ++e) {
      EXPECT_EQ(x[e].dst, y[e].dst);
      EXPECT_EQ(x[e].code, y[e].code);
    }
  }
  EXPECT_EQ(mesh_to_json(rebuilt, doc.region), text);
}

TEST(MeshIo, ContentIdIsStableAndSensitive) {
  EXPECT_EQ(content_id(""), "cbf29ce484222325");
  EXPECT_EQ(content_id("a"), "af63dc4c8601ec8c");
  EXPECT_NE(content_id("mesh 1"), content_id("mesh 2"));
}

TEST(MeshIo, ErrorsNameTheField) {
  const auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      read_mesh(in);
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "no ParseError for " << text;
  };
  fails_with("{", "<stream>");
  fails_with(R"({"format": "other", "version": 1})", "format");
  fails_with(R"({"format": "icenav-mesh", "version": 1, "cells": [], "edges": []})", "region");
  fails_with(R"({"format": "icenav-mesh", "version": 1,
                 "region": {"lon_min": 0, "lon_max": 1, "lat_min": 0, "lat_max": 1},
                 "cells": [{"id": 0, "centre": [0.5, 0.5], "half_width": 0.5}], "edges": []})",
             "half_height");
  EXPECT_THROW(read_mesh_file("/nonexistent/mesh.json"), IoError);
}

TEST(RouteIo, GeoJsonStructure) {
  Route r;
  r.points = {{1, -65}, {2, -65.5}, {3, -65}};
  r.legs = {{0, 100, 1000, 0.5}, {1, 200, 2000, 1.0}};
  r.total_time_s = 300;
  r.total_distance_m = 3000;
  r.total_fuel_t = 1.5;
  Route s = r;
  s.points = {{1, -65}, {3, -65}};
  s.legs = {{0, 250, 2900, 1.2}};
  s.total_time_s = 250;
  const RouteSummary summary{"A", "B", Objective::travel_time, "abc"};
  const std::string text = route_geojson({{"dijkstra", r, {}, {}}, {"smoothed", s, 12, true}}, summary);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["type"], "FeatureCollection");
  ASSERT_EQ(j["features"].size(), 2u);
  const auto& f = j["features"][1];
  EXPECT_EQ(f["type"], "Feature");
  EXPECT_EQ(f["geometry"]["type"], "LineString");
  EXPECT_EQ(f["geometry"]["coordinates"][1][0], 3.0);
  EXPECT_EQ(f["properties"]["kind"], "smoothed");
  EXPECT_EQ(f["properties"]["iterations"], 12);
  EXPECT_EQ(f["properties"]["converged"], true);
  EXPECT_EQ(j["summary"]["from"], "A");
  EXPECT_EQ(j["summary"]["mesh_id"], "abc");
  EXPECT_NEAR(j["summary"]["improvement_pct"].get<double>(), improvement_percent(300, 250), 1e-12);

  std::istringstream in(text);
  const auto lines = read_route_lines(in);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], r.points);
  EXPECT_EQ(lines[1], s.points);
}

TEST(RouteIo, ImprovementPercent) {
  EXPECT_DOUBLE_EQ(improvement_percent(200, 150), 25.0);
  EXPECT_DOUBLE_EQ(improvement_percent(0, 5), 0.0);
  EXPECT_LT(improvement_percent(100, 110), 0.0);
}

TEST(RouteIo, TraceCsv) {
  std::ostringstream out;
  write_trace_csv(out, {{0, 1234.5, 7}, {1, 1200.25, 9}});
  EXPECT_EQ(out.str(), "iteration,total_time_s,node_count\n0,1234.500000,7\n1,1200.250000,9\n");
}
