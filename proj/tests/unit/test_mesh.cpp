#include <gtest/gtest.h>

#include <map>
#include <random>
#include <tuple>

#include "fixtures.hpp"
#include "icenav/error.hpp"
#include "icenav/mesh.hpp"
#include "icenav/neighbour_graph.hpp"

using namespace icenav;
using icenav::testing::make_grid;

namespace {

SplitConfig config(int depth) {
  SplitConfig c;
  c.max_depth = depth;
  return c;
}

std::tuple<double, double, double, double> key(const CellBox& c) {
  const Bounds b = c.bounds();
  return {b.lon_min, b.lon_max, b.lat_min, b.lat_max};
}

}  // namespace

TEST(Aggregate, MeansAndCounts) {
  const EnvGrid flat = make_grid(0, 4, 0, 4, 1, [](double, double) { return 50.0; });
  const Bounds region{0, 4, 0, 4};
  const Aggregate a = aggregate(region, region, flat, -10.0);
  EXPECT_DOUBLE_EQ(a.sic, 50.0);
  EXPECT_EQ(a.data_count, 25);
  EXPECT_DOUBLE_EQ(a.sic_variance, 0.0);

  const EnvGrid split = make_grid(0, 3, 0, 3, 1, [](double lon, double) { return lon < 2 ? 0.0 : 100.0; });
  EXPECT_DOUBLE_EQ(aggregate(region, region, split, -10.0).sic, 50.0);
}

TEST(Aggregate, HalfOpenMembershipExceptAtRegionEdge) {
  const EnvGrid g = make_grid(0, 2, 0, 2, 1, [](double, double) { return 10.0; });
  const Bounds region{0, 2, 0, 2};
  EXPECT_EQ(aggregate({0, 1, 0, 1}, region, g, -10).data_count, 1);
  EXPECT_EQ(aggregate({1, 2, 1, 2}, region, g, -10).data_count, 4);
  EXPECT_EQ(aggregate({0, 1, 1, 2}, region, g, -10).data_count, 2);
}

TEST(Aggregate, LandFractionMatchesHandCount) {
  // Depth above -10 m counts as land: columns lon <= 1 are 5 m deep, i.e. land.
  const EnvGrid g = make_grid(
      0, 4, 0, 3, 1, [](double, double) { return 0.0; }, [](double lon, double) { return lon <= 1 ? -5.0 : -500.0; });
  const Bounds cell{0, 3, 0, 3};
  const Aggregate a = aggregate(cell, {0, 4, 0, 3}, g, -10.0);
  // Nodes lon {0,1,2} x lat {0,1,2,3}: 8 of 12 are land.
  EXPECT_EQ(a.data_count, 12);
  EXPECT_DOUBLE_EQ(a.land_fraction, 8.0 / 12.0);
}

TEST(Aggregate, EmptyCellSignalled) {
  const EnvGrid g = make_grid(0, 4, 0, 4, 1, [](double lon, double) { return lon < 2 ? EnvGrid::kMissing : 5.0; });
  const Aggregate a = aggregate({0, 2, 0, 2}, {0, 4, 0, 4}, g, -10.0);
  EXPECT_TRUE(a.empty());
  EXPECT_FALSE(should_split(a, SplitConfig{}));
}

TEST(BuildMesh, UniformGridDoesNotSplit) {
  const EnvGrid g = make_grid(0, 10, -70, -60, 0.25, [](double, double) { return 42.0; });
  for (int depth : {0, 1, 4}) {
    const auto cells = build_mesh(g, config(depth), {0, 10, -70, -60}, 2.5);
    EXPECT_EQ(cells.size(), 16u);
    for (const auto& c : cells) EXPECT_EQ(c.depth_level, 0);
  }
}

TEST(BuildMesh, StraddlingCellSplitsIntoHandBuiltQuarters) {
  const EnvGrid g = make_grid(0, 2, 0, 2, 0.25, [](double lon, double lat) { return lon < 1 && lat < 1 ? 0.0 : 100.0; });
  const auto cells = build_mesh(g, config(1), {0, 2, 0, 2}, 2.0);
  ASSERT_EQ(cells.size(), 4u);
  const Bounds expected[] = {{0, 1, 0, 1}, {1, 2, 0, 1}, {0, 1, 1, 2}, {1, 2, 1, 2}};
  const double sic[] = {0.0, 100.0, 100.0, 100.0};
  const int count[] = {16, 20, 20, 25};
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(cells[i].id, i);
    EXPECT_EQ(cells[i].bounds(), expected[i]);
    EXPECT_EQ(cells[i].depth_level, 1);
    EXPECT_DOUBLE_EQ(cells[i].agg_sic, sic[i]);
    EXPECT_EQ(cells[i].data_count, count[i]);
  }
}

TEST(BuildMesh, DepthCapAndDataFloor) {
  const EnvGrid g = make_grid(0, 2, 0, 2, 0.25, [](double lon, double lat) { return lon < 1 && lat < 1 ? 0.0 : 100.0; });
  EXPECT_EQ(build_mesh(g, config(0), {0, 2, 0, 2}, 2.0).size(), 1u);
  SplitConfig strict = config(3);
  strict.min_data_points = 17;  // the SW quarter only holds 16 nodes
  EXPECT_EQ(build_mesh(g, strict, {0, 2, 0, 2}, 2.0).size(), 1u);
}

TEST(BuildMesh, CoastlineSplits) {
  const EnvGrid g = make_grid(
      0, 4, 0, 4, 0.25, [](double, double) { return 0.0; },
      [](double lon, double lat) { return lon + lat < 3 ? 20.0 : -1000.0; });
  const auto cells = build_mesh(g, config(2), {0, 4, 0, 4}, 4.0);
  EXPECT_GT(cells.size(), 4u);
}

TEST(BuildMesh, RejectsBadRegions) {
  const EnvGrid g = make_grid(0, 4, 0, 4, 1, [](double, double) { return 0.0; });
  EXPECT_THROW(build_mesh(g, config(1), {0, 5, 0, 4}, 1.0), DomainError);
  EXPECT_THROW(build_mesh(g, config(1), {0, 4, 0, 4}, 1.5), DomainError);
  SplitConfig bad;
  bad.min_data_points = 0;
  EXPECT_THROW(build_mesh(g, bad, {0, 4, 0, 4}, 1.0), DomainError);
}

class RandomGrids : public ::testing::TestWithParam<int> {};

TEST_P(RandomGrids, PartitionConsistencyAndRefinement) {
  std::mt19937_64 rng(static_cast<unsigned>(GetParam()));
  // Blobs of ice on open water, some nodes missing.
  const double cx = icenav::testing::uniform(rng, 2, 10);
  const double cy = icenav::testing::uniform(rng, -68, -62);
  const double r = icenav::testing::uniform(rng, 1, 4);
  std::vector<double> noise(2000);
  for (auto& n : noise) n = icenav::testing::uniform(rng, 0, 1);
  std::size_t k = 0;
  const EnvGrid g = make_grid(0, 12, -70, -60, 0.25, [&](double lon, double lat) {
    const double u = noise[k++ % noise.size()];
    if (u < 0.02) return EnvGrid::kMissing;
    const double d = std::hypot(lon - cx, lat - cy);
    return d < r ? 60.0 + 40.0 * u : 30.0 * u;
  });
  const Bounds region{0, 12, -70, -60};

  std::map<std::tuple<double, double, double, double>, CellBox> previous;
  for (int depth = 0; depth <= 3; ++depth) {
    const auto cells = build_mesh(g, config(depth), region, 2.0);
    double area = 0.0;
    long nodes = 0;
    for (const auto& c : cells) {
      area += 4.0 * c.half_width * c.half_height;
      nodes += c.data_count;
      EXPECT_LE(c.depth_level, depth);
    }
    EXPECT_NEAR(area, 120.0, 120.0 * 1e-9);
    long valid = 0;
    for (double v : g.sic) valid += EnvGrid::is_missing(v) ? 0 : 1;
    EXPECT_EQ(nodes, valid);
    // Overlaps would throw while building the graph.
    EXPECT_NO_THROW(NeighbourGraph(cells, [](const CellBox&) { return false; }));

    std::map<std::tuple<double, double, double, double>, CellBox> now;
    for (const auto& c : cells) now.emplace(key(c), c);
    for (const auto& [k2, c] : previous) {
      auto it = now.find(k2);
      if (it == now.end()) continue;
      EXPECT_EQ(it->second.data_count, c.data_count);
      if (c.data_count > 0) EXPECT_DOUBLE_EQ(it->second.agg_sic, c.agg_sic);
    }
    previous = std::move(now);
  }

  // Children's count-weighted mean reproduces the parent.
  const Bounds parent{2, 6, -68, -64};
  const Aggregate pa = aggregate(parent, region, g, -10);
  double weighted = 0.0;
  int count = 0;
  const Bounds quarters[] = {{2, 4, -68, -66}, {4, 6, -68, -66}, {2, 4, -66, -64}, {4, 6, -66, -64}};
  for (const auto& q : quarters) {
    const Aggregate a = aggregate(q, region, g, -10);
    if (a.data_count > 0) weighted += a.sic * a.data_count;
    count += a.data_count;
  }
  EXPECT_EQ(count, pa.data_count);
  EXPECT_NEAR(weighted / count, pa.sic, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomGrids, ::testing::Range(1, 21));
