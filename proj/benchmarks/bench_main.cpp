#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "crossing_gen.hpp"
#include "icenav/cli/commands.hpp"
#include "icenav/cli/config.hpp"
#include "icenav/crossing.hpp"
#include "icenav/planner.hpp"
#include "icenav/smoother.hpp"
#include "icenav/vessel.hpp"

using namespace icenav;

namespace {

const std::filesystem::path kConfig = std::filesystem::path(ICENAV_TEST_DATA_DIR) / "sea.json";

std::vector<CrossingProblem> problems(Orientation o) {
  std::mt19937_64 rng(1);
  std::vector<CrossingProblem> out;
  for (int i = 0; i < 256; ++i) out.push_back(testing::random_problem(rng, o));
  return out;
}

void BM_SolveCrossing(benchmark::State& state) {
  const auto ps = problems(static_cast<Orientation>(state.range(0)));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_crossing(ps[i++ % ps.size()]));
  }
}
BENCHMARK(BM_SolveCrossing)
    ->Arg(static_cast<int>(Orientation::flat_horizontal))
    ->Arg(static_cast<int>(Orientation::smoothed_horizontal))
    ->Arg(static_cast<int>(Orientation::smoothed_vertical));

void BM_BuildMesh(benchmark::State& state) {
  const cli::RunConfig cfg = cli::load_config(kConfig);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cli::build_graph(cfg));
  }
}
BENCHMARK(BM_BuildMesh)->Unit(benchmark::kMillisecond);

struct Scenario {
  cli::RunConfig cfg = cli::load_config(kConfig);
  NeighbourGraph graph = cli::build_graph(cfg);
  std::vector<CellPerformance> perf = augment_mesh(graph.cells(), cfg.vessel);
  MeshView view{graph, perf};
  geo::GeoPoint a = cfg.waypoint("West").position;
  geo::GeoPoint b = cfg.waypoint("East").position;
};

void BM_BuildEdges(benchmark::State& state) {
  const Scenario s;
  for (auto _ : state) benchmark::DoNotOptimize(build_edges(s.view));
}
BENCHMARK(BM_BuildEdges)->Unit(benchmark::kMicrosecond);

void BM_Plan(benchmark::State& state) {
  const Scenario s;
  const EdgeTable edges = build_edges(s.view);
  for (auto _ : state) benchmark::DoNotOptimize(plan(edges, s.view, s.a, s.b));
}
BENCHMARK(BM_Plan)->Unit(benchmark::kMicrosecond);

void BM_Smooth(benchmark::State& state) {
  const Scenario s;
  const DijkstraPath path = plan(build_edges(s.view), s.view, s.a, s.b);
  for (auto _ : state) benchmark::DoNotOptimize(smooth(path, s.view, s.cfg.smoothing));
}
BENCHMARK(BM_Smooth)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
