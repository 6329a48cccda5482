// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crossing_gen.hpp"
#include "fixtures.hpp"
#include "icenav/cli/commands.hpp"
#include "icenav/crossing.hpp"
#include "icenav/error.hpp"
#include "icenav/planner.hpp"
#include "icenav/route_io.hpp"
#include "icenav/smoother.hpp"
#include "icenav/validation.hpp"
#include "icenav/vessel.hpp"
#include "oracles.hpp"

using namespace icenav;
using namespace icenav::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = ICENAV_TEST_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o) {
  std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  failures += o.pass ? 0 : 1;
}

template <typename... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome solver_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  int bad_arg = 0;
  int bad_obj = 0;
  int unconverged = 0;
  double worst_gap = 0.0;
  for (Orientation o : {Orientation::flat_horizontal, Orientation::smoothed_horizontal, Orientation::smoothed_vertical}) {
    for (int i = 0; i < 1000; ++i) {
      const CrossingProblem p = random_problem(rng, o);
      const CrossingSolution s = solve_crossing(p);
      unconverged += !s.converged;
      const auto [lo, hi] = crossing_bracket(p);
      const GridMin ref = grid_search([&](double y) { return reference_objective(p, y); }, lo, hi, 100'000);
      if (std::abs(s.yval - ref.arg) > 2.0 * ref.spacing) ++bad_arg;
      const double mine = reference_objective(p, s.yval);
      const double gap = (mine - ref.value) / ref.value;
      worst_gap = std::max(worst_gap, gap);
      if (gap > 1e-9) ++bad_obj;
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad_arg == 0 && bad_obj == 0 && unconverged == 0 && secs < 30.0,
          fmt("3000 instances, %d yval misses, %d objective misses (worst rel gap %.2e), %d unconverged, %.1f s",
              bad_arg, bad_obj, worst_gap, unconverged, secs)};
}

Outcome closed_form_travel_time() {
  const double a = travel_time({1000, 0}, {0, 0}, 5).seconds;
  const double b = travel_time({1000, 0}, {1, 0}, 5).seconds;
  const double c = travel_time({1000, 0}, {0, 3}, 5).seconds;
  const auto rel = [](double x, double want) { return std::abs(x - want) / want; };
  const double worst = std::max({rel(a, 200.0), rel(b, 1000.0 / 6.0), rel(c, 250.0)});
  return {worst <= 1e-9, fmt("200 -> %.9f, 166.67 -> %.9f, 250 -> %.9f (worst rel err %.1e)", a, b, c, worst)};
}

Outcome snell() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    CrossingProblem p;
    p.left = {uniform(rng, 1, 8), {0, 0}, uniform(rng, 1e3, 1e5)};
    p.right = {uniform(rng, 1, 8), {0, 0}, uniform(rng, 1e3, 1e5)};
    p.Y = uniform(rng, -2e5, 2e5);
    const double y = solve_flat(p).yval;
    const double sin1 = y / std::hypot(p.left.half_span, y);
    const double sin2 = (p.Y - y) / std::hypot(p.right.half_span, p.Y - y);
    worst = std::max(worst, std::abs(sin1 / p.left.speed - sin2 / p.right.speed));
  }
  return {worst <= 1e-6, fmt("1000 zero-current crossings, max |sin a1/s_l - sin a2/s_r| = %.2e", worst)};
}

Outcome flat_limit() {
  std::mt19937_64 rng(17);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    CrossingProblem p = random_problem(rng, Orientation::smoothed_horizontal);
    p.earth_radius *= 1e6;
    p.entry_lat = 0.0;
    p.exit_lat = p.Y / geo::metres_per_degree(p.earth_radius);
    const double flat = solve_flat(p).yval;
    const double curved = solve_smoothed_horizontal(p).yval;
    worst = std::max(worst, std::abs(curved - flat) / std::max(1.0, std::abs(flat)));
  }
  return {worst <= 1e-6, fmt("100 instances with R x 1e6, max relative yval difference %.2e", worst)};
}

Outcome dijkstra_optimality() {
  std::mt19937_64 rng(99);
  int compared = 0;
  int mismatches = 0;
  int meshes = 0;
  const std::vector<std::tuple<int, int, double, int>> shapes{{2, 2, 0.0, 0}, {3, 3, 0.0, 0}, {4, 3, 0.0, 0},
                                                              {2, 2, 0.5, 1}, {3, 2, 0.3, 1}, {2, 1, 0.8, 1}};
  for (const auto& [cols, rows, split, depth] : shapes) {
    for (int trial = 0; trial < 40; ++trial) {
      auto cells = random_quadtree(rng, 10.0, -66.0, cols, rows, 1.0, split, depth);
      if (cells.size() > 12) continue;
      for (auto& c : cells) {
        c.agg_sic = uniform(rng, 0, 1) < 0.5 ? 0.0 : uniform(rng, 0, 90);
        c.current_u = uniform(rng, -1.5, 1.5);
        c.current_v = uniform(rng, -1.5, 1.5);
      }
      MeshFixture m(cells);
      const MeshView view = m.view();
      const EdgeTable edges = build_edges(view);
      ++meshes;
      for (int q = 0; q < 3; ++q) {
        const geo::GeoPoint a{uniform(rng, 10.01, 10.0 + cols - 0.01), uniform(rng, -65.99, -66.0 + rows - 0.01)};
        const geo::GeoPoint b{uniform(rng, 10.01, 10.0 + cols - 0.01), uniform(rng, -65.99, -66.0 + rows - 0.01)};
        if (!view.accessible(*m.graph.locate(a)) || !view.accessible(*m.graph.locate(b))) continue;
        for (Objective o : {Objective::travel_time, Objective::fuel, Objective::distance}) {
          const double best = enumerate_min_cost(edges, view, a, b, o);
          ++compared;
          if (!std::isfinite(best)) {
            try {
              plan(edges, view, a, b, o);
              ++mismatches;
            } catch (const NoRouteError&) {
            }
            continue;
          }
          if (plan(edges, view, a, b, o).cost != best) ++mismatches;
        }
      }
    }
  }
  return {mismatches == 0 && compared > 300,
          fmt("%d meshes of <= 12 cells, %d queries over 3 objectives, %d differ from enumeration", meshes, compared,
              mismatches)};
}

Outcome smoothing_monotone() {
  std::mt19937_64 rng(4242);
  int runs = 0;
  int slower = 0;
  int unconverged = 0;
  int max_iters = 0;
  double improvement = 0.0;
  while (runs < 200) {
    auto cells = random_quadtree(rng, 0.0, -70.0, 6, 6, 1.0, 0.3, 2);
    for (auto& c : cells) {
      c.current_u = uniform(rng, -0.8, 0.8);
      c.current_v = uniform(rng, -0.8, 0.8);
    }
    MeshFixture m(cells);
    const MeshView view = m.view();
    const geo::GeoPoint a{uniform(rng, 0.05, 1.95), uniform(rng, -69.95, -64.05)};
    const geo::GeoPoint b{uniform(rng, 4.05, 5.95), uniform(rng, -69.95, -64.05)};
    const EdgeTable edges = build_edges(view);
    const DijkstraPath path = plan(edges, view, a, b);
    const double dij = path_route(path, view).total_time_s;
    const SmoothedRoute s = smooth(path, view);
    ++runs;
    slower += s.route.total_time_s > dij * (1.0 + 1e-9);
    unconverged += !s.converged;
    max_iters = std::max(max_iters, s.iterations);
    improvement += improvement_percent(dij, s.route.total_time_s);
  }
  const double mean = improvement / runs;
  return {slower == 0 && unconverged == 0 && max_iters <= 1000 && mean > 0.0,
          fmt("%d open-water meshes: %d slower than Dijkstra, %d unconverged, max %d sweeps, mean improvement %.2f%%",
              runs, slower, unconverged, max_iters, mean)};
}

Outcome horseshoe_fixtures() {
  std::vector<std::string> problems;
  const auto check = [&](const std::string& name, std::vector<CellBox> cells, geo::GeoPoint a, geo::GeoPoint b,
                         const std::vector<int>& want) {
    MeshFixture m(std::move(cells));
    const EdgeTable edges = build_edges(m.view());
    const SmoothedRoute s = smooth(plan(edges, m.view(), a, b), m.view());
    if (s.cells != want) problems.push_back(name + " sequence");
    SmoothingState st;
    st.points = s.route.points;
    st.cells = s.cells;
    const SmoothingState before = st;
    if (remove_reversing_edges(st) || st.cells != before.cells || st.points != before.points) {
      problems.push_back(name + " not idempotent");
    }
  };
  check("horizontal", {box_cell(0, 0, 25, -72, -66), box_cell(1, 25, 50, -72, -66), box_cell(2, 0, 25, -66, -60),
                       box_cell(3, 25, 50, -66, -60)},
        {5, -65.3}, {45, -65.3}, {2, 0, 1, 3});
  check("vertical", {box_cell(0, 0, 2, -66, -65), box_cell(1, 0, 1, -65, -64), box_cell(2, 1, 2, -65, -64)},
        {1.9, -65.9}, {0.5, -64.1}, {0, 2, 1});
  check("diagonal", uniform_cells(0, -66, 2, 2, 1.0), {0.2, -65.5}, {1.5, -64.2}, {0, 2, 3});

  SmoothingState loop;
  loop.cells = {0, 1, 2, 1, 3};
  for (int i = 0; i < 6; ++i) loop.points.push_back({double(i), 0.0});
  remove_reversing_edges(loop);
  const auto once = loop.cells;
  if (remove_reversing_edges(loop) || loop.cells != once) problems.push_back("loop collapse not idempotent");

  std::string detail = "horizontal {2,0,1,3}, vertical {0,2,1}, diagonal {0,2,3}";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

Outcome vessel_consistency() {
  const VesselConfig cfg;
  double worst = 0.0;
  for (double v = 0.5; v < 13.0; v += 0.5) {
    for (double h : {0.3, 0.8, 1.5}) {
      for (double c : {0.1, 0.4, 0.8}) {
        const double r = ice_resistance(v, h, c, cfg);
        worst = std::max(worst, std::abs(speed_from_resistance(r, h, c, cfg) - v) / v);
      }
    }
  }
  const double base = fuel_rate(0, 0, cfg);
  const double full = fuel_rate(13, 0, cfg);
  return {worst <= 1e-9 && base == 6.0 && std::abs(full - 23.381) <= 1e-9 * 23.381,
          fmt("round trip worst rel err %.1e, fuel_rate(0,0) = %.12g, fuel_rate(13,0) = %.12g", worst, base, full)};
}

Outcome fuel_fringe() {
  std::vector<CellBox> cells;
  for (int s = 0; s <= 80; ++s) cells.push_back(box_cell(s, s, s + 1.0, -65, -64, s));
  const VesselConfig cfg;
  const auto perf = augment_mesh(cells, cfg);
  int peak = 0;
  int slow = -1;
  for (int s = 0; s <= 80; ++s) {
    if (perf[s].fuel_rate > perf[peak].fuel_rate) peak = s;
    if (slow < 0 && perf[s].safe_speed < cfg.max_speed - 0.1) slow = s;
  }
  return {slow >= 0 && peak < slow,
          fmt("fuel rate peaks at %d%% SIC (%.3f t/day); safe speed first drops below %.1f kn at %d%% SIC", peak,
              perf[peak].fuel_rate, cfg.max_speed - 0.1, slow)};
}

double haversine(const geo::GeoPoint& a, const geo::GeoPoint& b) {
  const double p1 = geo::deg_to_rad(a.lat);
  const double p2 = geo::deg_to_rad(b.lat);
  const double dp = p2 - p1;
  const double dl = geo::deg_to_rad(b.lon - a.lon);
  const double h = std::sin(dp / 2) * std::sin(dp / 2) + std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * geo::kEarthRadius * std::asin(std::sqrt(h));
}

// Samples every `spacing` metres of great-circle length, plus the end point.
std::vector<geo::GeoPoint> sample_line(const std::vector<geo::GeoPoint>& line, double spacing) {
  std::vector<geo::GeoPoint> out{line.front()};
  double carried = 0.0;
  for (std::size_t i = 0; i + 1 < line.size(); ++i) {
    const double len = haversine(line[i], line[i + 1]);
    double at = spacing - carried;
    while (at <= len) {
      const double t = at / len;
      out.push_back({line[i].lon + t * (line[i + 1].lon - line[i].lon), line[i].lat + t * (line[i + 1].lat - line[i].lat)});
      at += spacing;
    }
    carried = len - (at - spacing);
  }
  if (!(out.back() == line.back())) out.push_back(line.back());
  return out;
}

Outcome validation_command() {
  std::ostringstream out, err;
  const int code = cli::cmd_validate({kData / "blob.json", kData / "blob_routes.geojson"}, out, err);
  if (code != 0) return {false, "cmd_validate exit " + std::to_string(code) + ": " + err.str()};

  // Blob geometry as written by the fixture generator.
  const geo::GeoPoint centre{4.0, -64.0};
  const double blob = 40'000.0;
  const double radius = 15'000.0;
  const double step = 0.05;
  const auto lines = read_route_lines_file(kData / "blob_routes.geojson");

  std::istringstream csv(out.str());
  std::string row;
  std::getline(csv, row);
  std::string detail;
  bool pass = true;
  for (const auto& line : lines) {
    if (!std::getline(csv, row)) return {false, "missing CSV row"};
    std::vector<std::string> f;
    std::stringstream ss(row);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    const int cli_violations = std::stoi(f.at(3));
    const double cli_pct = std::stod(f.at(4));

    const auto samples = sample_line(line, 10'000.0);
    int count = 0;
    for (const auto& s : samples) {
      int inside = 0;
      int total = 0;
      for (double lat = -65.0; lat <= -63.0 + 1e-9; lat += step) {
        for (double lon = 2.0; lon <= 6.0 + 1e-9; lon += step) {
          if (haversine(s, {lon, lat}) > radius) continue;
          ++total;
          inside += haversine({lon, lat}, centre) < blob;
        }
      }
      count += total > 0 && 100.0 * inside / total > 80.0;
    }
    const double pct = 100.0 * count / samples.size();
    const bool ok = std::abs(cli_violations - count) <= 1 && std::abs(cli_pct - pct) <= 100.0 / samples.size() + 1e-9;
    pass = pass && ok;
    detail += fmt("%s%s %.2f%% vs geometric %.2f%% (%d vs %d of %zu)", detail.empty() ? "" : "; ", f[0].c_str(),
                  cli_pct, pct, cli_violations, count, samples.size());
  }
  return {pass, detail};
}

Outcome compare_determinism() {
  const fs::path dir = fs::temp_directory_path() / "icenav_acceptance";
  fs::create_directories(dir);
  std::ostringstream out, err;
  cli::CompareOptions a{kData / "sea.json"};
  a.out = dir / "first.csv";
  cli::CompareOptions b = a;
  b.out = dir / "second.csv";
  if (cli::cmd_compare(a, out, err) != 0 || cli::cmd_compare(b, out, err) != 0) return {false, err.str()};
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string x = slurp(*a.out);
  const std::string y = slurp(*b.out);
  fs::remove_all(dir);
  const auto rows = std::count(x.begin(), x.end(), '\n');
  return {!x.empty() && x == y, fmt("two runs over the 20-pair suite: %ld lines, %s", rows,
                                    x == y ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"crossing solver oracle equivalence", solver_oracle},
      {"closed-form travel time", closed_form_travel_time},
      {"Snell refraction at zero current", snell},
      {"flat-limit consistency", flat_limit},
      {"Dijkstra optimality vs enumeration", dijkstra_optimality},
      {"smoothing monotonicity and convergence", smoothing_monotone},
      {"horseshoe fixtures and reverse-edge idempotence", horseshoe_fixtures},
      {"vessel model self-consistency", vessel_consistency},
      {"fuel fringe effect", fuel_fringe},
      {"validation command vs geometric count", validation_command},
      {"end-to-end compare determinism", compare_determinism},
  };
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    report(static_cast<int>(i + 1), criteria[i].first, o);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
