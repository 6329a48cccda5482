#include "icenav/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "icenav/error.hpp"
#include "icenav/mesh_io.hpp"
#include "icenav/planner.hpp"
#include "icenav/route_io.hpp"
#include "icenav/smoother.hpp"
#include "icenav/validation.hpp"

namespace icenav::cli {
namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const NoRouteError& e) {
    err << "no route: " << e.what() << '\n';
    return kNoRoute;
  } catch (const PlacementError& e) {
    err << "no route: " << e.what() << '\n';
    return kNoRoute;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Everything a route needs, built once and shared read-only.
struct Planner {
  LoadedMesh mesh;
  std::vector<CellPerformance> perf;
  MeshView view;
  EdgeTable edges;

  explicit Planner(const RunConfig& cfg)
      : mesh(obtain_mesh(cfg)),
        perf(augment_mesh(mesh.graph.cells(), cfg.vessel)),
        view{mesh.graph, perf},
        edges(build_edges(view)) {
    spdlog::debug("mesh {}: {} cells, {} directed crossings", mesh.id, mesh.graph.size(), edges.size());
  }
};

struct Routed {
  Route dijkstra;
  std::optional<SmoothedRoute> smoothed;
};

Routed route_pair(const Planner& p, const RunConfig& cfg, const Waypoint& a, const Waypoint& b, Objective o,
                  bool smooth_it) {
  const DijkstraPath path = plan(p.edges, p.view, a.position, b.position, o);
  Routed r{path_route(path, p.view), std::nullopt};
  if (smooth_it) r.smoothed = smooth(path, p.view, cfg.smoothing);
  return r;
}

std::vector<RouteRecord> records_of(const Routed& r) {
  std::vector<RouteRecord> out{{"dijkstra", r.dijkstra, std::nullopt, std::nullopt}};
  if (r.smoothed) out.push_back({"smoothed", r.smoothed->route, r.smoothed->iterations, r.smoothed->converged});
  return out;
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

void print_totals(std::ostream& out, const std::string& label, const Route& r) {
  out << std::left << std::setw(9) << label << "time " << fixed(r.total_time_s / geo::kSecondsPerDay) << " days  fuel "
      << fixed(r.total_fuel_t, 3) << " t  distance " << fixed(r.total_distance_m / 1000.0, 3) << " km\n";
}

}  // namespace

NeighbourGraph build_graph(const RunConfig& cfg) {
  const EnvGrid grid = load_grid(cfg.grid_files, {cfg.region, cfg.time_window});
  auto cells = build_mesh(grid, cfg.split, cfg.region, cfg.initial_cell_size);
  const double max_ice = cfg.vessel.max_ice_conc;
  return NeighbourGraph(std::move(cells), [max_ice](const CellBox& c) { return is_blocked(c, max_ice); });
}

LoadedMesh obtain_mesh(const RunConfig& cfg) {
  const double max_ice = cfg.vessel.max_ice_conc;
  const auto blocked = [max_ice](const CellBox& c) { return is_blocked(c, max_ice); };
  if (cfg.mesh_file && std::filesystem::exists(*cfg.mesh_file)) {
    spdlog::debug("reading mesh {}", cfg.mesh_file->string());
    MeshDocument doc = read_mesh_file(*cfg.mesh_file);
    NeighbourGraph graph(std::move(doc.cells), blocked);
    std::string id = content_id(mesh_to_json(graph, doc.region));
    return {doc.region, std::move(graph), std::move(id)};
  }
  NeighbourGraph graph = build_graph(cfg);
  std::string id = content_id(mesh_to_json(graph, cfg.region));
  return {cfg.region, std::move(graph), std::move(id)};
}

int cmd_mesh_build(const MeshBuildOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(o.config);
    const auto target = o.out ? o.out : cfg.mesh_file;
    if (!target) throw ParseError("config: no mesh output; pass --out or set mesh.file");
    const NeighbourGraph graph = build_graph(cfg);
    const std::string text = mesh_to_json(graph, cfg.region);
    write_text(*target, text);
    std::size_t blocked = 0;
    int depth = 0;
    for (const auto& c : graph.cells()) {
      blocked += graph.blocked(c.id);
      depth = std::max(depth, c.depth_level);
    }
    out << "cells " << graph.size() << "  blocked " << fixed(100.0 * blocked / graph.size(), 2) << "%  max depth "
        << depth << '\n'
        << "mesh " << content_id(text) << " written to " << target->string() << '\n';
    return kOk;
  });
}

int cmd_route(const RouteOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(o.config);
    const Waypoint& a = cfg.waypoint(o.from);
    const Waypoint& b = cfg.waypoint(o.to);
    const Objective objective = o.objective.value_or(cfg.objective);
    const Planner p(cfg);
    const Routed r = route_pair(p, cfg, a, b, objective, o.smooth);

    const auto target = o.out.value_or(safe_name(o.from) + "_" + safe_name(o.to) + ".geojson");
    write_text(target, route_geojson(records_of(r), {o.from, o.to, objective, p.mesh.id}));
    if (o.trace && r.smoothed) {
      std::ostringstream csv;
      write_trace_csv(csv, r.smoothed->trace);
      write_text(*o.trace, csv.str());
    }

    out << o.from << " -> " << o.to << " (" << to_string(objective) << ")\n";
    print_totals(out, "dijkstra", r.dijkstra);
    if (r.smoothed) {
      print_totals(out, "smoothed", r.smoothed->route);
      out << "improvement " << fixed(improvement_percent(r.dijkstra.total_time_s, r.smoothed->route.total_time_s), 3)
          << "%  sweeps " << r.smoothed->iterations << '\n';
    }
    out << "route written to " << target.string() << '\n';
    if (r.smoothed && !r.smoothed->converged) {
      err << "warning: smoothing stopped after " << r.smoothed->iterations << " sweeps without converging\n";
      return kNotConverged;
    }
    return kOk;
  });
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(o.config);
    const auto files = o.raw.empty() ? cfg.validation.files : o.raw;
    if (files.empty()) throw ParseError("config: no raw grid; set validation.files or pass --raw");

    std::vector<std::filesystem::path> routes;
    if (std::filesystem::is_directory(o.routes)) {
      for (const auto& e : std::filesystem::directory_iterator(o.routes)) {
        if (e.path().extension() == ".geojson") routes.push_back(e.path());
      }
      std::sort(routes.begin(), routes.end());
      if (routes.empty()) throw IoError("no .geojson files in '" + o.routes.string() + "'");
    } else {
      routes.push_back(o.routes);
    }

    // The raw data must cover every sample's radius of influence.
    Bounds area = cfg.region;
    const double pad = 1.0 + cfg.validation.config.radius_m / geo::metres_per_degree();
    area = {area.lon_min - pad, area.lon_max + pad, std::max(-90.0, area.lat_min - pad),
            std::min(90.0, area.lat_max + pad)};
    const EnvGrid raw = load_grid(files, {area, cfg.validation.time_window});

    std::ostringstream csv;
    csv << "route,samples,evaluated,violations,percent\n";
    for (const auto& file : routes) {
      const auto lines = read_route_lines_file(file);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        const ViolationReport rep = check_violations(lines[i], raw, cfg.validation.config);
        csv << file.filename().string() << '#' << i << ',' << rep.samples << ',' << rep.evaluated << ','
            << rep.violations << ',' << fixed(rep.percent, 4) << '\n';
      }
    }
    if (o.out) {
      write_text(*o.out, csv.str());
    } else {
      out << csv.str();
    }
    return kOk;
  });
}

std::string comparison_csv(const std::vector<PairResult>& rows) {
  std::ostringstream os;
  os << "from,to,dijkstra_days,smoothed_days,improvement_pct,status\n";
  std::vector<const PairResult*> ok;
  for (const auto& r : rows) {
    os << r.from << ',' << r.to << ',';
    if (r.status == "no_route") {
      os << ",,";
    } else {
      os << fixed(r.dijkstra_days) << ',' << fixed(r.smoothed_days) << ',' << fixed(r.improvement_pct, 4);
    }
    os << ',' << r.status << '\n';
    if (r.status == "ok") ok.push_back(&r);
  }
  const auto stats = [&](auto field) {
    const double n = static_cast<double>(ok.size());
    double mean = 0.0;
    for (const auto* r : ok) mean += field(*r);
    mean = ok.empty() ? 0.0 : mean / n;
    double ss = 0.0;
    for (const auto* r : ok) ss += (field(*r) - mean) * (field(*r) - mean);
    return std::pair{mean, ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0};
  };
  const auto d = stats([](const PairResult& r) { return r.dijkstra_days; });
  const auto s = stats([](const PairResult& r) { return r.smoothed_days; });
  const auto i = stats([](const PairResult& r) { return r.improvement_pct; });
  os << "mean,," << fixed(d.first) << ',' << fixed(s.first) << ',' << fixed(i.first, 4) << ",n=" << ok.size() << '\n';
  os << "std,," << fixed(d.second) << ',' << fixed(s.second) << ',' << fixed(i.second, 4) << ",n=" << ok.size()
     << '\n';
  return os.str();
}

int cmd_compare(const CompareOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_config(o.config);
    const auto pairs = o.pairs ? load_pairs(*o.pairs) : cfg.pairs;
    if (pairs.empty()) throw ParseError("config: no waypoint pairs; set 'pairs' or pass --pairs");
    for (const auto& [a, b] : pairs) {
      cfg.waypoint(a);
      cfg.waypoint(b);
    }
    const Objective objective = o.objective.value_or(cfg.objective);
    if (o.routes_dir) std::filesystem::create_directories(*o.routes_dir);
    const Planner p(cfg);

    std::vector<PairResult> rows(pairs.size());
    std::vector<std::string> failures(pairs.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < pairs.size(); i = next++) {
        PairResult& row = rows[i];
        row.from = pairs[i].first;
        row.to = pairs[i].second;
        try {
          const Routed r = route_pair(p, cfg, cfg.waypoint(row.from), cfg.waypoint(row.to), objective, true);
          row.dijkstra_days = r.dijkstra.total_time_s / geo::kSecondsPerDay;
          row.smoothed_days = r.smoothed->route.total_time_s / geo::kSecondsPerDay;
          row.improvement_pct = improvement_percent(r.dijkstra.total_time_s, r.smoothed->route.total_time_s);
          row.status = r.smoothed->converged ? "ok" : "not_converged";
          if (o.routes_dir) {
            const auto name = std::to_string(i) + "_" + safe_name(row.from) + "_" + safe_name(row.to) + ".geojson";
            write_text(*o.routes_dir / name,
                       route_geojson(records_of(r), {row.from, row.to, objective, p.mesh.id}));
          }
        } catch (const NoRouteError& e) {
          row.status = "no_route";
          failures[i] = e.what();
        } catch (const PlacementError& e) {
          row.status = "no_route";
          failures[i] = e.what();
        } catch (const std::exception& e) {
          row.status = "error";
          failures[i] = e.what();
        }
      }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads =
        std::min<std::size_t>(pairs.size(), o.threads > 0 ? static_cast<std::size_t>(o.threads) : hw);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (!failures[i].empty()) err << rows[i].from << " -> " << rows[i].to << ": " << failures[i] << '\n';
    }
    const std::string csv = comparison_csv(rows);
    if (o.out) {
      write_text(*o.out, csv);
    } else {
      out << csv;
    }
    return kOk;
  });
}

int cmd_crossing_table(const CrossingTableOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (o.samples < 2) throw ParseError("--samples must be at least 2");
    const RunConfig cfg = load_config(o.config);
    const LoadedMesh mesh = obtain_mesh(cfg);
    const auto n = static_cast<int>(mesh.graph.size());
    if (o.src < 0 || o.src >= n || o.dst < 0 || o.dst >= n) {
      throw ParseError("cell ids must lie in [0, " + std::to_string(n) + ")");
    }
    const auto code = mesh.graph.touch(o.src, o.dst);
    if (!code || is_diagonal(*code)) {
      throw ParseError("cells " + std::to_string(o.src) + " and " + std::to_string(o.dst) + " share no edge");
    }
    const auto perf = augment_mesh(mesh.graph.cells(), cfg.vessel);
    const MeshView view{mesh.graph, perf};
    const PairFrame frame = normalise_pair(view, o.src, o.dst, *code);
    const auto [lo, hi] = crossing_bracket(frame.problem);

    std::ostringstream csv;
    csv << std::setprecision(12) << "y_m,lon,lat,f,df,time_s,on_segment\n";
    for (int i = 0; i < o.samples; ++i) {
      const double y = lo + (hi - lo) * i / (o.samples - 1);
      const CrossingEval e = evaluate_crossing(frame.problem, y);
      const geo::GeoPoint p = frame.point_at(y);
      csv << y << ',' << p.lon << ',' << p.lat << ',' << e.f << ',' << e.df << ',' << e.total() << ','
          << (y >= frame.seg_lo && y <= frame.seg_hi ? 1 : 0) << '\n';
    }
    if (o.out) {
      write_text(*o.out, csv.str());
    } else {
      out << csv.str();
    }
    return kOk;
  });
}

}  // namespace icenav::cli
