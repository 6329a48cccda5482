#include "icenav/route_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "icenav/error.hpp"

namespace icenav {

using nlohmann::json;

namespace {

json totals(const Route& r) {
  return {{"time_s", r.total_time_s},
          {"time_days", r.total_time_s / geo::kSecondsPerDay},
          {"fuel_t", r.total_fuel_t},
          {"distance_m", r.total_distance_m}};
}

}  // namespace

double improvement_percent(double before, double after) {
  return before > 0.0 ? 100.0 * (before - after) / before : 0.0;
}

std::string route_geojson(const std::vector<RouteRecord>& records, const RouteSummary& summary) {
  json features = json::array();
  json sums = {{"from", summary.from},
               {"to", summary.to},
               {"objective", to_string(summary.objective)},
               {"mesh_id", summary.mesh_id}};
  const Route* dijkstra = nullptr;
  const Route* smoothed = nullptr;
  for (const RouteRecord& rec : records) {
    json coords = json::array();
    for (const auto& p : rec.route.points) coords.push_back({p.lon, p.lat});
    json legs = json::array();
    for (const auto& l : rec.route.legs) {
      legs.push_back({{"cell", l.cell}, {"time_s", l.time_s}, {"fuel_t", l.fuel_t}, {"distance_m", l.distance_m}});
    }
    json props = {{"kind", rec.kind},
                  {"from", summary.from},
                  {"to", summary.to},
                  {"objective", to_string(summary.objective)},
                  {"mesh_id", summary.mesh_id},
                  {"totals", totals(rec.route)},
                  {"legs", legs}};
    if (rec.iterations) props["iterations"] = *rec.iterations;
    if (rec.converged) props["converged"] = *rec.converged;
    features.push_back(
        {{"type", "Feature"}, {"geometry", {{"type", "LineString"}, {"coordinates", coords}}}, {"properties", props}});
    sums[rec.kind] = totals(rec.route);
    if (rec.kind == "dijkstra") dijkstra = &rec.route;
    if (rec.kind == "smoothed") smoothed = &rec.route;
  }
  if (dijkstra && smoothed) {
    sums["improvement_pct"] = improvement_percent(dijkstra->total_time_s, smoothed->total_time_s);
  }
  const json doc = {{"type", "FeatureCollection"}, {"summary", sums}, {"features", features}};
  return doc.dump(1) + "\n";
}

std::vector<std::vector<geo::GeoPoint>> read_route_lines(std::istream& in, const std::string& source) {
  std::vector<std::vector<geo::GeoPoint>> lines;
  try {
    const json doc = json::parse(in);
    const auto add = [&](const json& geometry) {
      if (geometry.value("type", "") != "LineString") return;
      std::vector<geo::GeoPoint> line;
      for (const json& c : geometry.at("coordinates")) line.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
      lines.push_back(std::move(line));
    };
    const std::string type = doc.value("type", "");
    if (type == "FeatureCollection") {
      for (const json& f : doc.at("features")) add(f.at("geometry"));
    } else if (type == "Feature") {
      add(doc.at("geometry"));
    } else {
      add(doc);
    }
  } catch (const json::exception& e) {
    throw ParseError(source + ": invalid GeoJSON: " + e.what());
  }
  return lines;
}

std::vector<std::vector<geo::GeoPoint>> read_route_lines_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open route file '" + path.string() + "'");
  return read_route_lines(in, path.string());
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "iteration,total_time_s,node_count\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& r : trace) out << r.iteration << ',' << r.total_time_s << ',' << r.node_count << '\n';
}

}  // namespace icenav
