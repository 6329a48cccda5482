#include "icenav/validation.hpp"

#include <algorithm>
#include <cmath>

#include "icenav/error.hpp"

namespace icenav {

std::vector<geo::GeoPoint> resample(const std::vector<geo::GeoPoint>& polyline, double spacing, double radius) {
  if (!(spacing > 0.0)) throw DomainError("resample spacing must be positive");
  std::vector<geo::GeoPoint> out;
  if (polyline.empty()) return out;
  out.push_back(polyline.front());
  double next = spacing;  // distance of the next sample from the start
  double travelled = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const geo::GeoPoint& a = polyline[i];
    const geo::GeoPoint& b = polyline[i + 1];
    const double len = geo::equirect_distance(a, b, 0.5 * (a.lat + b.lat), radius);
    while (len > 0.0 && next < travelled + len) {
      const double f = (next - travelled) / len;
      out.push_back({a.lon + f * geo::lon_delta(a.lon, b.lon), a.lat + f * (b.lat - a.lat)});
      next += spacing;
    }
    travelled += len;
  }
  const geo::GeoPoint& last = polyline.back();
  if (!(out.back() == last)) out.push_back(last);
  return out;
}

double mean_sic_within(const EnvGrid& grid, const geo::GeoPoint& p, double radius, double earth_radius) {
  const double m = geo::metres_per_degree(earth_radius);
  const double dlat = radius / m;
  const double scale = geo::lat_scale(p.lat);
  const double dlon = scale > 1e-12 ? std::min(180.0, radius / (m * scale)) : 180.0;
  const auto lat0 = std::lower_bound(grid.lats.begin(), grid.lats.end(), p.lat - dlat) - grid.lats.begin();
  const auto lat1 = std::upper_bound(grid.lats.begin(), grid.lats.end(), p.lat + dlat) - grid.lats.begin();
  double sum = 0.0;
  std::size_t n = 0;
  for (auto j = lat0; j < lat1; ++j) {
    for (std::size_t i = 0; i < grid.lons.size(); ++i) {
      if (std::abs(geo::lon_delta(p.lon, grid.lons[i])) > dlon) continue;
      const geo::GeoPoint node{grid.lons[i], grid.lats[static_cast<std::size_t>(j)]};
      if (geo::equirect_distance(p, node, p.lat, earth_radius) > radius) continue;
      const double v = grid.sic[grid.index(static_cast<std::size_t>(j), i)];
      if (EnvGrid::is_missing(v)) continue;
      sum += v;
      ++n;
    }
  }
  return n == 0 ? EnvGrid::kMissing : sum / static_cast<double>(n);
}

ViolationReport check_violations(const std::vector<geo::GeoPoint>& polyline, const EnvGrid& raw,
                                 const ValidationConfig& cfg) {
  ViolationReport r;
  for (const auto& p : resample(polyline, cfg.spacing_m, cfg.earth_radius)) {
    ++r.samples;
    const double sic = mean_sic_within(raw, p, cfg.radius_m, cfg.earth_radius);
    if (EnvGrid::is_missing(sic)) continue;
    ++r.evaluated;
    if (sic > cfg.sic_threshold) ++r.violations;
  }
  r.percent = r.evaluated == 0 ? 0.0 : 100.0 * static_cast<double>(r.violations) / static_cast<double>(r.evaluated);
  return r;
}

}  // namespace icenav
