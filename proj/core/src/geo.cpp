#include "icenav/geo.hpp"

#include <string>

#include "icenav/error.hpp"

namespace icenav::geo {

double normalize_lon(double lon) {
  double wrapped = std::fmod(lon + 180.0, 360.0);
  if (wrapped < 0.0) wrapped += 360.0;
  return wrapped - 180.0;
}

double lon_delta(double a, double b) {
  double d = std::fmod(b - a, 360.0);
  if (d <= -180.0) d += 360.0;
  if (d > 180.0) d -= 360.0;
  return d;
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lon) && std::isfinite(p.lat) && p.lat >= -90.0 && p.lat <= 90.0;
}

GeoPoint make_point(double lon, double lat) {
  GeoPoint p{normalize_lon(lon), lat};
  if (!is_valid(p)) {
    throw DomainError("invalid coordinate (lon=" + std::to_string(lon) +
                      ", lat=" + std::to_string(lat) + ")");
  }
  return p;
}

double lat_scale(double lat_deg) {
  // cos(90 deg) in floating point is ~6e-17; the pole is exactly degenerate.
  if (std::abs(lat_deg) == 90.0) return 0.0;
  return std::cos(deg_to_rad(lat_deg));
}

Vec2 equirect_offset(const GeoPoint& a, const GeoPoint& b, double ref_lat, double radius) {
  const double m = metres_per_degree(radius);
  return {lon_delta(a.lon, b.lon) * m * lat_scale(ref_lat), (b.lat - a.lat) * m};
}

double equirect_distance(const GeoPoint& a, const GeoPoint& b, double ref_lat, double radius) {
  return equirect_offset(a, b, ref_lat, radius).norm();
}

}  // namespace icenav::geo
