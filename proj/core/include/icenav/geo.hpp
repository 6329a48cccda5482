#pragma once

// Geodesy primitives shared by the mesh, solvers and route evaluation.
//
// Everything past the I/O boundary works in metres, seconds and m/s. Degrees
// appear only in coordinates; knots only inside the vessel fuel model.

#include <cmath>
#include <numbers>

namespace icenav::geo {

inline constexpr double kEarthRadius = 6'371'000.0;      // mean radius, metres
inline constexpr double kKnotsToMps = 1852.0 / 3600.0;   // 1 kn = 1.852 km/h
inline constexpr double kSecondsPerDay = 86'400.0;
inline constexpr double kGravity = 9.81;                 // m/s^2

struct Units {
  double earth_radius = kEarthRadius;
  double knots_to_mps = kKnotsToMps;
  double seconds_per_day = kSecondsPerDay;
};

struct GeoPoint {
  double lon = 0.0;  // degrees east
  double lat = 0.0;  // degrees north

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Planar vector in metres (or m/s) in a local east/north frame.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Metres spanned by one degree of arc on a sphere of the given radius.
inline constexpr double metres_per_degree(double radius = kEarthRadius) {
  return radius * std::numbers::pi / 180.0;
}

/// Wraps a longitude into [-180, 180).
double normalize_lon(double lon);

/// Signed longitude difference b - a, wrapped into (-180, 180].
double lon_delta(double a, double b);

/// True when lat is in [-90, 90] and lon is finite.
bool is_valid(const GeoPoint& p);

/// Builds a point with the longitude wrapped; throws DomainError on a bad latitude.
GeoPoint make_point(double lon, double lat);

/// Width scale factor of a parallel: cos(lat).
double lat_scale(double lat_deg);

/// Flat-earth displacement from a to b in metres, east component scaled by cos(ref_lat).
Vec2 equirect_offset(const GeoPoint& a, const GeoPoint& b, double ref_lat,
                     double radius = kEarthRadius);

/// Pythagorean distance under the equirectangular approximation.
double equirect_distance(const GeoPoint& a, const GeoPoint& b, double ref_lat,
                         double radius = kEarthRadius);

}  // namespace icenav::geo
