#pragma once

// Route checks against raw (not time-averaged) ice data.

#include <vector>

#include "icenav/geo.hpp"
#include "icenav/grid.hpp"

namespace icenav {

struct ValidationConfig {
  double spacing_m = 10'000.0;
  double radius_m = 15'000.0;
  double sic_threshold = 80.0;  // percent
  double earth_radius = geo::kEarthRadius;
};

/// Points every `spacing` metres along the polyline from its start, plus the
/// final point when it does not fall on the spacing.
std::vector<geo::GeoPoint> resample(const std::vector<geo::GeoPoint>& polyline, double spacing,
                                    double radius = geo::kEarthRadius);

/// Mean SIC over grid nodes within `radius` metres of p; NaN when none has data.
double mean_sic_within(const EnvGrid& grid, const geo::GeoPoint& p, double radius, double earth_radius = geo::kEarthRadius);

struct ViolationReport {
  std::size_t samples = 0;
  std::size_t evaluated = 0;  // samples with ice data in range
  std::size_t violations = 0;
  double percent = 0.0;       // violations / evaluated * 100
};

ViolationReport check_violations(const std::vector<geo::GeoPoint>& polyline, const EnvGrid& raw,
                                 const ValidationConfig& cfg = {});

}  // namespace icenav
