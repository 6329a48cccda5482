#pragma once

// Regularly gridded environmental input.
//
// File format (plain text, one or more variable blocks per file):
//
//   # comment
//   variable sic            one of: sic, depth, current_u, current_v
//   units percent
//   missing -9999           sentinel marking absent node values
//   lons 0 0.5 1.0          ascending, degrees east
//   lats -70 -69.5          ascending, degrees north
//   times 2020-01-01 ...    optional ISO dates; absent means one time step
//   data
//   v v v ...               times x lats x lons values, lon varying fastest
//   end
//
// All blocks contributing to one grid must share the lon/lat vectors.

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace icenav {

struct TimeWindow {
  std::string start;  // inclusive, YYYY-MM-DD
  std::string end;    // inclusive, YYYY-MM-DD

  bool contains(const std::string& date) const { return date >= start && date <= end; }
  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct Bounds {
  double lon_min = 0.0;
  double lon_max = 0.0;
  double lat_min = 0.0;
  double lat_max = 0.0;

  double width() const { return lon_max - lon_min; }
  double height() const { return lat_max - lat_min; }
  bool empty() const { return !(lon_max > lon_min && lat_max > lat_min); }
  bool contains(double lon, double lat) const {
    return lon >= lon_min && lon <= lon_max && lat >= lat_min && lat <= lat_max;
  }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct GridWindow {
  Bounds area;
  std::optional<TimeWindow> time;
};

/// One variable block as read from disk.
struct GridVariable {
  std::string name;
  std::string units;
  double missing = -9999.0;
  std::vector<double> lons;
  std::vector<double> lats;
  std::vector<std::string> times;  // empty: single time step
  std::vector<double> values;      // times x lats x lons, NaN where missing

  std::size_t steps() const { return times.empty() ? 1 : times.size(); }
};

/// Co-registered fields over one lat/lon window, time-averaged.
struct EnvGrid {
  std::vector<double> lons;  // ascending
  std::vector<double> lats;  // ascending
  // lats.size() x lons.size(), lon varying fastest; NaN marks missing data.
  std::vector<double> sic;        // percent
  std::vector<double> depth;      // metres, negative below sea level
  std::vector<double> current_u;  // m/s eastward
  std::vector<double> current_v;  // m/s northward
  std::optional<TimeWindow> time_window;

  std::size_t index(std::size_t ilat, std::size_t ilon) const { return ilat * lons.size() + ilon; }
  std::size_t node_count() const { return lons.size() * lats.size(); }
  Bounds extent() const;

  static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
  static bool is_missing(double v) { return v != v; }
};

std::vector<GridVariable> parse_grid(std::istream& in, const std::string& source = "<stream>");
std::vector<GridVariable> read_grid_file(const std::filesystem::path& path);
void write_grid(std::ostream& out, const std::vector<GridVariable>& vars);

/// Crops, co-registers and time-averages variables into an EnvGrid.
///
/// sic is required. Absent currents are zero; absent depth leaves every node
/// without bathymetry (treated as open ocean).
EnvGrid assemble_grid(const std::vector<GridVariable>& vars, const GridWindow& window);

EnvGrid load_grid(const std::vector<std::filesystem::path>& files, const GridWindow& window);

}  // namespace icenav
