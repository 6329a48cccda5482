#include "icenav/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "icenav/error.hpp"

namespace icenav {
namespace {

const char* const kKnownVariables[] = {"sic", "depth", "current_u", "current_v"};

double parse_number(const std::string& token, const std::string& field, const std::string& source) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(source + ": field '" + field + "': bad number '" + token + "'");
  }
  return value;
}

std::vector<double> parse_numbers(std::istringstream& rest, const std::string& field,
                                  const std::string& source) {
  std::vector<double> out;
  std::string token;
  while (rest >> token) out.push_back(parse_number(token, field, source));
  return out;
}

bool ascending(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

void finish_block(GridVariable& var, std::vector<std::string>& raw, const std::string& source) {
  const auto field = [&](const std::string& f) { return source + ": variable '" + var.name + "': field '" + f + "'"; };
  if (std::find(std::begin(kKnownVariables), std::end(kKnownVariables), var.name) == std::end(kKnownVariables)) {
    throw ParseError(source + ": field 'variable': unknown variable '" + var.name + "'");
  }
  if (var.lons.empty()) throw ParseError(field("lons") + " missing or empty");
  if (var.lats.empty()) throw ParseError(field("lats") + " missing or empty");
  if (!ascending(var.lons)) throw ParseError(field("lons") + " must be strictly ascending");
  if (!ascending(var.lats)) throw ParseError(field("lats") + " must be strictly ascending");
  const std::size_t expected = var.steps() * var.lons.size() * var.lats.size();
  if (raw.size() != expected) {
    throw ParseError(field("data") + ": expected " + std::to_string(expected) + " values, found " +
                     std::to_string(raw.size()));
  }
  var.values.reserve(expected);
  for (const auto& token : raw) {
    const double v = parse_number(token, "data", source);
    if (v == var.missing) {
      var.values.push_back(EnvGrid::kMissing);
      continue;
    }
    if (var.name == "sic" && (v < 0.0 || v > 100.0)) {
      throw ParseError(field("data") + ": sic value " + token + " outside [0, 100]");
    }
    var.values.push_back(v);
  }
  raw.clear();
}

}  // namespace

Bounds EnvGrid::extent() const {
  if (lons.empty() || lats.empty()) return {};
  return {lons.front(), lons.back(), lats.front(), lats.back()};
}

std::vector<GridVariable> parse_grid(std::istream& in, const std::string& source) {
  std::vector<GridVariable> vars;
  std::optional<GridVariable> current;
  std::vector<std::string> raw;
  bool in_data = false;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string key;
    if (!(tokens >> key)) continue;

    if (in_data) {
      if (key == "end") {
        finish_block(*current, raw, source);
        vars.push_back(std::move(*current));
        current.reset();
        in_data = false;
        continue;
      }
      raw.push_back(key);
      std::string token;
      while (tokens >> token) {
        if (token == "end") throw ParseError(source + ":" + std::to_string(line_no) + ": 'end' must be on its own line");
        raw.push_back(token);
      }
      continue;
    }

    if (key == "variable") {
      if (current) throw ParseError(source + ":" + std::to_string(line_no) + ": field 'data' missing before next variable");
      current.emplace();
      if (!(tokens >> current->name)) throw ParseError(source + ":" + std::to_string(line_no) + ": field 'variable' has no name");
      continue;
    }
    if (!current) throw ParseError(source + ":" + std::to_string(line_no) + ": field '" + key + "' outside a variable block");

    if (key == "units") {
      tokens >> current->units;
    } else if (key == "missing") {
      std::string token;
      if (!(tokens >> token)) throw ParseError(source + ": field 'missing' has no value");
      current->missing = parse_number(token, "missing", source);
    } else if (key == "lons") {
      current->lons = parse_numbers(tokens, "lons", source);
    } else if (key == "lats") {
      current->lats = parse_numbers(tokens, "lats", source);
    } else if (key == "times") {
      std::string token;
      while (tokens >> token) current->times.push_back(token);
    } else if (key == "data") {
      in_data = true;
    } else {
      throw ParseError(source + ":" + std::to_string(line_no) + ": unknown field '" + key + "'");
    }
  }
  if (current) throw ParseError(source + ": variable '" + current->name + "': field 'data' not terminated by 'end'");
  if (vars.empty()) throw ParseError(source + ": no variable blocks");
  return vars;
}

std::vector<GridVariable> read_grid_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open grid file '" + path.string() + "'");
  return parse_grid(in, path.string());
}

void write_grid(std::ostream& out, const std::vector<GridVariable>& vars) {
  const auto old_precision = out.precision(17);
  const auto join = [&](const auto& values) {
    for (const auto& v : values) out << ' ' << v;
    out << '\n';
  };
  for (const auto& var : vars) {
    out << "variable " << var.name << '\n';
    if (!var.units.empty()) out << "units " << var.units << '\n';
    out << "missing " << var.missing << '\n';
    out << "lons";
    join(var.lons);
    out << "lats";
    join(var.lats);
    if (!var.times.empty()) {
      out << "times";
      join(var.times);
    }
    out << "data\n";
    const std::size_t row = var.lons.size();
    for (std::size_t i = 0; i < var.values.size(); ++i) {
      const double v = var.values[i];
      out << (EnvGrid::is_missing(v) ? var.missing : v) << ((i + 1) % row == 0 ? '\n' : ' ');
    }
    out << "end\n";
  }
  out.precision(old_precision);
}

EnvGrid assemble_grid(const std::vector<GridVariable>& vars, const GridWindow& window) {
  if (window.area.empty()) throw DomainError("grid window is empty");
  if (window.time && window.time->start > window.time->end) throw DomainError("time window start is after its end");

  std::map<std::string, const GridVariable*> by_name;
  for (const auto& v : vars) {
    if (!by_name.emplace(v.name, &v).second) throw ParseError("variable '" + v.name + "' supplied twice");
  }
  auto sic_it = by_name.find("sic");
  if (sic_it == by_name.end()) throw ParseError("required variable 'sic' not supplied");
  const GridVariable& ref = *sic_it->second;
  for (const auto& [name, var] : by_name) {
    if (var->lons != ref.lons || var->lats != ref.lats) {
      throw ParseError("variable '" + name + "': lon/lat vectors differ from 'sic'");
    }
  }

  // Index ranges of nodes inside the window.
  const auto range = [](const std::vector<double>& axis, double lo, double hi) {
    auto first = std::lower_bound(axis.begin(), axis.end(), lo);
    auto last = std::upper_bound(axis.begin(), axis.end(), hi);
    return std::pair<std::size_t, std::size_t>(first - axis.begin(), last - axis.begin());
  };
  const auto [ilon0, ilon1] = range(ref.lons, window.area.lon_min, window.area.lon_max);
  const auto [ilat0, ilat1] = range(ref.lats, window.area.lat_min, window.area.lat_max);
  if (ilon0 >= ilon1 || ilat0 >= ilat1) {
    throw DomainError("grid window does not intersect the grid extent");
  }

  EnvGrid grid;
  grid.lons.assign(ref.lons.begin() + ilon0, ref.lons.begin() + ilon1);
  grid.lats.assign(ref.lats.begin() + ilat0, ref.lats.begin() + ilat1);
  grid.time_window = window.time;
  const std::size_t n = grid.node_count();
  const std::size_t nlon_src = ref.lons.size();
  const std::size_t plane = nlon_src * ref.lats.size();

  const auto average = [&](const GridVariable& var) {
    std::vector<std::size_t> steps;
    for (std::size_t t = 0; t < var.steps(); ++t) {
      if (var.times.empty() || !window.time || window.time->contains(var.times[t])) steps.push_back(t);
    }
    if (steps.empty()) {
      throw DomainError("variable '" + var.name + "': no time steps inside window " + window.time->start + ".." +
                        window.time->end);
    }
    std::vector<double> out(n, EnvGrid::kMissing);
    for (std::size_t j = ilat0; j < ilat1; ++j) {
      for (std::size_t i = ilon0; i < ilon1; ++i) {
        double sum = 0.0;
        int count = 0;
        for (std::size_t t : steps) {
          const double v = var.values[t * plane + j * nlon_src + i];
          if (EnvGrid::is_missing(v)) continue;
          sum += v;
          ++count;
        }
        if (count > 0) out[grid.index(j - ilat0, i - ilon0)] = sum / count;
      }
    }
    return out;
  };

  grid.sic = average(ref);
  const auto field_or = [&](const char* name, double fill) {
    auto it = by_name.find(name);
    return it == by_name.end() ? std::vector<double>(n, fill) : average(*it->second);
  };
  grid.depth = field_or("depth", EnvGrid::kMissing);
  grid.current_u = field_or("current_u", 0.0);
  grid.current_v = field_or("current_v", 0.0);
  return grid;
}

EnvGrid load_grid(const std::vector<std::filesystem::path>& files, const GridWindow& window) {
  if (files.empty()) throw ParseError("no grid files given");
  std::vector<GridVariable> vars;
  for (const auto& f : files) {
    auto more = read_grid_file(f);
    std::move(more.begin(), more.end(), std::back_inserter(vars));
  }
  return assemble_grid(vars, window);
}

}  // namespace icenav
