#include "icenav/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "icenav/error.hpp"

namespace icenav::cli {
namespace {

using nlohmann::json;

// Object reader that rejects unknown keys so typos surface as errors.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ParseError("config: missing field '" + name(key) + "'");
    return j_.at(key);
  }

  Section section(const std::string& key) { return Section(raw(key), name(key)); }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ParseError("config: field '" + name(key) + "' must be a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ParseError("config: field '" + name(key) + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ParseError("config: field '" + name(key) + "' must be true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ParseError("config: field '" + name(key) + "' must be a string");
    return v.get<std::string>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ParseError("config: unknown field '" + name(key) + "'");
    }
  }

  std::string name(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("config: '" + path_ + "' " + what); }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<std::filesystem::path> file_list(Section& s, const std::string& key, const std::filesystem::path& base) {
  const json& arr = s.raw(key);
  if (!arr.is_array() || arr.empty()) throw ParseError("config: field '" + s.name(key) + "' must be a non-empty array");
  std::vector<std::filesystem::path> out;
  for (const json& f : arr) {
    if (!f.is_string()) throw ParseError("config: field '" + s.name(key) + "' must hold file names");
    out.push_back(resolve(base, f.get<std::string>()));
  }
  return out;
}

std::optional<TimeWindow> time_window(Section& s) {
  if (!s.has("time_window")) return std::nullopt;
  Section w = s.section("time_window");
  TimeWindow tw{w.text("start"), w.text("end")};
  w.finish();
  if (tw.start > tw.end) throw ParseError("config: '" + s.name("time_window") + "' start is after end");
  return tw;
}

HullType hull_type(const std::string& name) {
  if (name == "slender") return HullType::slender;
  if (name == "blunt") return HullType::blunt;
  throw ParseError("config: field 'vessel.hull' must be 'slender' or 'blunt', got '" + name + "'");
}

}  // namespace

const Waypoint& RunConfig::waypoint(const std::string& name) const {
  for (const auto& w : waypoints) {
    if (w.name == name) return w;
  }
  throw ParseError("config: no waypoint named '" + name + "'");
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(source.string() + ": invalid JSON: " + e.what());
  }
  const std::filesystem::path base = source.parent_path();
  RunConfig cfg;
  cfg.source = source;
  Section root(doc, "");

  {
    Section g = root.section("grid");
    cfg.grid_files = file_list(g, "files", base);
    cfg.time_window = time_window(g);
    g.finish();
  }
  {
    Section r = root.section("region");
    cfg.region = {r.number("lon_min"), r.number("lon_max"), r.number("lat_min"), r.number("lat_max")};
    r.finish();
    if (cfg.region.empty()) throw ParseError("config: 'region' is empty");
  }

  if (root.has("vessel")) {
    Section v = root.section("vessel");
    VesselConfig& vc = cfg.vessel;
    vc.max_speed = v.number("max_speed_kn", vc.max_speed);
    vc.beam = v.number("beam_m", vc.beam);
    vc.ice_density = v.number("ice_density", vc.ice_density);
    if (v.has("hull")) vc.hull = hull_type(v.text("hull"));
    vc.max_ice_conc = v.number("max_ice_conc", vc.max_ice_conc);
    vc.ice_thickness = v.number("ice_thickness_m", vc.ice_thickness);
    vc.min_depth = v.number("min_depth_m", vc.min_depth);
    if (v.has("breaking")) {
      Section b = v.section("breaking");
      vc.breaking.speed = b.number("speed_kn", vc.breaking.speed);
      vc.breaking.thickness = b.number("thickness_m", vc.breaking.thickness);
      vc.breaking.concentration = b.number("concentration", vc.breaking.concentration);
      b.finish();
    }
    if (v.has("fuel")) {
      Section f = v.section("fuel");
      vc.fuel.a2 = f.number("speed_sq", vc.fuel.a2);
      vc.fuel.a1 = f.number("speed", vc.fuel.a1);
      vc.fuel.r2 = f.number("resistance_sq", vc.fuel.r2);
      vc.fuel.r1 = f.number("resistance", vc.fuel.r1);
      vc.fuel.base = f.number("base", vc.fuel.base);
      f.finish();
    }
    v.finish();
  }
  try {
    cfg.vessel.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("config: vessel: ") + e.what());
  }

  {
    Section m = root.section("mesh");
    cfg.initial_cell_size = m.number("initial_cell_size");
    SplitConfig& s = cfg.split;
    s.max_depth = m.integer("max_depth", s.max_depth);
    s.min_data_points = m.integer("min_data_points", s.min_data_points);
    s.sic_variance_threshold = m.number("sic_variance_threshold", s.sic_variance_threshold);
    if (m.has("sic_bounds_split")) {
      const json& b = m.raw("sic_bounds_split");
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
        throw ParseError("config: field 'mesh.sic_bounds_split' must be [lower, upper]");
      }
      s.sic_split_lower = b[0].get<double>();
      s.sic_split_upper = b[1].get<double>();
    }
    // Water shallower than the vessel needs counts as land unless set explicitly.
    s.land_depth_threshold = m.number("land_depth_threshold", -cfg.vessel.min_depth);
    if (m.has("file")) cfg.mesh_file = resolve(base, m.text("file"));
    m.finish();
    try {
      s.validate();
    } catch (const DomainError& e) {
      throw ParseError(std::string("config: mesh: ") + e.what());
    }
    if (!(cfg.initial_cell_size > 0.0)) throw ParseError("config: field 'mesh.initial_cell_size' must be positive");
  }

  if (root.has("smoothing")) {
    Section s = root.section("smoothing");
    SmoothingConfig& sc = cfg.smoothing;
    sc.epsilon = s.number("epsilon_m", sc.epsilon);
    sc.max_iterations = s.integer("max_iterations", sc.max_iterations);
    sc.convergence_tol_days = s.number("convergence_tol_days", sc.convergence_tol_days);
    sc.ice_step_limit = s.number("ice_step_limit", sc.ice_step_limit);
    sc.allow_horseshoe = s.boolean("horseshoe", sc.allow_horseshoe);
    sc.allow_diagonal = s.boolean("diagonal", sc.allow_diagonal);
    sc.refine = s.boolean("refine", sc.refine);
    s.finish();
    try {
      sc.validate();
    } catch (const DomainError& e) {
      throw ParseError(std::string("config: smoothing: ") + e.what());
    }
  }

  if (root.has("objective")) {
    try {
      cfg.objective = parse_objective(root.text("objective"));
    } catch (const Error& e) {
      throw ParseError(std::string("config: field 'objective': ") + e.what());
    }
  }

  if (root.has("waypoints")) {
    const json& arr = root.raw("waypoints");
    if (!arr.is_array()) throw ParseError("config: field 'waypoints' must be an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section w(arr[i], "waypoints[" + std::to_string(i) + "]");
      Waypoint wp{w.text("name"), {w.number("lon"), w.number("lat")}};
      w.finish();
      if (!geo::is_valid(wp.position)) throw ParseError("config: waypoint '" + wp.name + "' has invalid coordinates");
      if (!names.insert(wp.name).second) throw ParseError("config: waypoint name '" + wp.name + "' repeated");
      cfg.waypoints.push_back(wp);
    }
  }

  if (root.has("pairs")) {
    const json& arr = root.raw("pairs");
    if (!arr.is_array()) throw ParseError("config: field 'pairs' must be an array");
    for (const json& p : arr) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
        throw ParseError("config: each entry of 'pairs' must be [\"from\", \"to\"]");
      }
      cfg.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    }
    for (const auto& [a, b] : cfg.pairs) {
      cfg.waypoint(a);
      cfg.waypoint(b);
    }
  }

  if (root.has("validation")) {
    Section v = root.section("validation");
    cfg.validation.files = file_list(v, "files", base);
    cfg.validation.time_window = time_window(v);
    cfg.validation.config.spacing_m = 1000.0 * v.number("spacing_km", 10.0);
    cfg.validation.config.radius_m = 1000.0 * v.number("radius_km", 15.0);
    v.finish();
    if (!(cfg.validation.config.spacing_m > 0.0) || !(cfg.validation.config.radius_m > 0.0)) {
      throw ParseError("config: validation spacing_km and radius_km must be positive");
    }
  }
  cfg.validation.config.sic_threshold = cfg.vessel.max_ice_conc;

  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

std::vector<std::pair<std::string, std::string>> load_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pairs file '" + path.string() + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty() || line[0] == '#' || line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path.string() + ":" + std::to_string(n) + ": expected 'from,to'");
    }
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out.emplace_back(trim(line.substr(0, comma)), trim(line.substr(comma + 1)));
  }
  return out;
}

}  // namespace icenav::cli
