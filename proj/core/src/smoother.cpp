#include "icenav/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "icenav/error.hpp"

namespace icenav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbe = 1e-6;        // degrees; offset used to find cells beside a boundary
constexpr double kOnLine = 1e-9;       // degrees; a point this close lies on a boundary line
constexpr double kInitMargin = 1e-3;   // fraction of a segment kept clear of its corners
constexpr int kRelaxPasses = 50;

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double leg_time(const MeshView& mesh, const geo::GeoPoint& p, const geo::GeoPoint& q, int cell) {
  const LegCost c = leg_cost(p, q, cell, mesh);
  return c.feasible ? c.time_s : kInf;
}

double local_time(const MeshView& mesh, const SmoothingState& s, std::size_t k) {
  return leg_time(mesh, s.points[k - 1], s.points[k], s.cells[k - 1]) +
         leg_time(mesh, s.points[k], s.points[k + 1], s.cells[k]);
}

double total_time(const MeshView& mesh, const SmoothingState& s) {
  double t = 0.0;
  for (std::size_t k = 0; k < s.cells.size(); ++k) t += leg_time(mesh, s.points[k], s.points[k + 1], s.cells[k]);
  return t;
}

double tiny(double t) { return 1e-12 * std::max(1.0, t); }

// Moves crossing k to p only if the two adjacent legs do not get slower.
bool try_move(const MeshView& mesh, SmoothingState& s, std::size_t k, const geo::GeoPoint& p) {
  if (s.points[k] == p) return false;
  const double before = local_time(mesh, s, k);
  const geo::GeoPoint old = s.points[k];
  s.points[k] = p;
  if (local_time(mesh, s, k) <= before) return true;
  s.points[k] = old;
  return false;
}

geo::GeoPoint across_along(const BoundarySegment& seg, double across, double along) {
  return seg.meridian ? geo::GeoPoint{across, along} : geo::GeoPoint{along, across};
}

std::pair<double, double> along_extent(const BoundarySegment& seg, const Bounds& b) {
  return seg.meridian ? std::pair{b.lat_min, b.lat_max} : std::pair{b.lon_min, b.lon_max};
}

// Cells that carry the route around the end of the shared segment.
std::vector<int> resolve_horseshoe(const MeshView& mesh, const BoundarySegment& seg, int src, int dst, bool low) {
  const double dir = sign(seg.across(mesh.cell(dst).centre) - seg.fixed);
  const double edge = low ? seg.lo : seg.hi;
  const double beyond = low ? edge - kProbe : edge + kProbe;
  const auto [a_lo, a_hi] = along_extent(seg, mesh.cell(src).bounds());
  const auto [b_lo, b_hi] = along_extent(seg, mesh.cell(dst).bounds());
  const bool a_extends = low ? a_lo < edge - kOnLine : a_hi > edge + kOnLine;
  const bool b_extends = low ? b_lo < edge - kOnLine : b_hi > edge + kOnLine;

  const auto beside_src = mesh.graph.locate(across_along(seg, seg.fixed - dir * kProbe, beyond));
  const auto beside_dst = mesh.graph.locate(across_along(seg, seg.fixed + dir * kProbe, beyond));
  std::vector<int> seq{src};
  if (a_extends) {
    if (!beside_dst) return {};
    seq.push_back(*beside_dst);
  } else if (b_extends) {
    if (!beside_src) return {};
    seq.push_back(*beside_src);
  } else {
    if (!beside_src || !beside_dst) return {};
    seq.push_back(*beside_src);
    if (*beside_dst != *beside_src) seq.push_back(*beside_dst);
  }
  seq.push_back(dst);
  return seq;
}

// Inserted cells must be open, within the ice step, and joined by graph edges.
bool sequence_allowed(const MeshView& mesh, const std::vector<int>& seq, const SmoothingConfig& cfg) {
  if (seq.size() < 3) return false;
  const std::vector<int> inserted(seq.begin() + 1, seq.end() - 1);
  for (int c : inserted) {
    if (c == seq.front() || c == seq.back()) return false;
  }
  if (!ice_step_allows(mesh, seq.front(), seq.back(), inserted, cfg)) return false;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!mesh.graph.edge_code(seq[i], seq[i + 1])) return false;
  }
  return true;
}

// Along-boundary coordinate where segment p-q crosses the segment's line.
std::optional<double> line_hit(const BoundarySegment& seg, const geo::GeoPoint& p, const geo::GeoPoint& q) {
  const double ap = seg.across(p);
  const double aq = seg.across(q);
  if (ap == aq) return std::nullopt;
  const double t = (seg.fixed - ap) / (aq - ap);
  if (t < -1e-12 || t > 1.0 + 1e-12) return std::nullopt;
  return seg.along(p) + t * (seg.along(q) - seg.along(p));
}

geo::GeoPoint initial_crossing(const BoundarySegment& seg, const std::vector<geo::GeoPoint>& guide) {
  std::optional<double> best;
  double best_gap = kInf;
  for (std::size_t i = 0; i + 1 < guide.size(); ++i) {
    if (auto h = line_hit(seg, guide[i], guide[i + 1])) {
      const double gap = std::max({0.0, seg.lo - *h, *h - seg.hi});
      if (gap < best_gap) {
        best_gap = gap;
        best = h;
      }
    }
  }
  const double margin = kInitMargin * (seg.hi - seg.lo);
  const double along = best.value_or(0.5 * (seg.lo + seg.hi));
  return seg.at(std::clamp(along, seg.lo + margin, seg.hi - margin));
}

// One in-place solver move on an orthogonal crossing; overshoots are clipped.
bool relax_crossing(const MeshView& mesh, SmoothingState& s, std::size_t k, const SmoothingConfig& cfg) {
  const int a = s.cells[k - 1];
  const int b = s.cells[k];
  const auto code = mesh.graph.touch(a, b);
  if (!code || is_diagonal(*code)) return false;
  const StepResult r = is_horizontal(*code) ? smooth_step_horizontal(mesh, s.points[k - 1], s.points[k + 1], a, b, cfg)
                                            : smooth_step_vertical(mesh, s.points[k - 1], s.points[k + 1], a, b, cfg);
  if (r.outcome == StepOutcome::infeasible) return false;
  return try_move(mesh, s, k, r.crossing);
}

// Joint projected Newton step over all orthogonal crossings. Crossings only
// interact through the leg between them, so the Hessian is tridiagonal.
// Derivatives are central differences of the route metric.
bool newton_step(const MeshView& mesh, SmoothingState& s) {
  struct Var {
    std::size_t k;
    BoundarySegment seg;
    double x, h, g, hkk, hnext = 0.0;
    bool free = true;
  };
  std::vector<Var> vars;
  for (std::size_t k = 1; k + 1 < s.points.size(); ++k) {
    const auto code = mesh.graph.touch(s.cells[k - 1], s.cells[k]);
    if (!code || is_diagonal(*code)) continue;
    const BoundarySegment seg = shared_segment(mesh, s.cells[k - 1], s.cells[k]);
    vars.push_back({k, seg, seg.along(s.points[k]), 1e-5 * (seg.hi - seg.lo), 0.0, 0.0});
  }
  if (vars.empty()) return false;
  const auto at = [&](const Var& v, double x) { return v.seg.at(x); };
  const auto shifted_local = [&](const Var& v, double x) {
    const geo::GeoPoint keep = s.points[v.k];
    s.points[v.k] = at(v, x);
    const double t = local_time(mesh, s, v.k);
    s.points[v.k] = keep;
    return t;
  };
  for (std::size_t i = 0; i < vars.size(); ++i) {
    Var& v = vars[i];
    const double f0 = local_time(mesh, s, v.k);
    const double fp = shifted_local(v, v.x + v.h);
    const double fm = shifted_local(v, v.x - v.h);
    v.g = (fp - fm) / (2.0 * v.h);
    v.hkk = (fp - 2.0 * f0 + fm) / (v.h * v.h);
    if (i + 1 < vars.size() && vars[i + 1].k == v.k + 1) {
      const Var& w = vars[i + 1];
      const auto leg = [&](double xa, double xb) { return leg_time(mesh, at(v, xa), at(w, xb), s.cells[v.k]); };
      v.hnext = (leg(v.x + v.h, w.x + w.h) - leg(v.x + v.h, w.x - w.h) - leg(v.x - v.h, w.x + w.h) +
                 leg(v.x - v.h, w.x - w.h)) /
                (4.0 * v.h * w.h);
    }
    // Bound constraints holding the crossing at a segment end.
    if ((v.x <= v.seg.lo && v.g > 0.0) || (v.x >= v.seg.hi && v.g < 0.0)) v.free = false;
    if (!std::isfinite(v.g) || !std::isfinite(v.hkk)) return false;
  }

  // Tridiagonal solve H d = -g over free variables, damped until positive definite.
  const std::size_t n = vars.size();
  std::vector<double> step(n, 0.0);
  bool solved = false;
  for (double damping = 0.0; !solved && damping < 1e12; damping = damping == 0.0 ? 1e-6 : damping * 10.0) {
    std::vector<double> diag(n), rhs(n), upper(n, 0.0);
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      const Var& v = vars[i];
      if (!v.free) {
        diag[i] = 1.0;
        rhs[i] = 0.0;
        continue;
      }
      diag[i] = v.hkk + damping * std::abs(v.hkk) + (damping > 0.0 ? damping : 0.0);
      rhs[i] = -v.g;
      if (i + 1 < n && vars[i + 1].free) upper[i] = v.hnext;
    }
    // Thomas algorithm; a non-positive pivot means H is not positive definite.
    for (std::size_t i = 1; i < n && ok; ++i) {
      if (!(diag[i - 1] > 0.0)) ok = false;
      if (!ok) break;
      const double m = upper[i - 1] / diag[i - 1];
      diag[i] -= m * upper[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    if (!ok || !(diag[n - 1] > 0.0)) continue;
    step[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) step[i] = (rhs[i] - upper[i] * step[i + 1]) / diag[i];
    solved = true;
  }
  if (!solved) return false;

  const double t0 = total_time(mesh, s);
  const std::vector<geo::GeoPoint> keep = s.points;
  for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
    for (std::size_t i = 0; i < n; ++i) {
      const Var& v = vars[i];
      s.points[v.k] = at(v, std::clamp(v.x + alpha * step[i], v.seg.lo, v.seg.hi));
    }
    if (total_time(mesh, s) < t0) return true;
    s.points = keep;
  }
  return false;
}

// Minimises the route metric over the crossings of orthogonal pairs, each
// kept on its shared segment: joint Newton steps, then per-crossing Brent.
void refine(const MeshView& mesh, SmoothingState& s) {
  for (int it = 0; it < 100; ++it) {
    const double before = total_time(mesh, s);
    if (!newton_step(mesh, s)) break;
    if (before - total_time(mesh, s) <= 1e-14 * before) break;
  }
  double t = total_time(mesh, s);
  for (int sweep = 0; sweep < 100; ++sweep) {
    for (std::size_t k = 1; k + 1 < s.points.size(); ++k) {
      const auto code = mesh.graph.touch(s.cells[k - 1], s.cells[k]);
      if (!code || is_diagonal(*code)) continue;
      const BoundarySegment seg = shared_segment(mesh, s.cells[k - 1], s.cells[k]);
      SmoothingState& st = s;
      const auto f = [&](double along) {
        const geo::GeoPoint keep = st.points[k];
        st.points[k] = seg.at(along);
        const double v = local_time(mesh, st, k);
        st.points[k] = keep;
        return v;
      };
      auto best = boost::math::tools::brent_find_minima(f, seg.lo, seg.hi, 40);
      // Brent never samples the ends, where clipped crossings sit.
      for (const double end : {seg.lo, seg.hi}) {
        if (const double v = f(end); v < best.second) best = {end, v};
      }
      try_move(mesh, s, k, seg.at(best.first));
    }
    const double nt = total_time(mesh, s);
    const bool settled = t - nt <= 1e-13 * std::max(1.0, nt);
    t = nt;
    if (settled) break;
  }
}

double relax(const MeshView& mesh, SmoothingState& s, const SmoothingConfig& cfg) {
  double t = total_time(mesh, s);
  for (int pass = 0; pass < kRelaxPasses; ++pass) {
    for (std::size_t k = 1; k + 1 < s.points.size(); ++k) relax_crossing(mesh, s, k, cfg);
    const double nt = total_time(mesh, s);
    const bool settled = t - nt <= 1e-9 * std::max(1.0, nt);
    t = nt;
    if (settled) break;
  }
  refine(mesh, s);
  return total_time(mesh, s);
}

// Route from entry to exit through `seq`, crossings seeded from the guide polyline.
SmoothingState trial_route(const MeshView& mesh, const geo::GeoPoint& entry, const geo::GeoPoint& exit,
                           const std::vector<int>& seq, const std::vector<geo::GeoPoint>& guide) {
  SmoothingState t;
  t.cells = seq;
  t.points.push_back(entry);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    t.points.push_back(initial_crossing(shared_segment(mesh, seq[i], seq[i + 1]), guide));
  }
  t.points.push_back(exit);
  return t;
}

// Replaces crossing k with the interior of `trial`.
void splice(SmoothingState& s, std::size_t k, const SmoothingState& trial) {
  s.points.erase(s.points.begin() + static_cast<std::ptrdiff_t>(k));
  s.points.insert(s.points.begin() + static_cast<std::ptrdiff_t>(k), trial.points.begin() + 1, trial.points.end() - 1);
  s.cells.insert(s.cells.begin() + static_cast<std::ptrdiff_t>(k), trial.cells.begin() + 1, trial.cells.end() - 1);
}

StepResult classify(const MeshView& mesh, const BoundarySegment& seg, int src, int dst, double along) {
  StepResult r;
  r.unconstrained = seg.at(along);
  if (along >= seg.lo - kOnLine && along <= seg.hi + kOnLine) {
    r.outcome = StepOutcome::inside;
    r.crossing = seg.at(std::clamp(along, seg.lo, seg.hi));
    return r;
  }
  r.outcome = StepOutcome::overshoot;
  r.low = along < seg.lo;
  r.crossing = seg.at(r.low ? seg.lo : seg.hi);
  r.horseshoe = resolve_horseshoe(mesh, seg, src, dst, r.low);
  return r;
}

StepResult infeasible_step(const BoundarySegment& seg) {
  StepResult r;
  r.outcome = StepOutcome::infeasible;
  r.crossing = r.unconstrained = seg.at(0.5 * (seg.lo + seg.hi));
  return r;
}

}  // namespace

void SmoothingConfig::validate() const {
  if (!(epsilon > 0.0)) throw DomainError("smoothing epsilon must be positive");
  if (!(convergence_tol_days > 0.0)) throw DomainError("smoothing convergence_tol must be positive");
  if (max_iterations < 1) throw DomainError("smoothing max_iterations must be >= 1");
  if (ice_step_limit < 0.0) throw DomainError("smoothing ice_step_limit must be >= 0");
}

BoundarySegment shared_segment(const MeshView& mesh, int a, int b) {
  const auto code = mesh.graph.touch(a, b);
  if (!code) throw DomainError("cells " + std::to_string(a) + " and " + std::to_string(b) + " do not touch");
  const Bounds ba = mesh.cell(a).bounds();
  const Bounds bb = mesh.cell(b).bounds();
  BoundarySegment seg;
  if (is_horizontal(*code)) {
    seg.meridian = true;
    seg.fixed = *code > 0 ? ba.lon_max : ba.lon_min;
    seg.lo = std::max(ba.lat_min, bb.lat_min);
    seg.hi = std::min(ba.lat_max, bb.lat_max);
  } else if (is_vertical(*code)) {
    seg.meridian = false;
    seg.fixed = *code < 0 ? ba.lat_max : ba.lat_min;
    seg.lo = std::max(ba.lon_min, bb.lon_min);
    seg.hi = std::min(ba.lon_max, bb.lon_max);
  } else {
    const bool east = *code == 1 || *code == 3;
    const bool north = *code == 1 || *code == -3;
    seg.meridian = true;
    seg.fixed = east ? ba.lon_max : ba.lon_min;
    seg.lo = seg.hi = north ? ba.lat_max : ba.lat_min;
  }
  return seg;
}

std::optional<geo::GeoPoint> apply_special_cases(const MeshView& mesh, const geo::GeoPoint& entry,
                                                 const geo::GeoPoint& exit, int src, int dst,
                                                 const SmoothingConfig& cfg) {
  const BoundarySegment seg = shared_segment(mesh, src, dst);
  if (seg.lo == seg.hi) return std::nullopt;
  const auto snap = [&](const geo::GeoPoint& p) { return seg.at(std::clamp(seg.along(p), seg.lo, seg.hi)); };
  const double gap = geo::equirect_distance(entry, exit, 0.5 * (entry.lat + exit.lat), mesh.earth_radius);
  if (gap < cfg.epsilon) return snap(exit);
  if (std::abs(seg.across(entry) - seg.fixed) <= kOnLine) return snap(entry);
  if (std::abs(seg.across(exit) - seg.fixed) <= kOnLine) return snap(exit);
  return std::nullopt;
}

StepResult smooth_step_horizontal(const MeshView& mesh, const geo::GeoPoint& entry, const geo::GeoPoint& exit,
                                  int src, int dst, const SmoothingConfig& cfg) {
  const auto code = mesh.graph.touch(src, dst);
  if (!code || !is_horizontal(*code)) throw DomainError("smooth_step_horizontal needs an east-west pair");
  const BoundarySegment seg = shared_segment(mesh, src, dst);
  if (auto p = apply_special_cases(mesh, entry, exit, src, dst, cfg)) {
    StepResult r;
    r.outcome = StepOutcome::special_case;
    r.crossing = r.unconstrained = *p;
    return r;
  }
  const CellBox& a = mesh.cell(src);
  const CellBox& b = mesh.cell(dst);
  const double m = geo::metres_per_degree(mesh.earth_radius);
  const double sgn = *code > 0 ? 1.0 : -1.0;
  CrossingProblem p;
  p.orientation = Orientation::smoothed_horizontal;
  p.earth_radius = mesh.earth_radius;
  p.left = {mesh.performance(src).speed_mps(), {sgn * a.current_u, a.current_v},
            std::abs(geo::lon_delta(entry.lon, seg.fixed)) * m};
  p.right = {mesh.performance(dst).speed_mps(), {sgn * b.current_u, b.current_v},
             std::abs(geo::lon_delta(seg.fixed, exit.lon)) * m};
  p.Y = (exit.lat - entry.lat) * m;
  p.entry_lat = entry.lat;
  p.exit_lat = exit.lat;
  CrossingSolution sol;
  try {
    sol = solve_smoothed_horizontal(p, std::nullopt, cfg.solver);
  } catch (const Error&) {
    return infeasible_step(seg);
  }
  return classify(mesh, seg, src, dst, entry.lat + sol.yval / m);
}

StepResult smooth_step_vertical(const MeshView& mesh, const geo::GeoPoint& entry, const geo::GeoPoint& exit,
                                int src, int dst, const SmoothingConfig& cfg) {
  const auto code = mesh.graph.touch(src, dst);
  if (!code || !is_vertical(*code)) throw DomainError("smooth_step_vertical needs a north-south pair");
  const BoundarySegment seg = shared_segment(mesh, src, dst);
  if (auto p = apply_special_cases(mesh, entry, exit, src, dst, cfg)) {
    StepResult r;
    r.outcome = StepOutcome::special_case;
    r.crossing = r.unconstrained = *p;
    return r;
  }
  const CellBox& a = mesh.cell(src);
  const CellBox& b = mesh.cell(dst);
  const double m = geo::metres_per_degree(mesh.earth_radius);
  const double k = m * geo::lat_scale(seg.fixed);
  const double sgn = *code < 0 ? 1.0 : -1.0;  // +1 heading north
  CrossingProblem p;
  p.orientation = Orientation::smoothed_vertical;
  p.earth_radius = mesh.earth_radius;
  p.left = {mesh.performance(src).speed_mps(), {sgn * a.current_v, a.current_u}, std::abs(entry.lat - seg.fixed) * m};
  p.right = {mesh.performance(dst).speed_mps(), {sgn * b.current_v, b.current_u}, std::abs(exit.lat - seg.fixed) * m};
  p.Y = geo::lon_delta(entry.lon, exit.lon) * k;
  p.entry_lat = entry.lat;
  p.exit_lat = exit.lat;
  p.boundary_lat = seg.fixed;
  if (!(k > 0.0)) return infeasible_step(seg);
  CrossingSolution sol;
  try {
    sol = solve_smoothed_vertical(p, std::nullopt, cfg.solver);
  } catch (const Error&) {
    return infeasible_step(seg);
  }
  return classify(mesh, seg, src, dst, entry.lon + sol.yval / k);
}

std::optional<DiagonalInsertion> smooth_step_diagonal(const MeshView& mesh, const geo::GeoPoint& entry,
                                                      const geo::GeoPoint& exit, int src, int dst,
                                                      const SmoothingConfig& cfg) {
  const auto code = mesh.graph.touch(src, dst);
  if (!code || !is_diagonal(*code)) throw DomainError("smooth_step_diagonal needs a diagonal pair");
  const BoundarySegment seg = shared_segment(mesh, src, dst);
  const geo::GeoPoint corner = seg.at(seg.lo);
  const double sx = sign(geo::lon_delta(mesh.cell(src).centre.lon, mesh.cell(dst).centre.lon));
  const double sy = sign(mesh.cell(dst).centre.lat - mesh.cell(src).centre.lat);
  const double corner_time = leg_time(mesh, entry, corner, src) + leg_time(mesh, corner, exit, dst);

  std::vector<int> candidates;
  for (const geo::GeoPoint probe : {geo::GeoPoint{corner.lon - sx * kProbe, corner.lat + sy * kProbe},
                                    geo::GeoPoint{corner.lon + sx * kProbe, corner.lat - sy * kProbe}}) {
    if (auto c = mesh.graph.locate(probe)) candidates.push_back(*c);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::optional<DiagonalInsertion> best;
  for (int c : candidates) {
    const std::vector<int> seq{src, c, dst};
    if (!sequence_allowed(mesh, seq, cfg)) continue;
    SmoothingState trial = trial_route(mesh, entry, exit, seq, {entry, exit});
    const double t = relax(mesh, trial, cfg);
    if (!best || t < best->time_s) best = DiagonalInsertion{c, trial.points[1], trial.points[2], t};
  }
  if (best && best->time_s < corner_time - tiny(corner_time)) return best;
  return std::nullopt;
}

bool ice_step_allows(const MeshView& mesh, int src, int dst, const std::vector<int>& candidates,
                     const SmoothingConfig& cfg) {
  const double limit = std::max(mesh.cell(src).agg_sic, mesh.cell(dst).agg_sic) + cfg.ice_step_limit;
  return std::all_of(candidates.begin(), candidates.end(),
                     [&](int c) { return mesh.accessible(c) && mesh.cell(c).agg_sic <= limit; });
}

bool remove_reversing_edges(SmoothingState& state) {
  bool changed = false;
  for (;;) {
    std::size_t i = 0;
    std::size_t j = 0;
    bool found = false;
    for (; i < state.cells.size() && !found; ++i) {
      for (std::size_t m = state.cells.size(); m-- > i + 1;) {
        if (state.cells[m] == state.cells[i]) {
          j = m;
          found = true;
          break;
        }
      }
      if (found) break;
    }
    if (!found) return changed;
    const auto first = static_cast<std::ptrdiff_t>(i + 1);
    const auto last = static_cast<std::ptrdiff_t>(j + 1);
    state.cells.erase(state.cells.begin() + first, state.cells.begin() + last);
    state.points.erase(state.points.begin() + first, state.points.begin() + last);
    changed = true;
  }
}

SmoothingState initial_state(const DijkstraPath& path) {
  SmoothingState s;
  s.cells = path.cells;
  s.points.push_back(path.start);
  // Dijkstra nodes alternate centre and crossing; only the crossings survive.
  if (path.cells.size() > 1) {
    for (std::size_t i = 2; i + 2 < path.nodes.size(); i += 2) s.points.push_back(path.nodes[i]);
  }
  s.points.push_back(path.end);
  return s;
}

SmoothedRoute smooth(const DijkstraPath& path, const MeshView& mesh, const SmoothingConfig& cfg) {
  cfg.validate();
  SmoothingState s = initial_state(path);
  SmoothedRoute out;
  double t = total_time(mesh, s);
  out.trace.push_back({0, t, s.points.size()});

  for (int it = 1; it <= cfg.max_iterations; ++it) {
    bool structural = false;
    std::size_t k = 1;
    while (k + 1 < s.points.size()) {
      const int a = s.cells[k - 1];
      const int b = s.cells[k];
      const geo::GeoPoint entry = s.points[k - 1];
      const geo::GeoPoint exit = s.points[k + 1];
      const int code = mesh.graph.touch(a, b).value_or(0);
      if (is_diagonal(code)) {
        if (cfg.allow_diagonal) {
          if (auto ins = smooth_step_diagonal(mesh, entry, exit, a, b, cfg);
              ins && ins->time_s < local_time(mesh, s, k) - tiny(ins->time_s)) {
            SmoothingState trial;
            trial.points = {entry, ins->first, ins->second, exit};
            trial.cells = {a, ins->cell, b};
            splice(s, k, trial);
            structural = true;
            k += 2;
            continue;
          }
        }
        ++k;
        continue;
      }

      const StepResult r = is_horizontal(code) ? smooth_step_horizontal(mesh, entry, exit, a, b, cfg)
                                               : smooth_step_vertical(mesh, entry, exit, a, b, cfg);
      if (r.outcome == StepOutcome::overshoot && cfg.allow_horseshoe && sequence_allowed(mesh, r.horseshoe, cfg)) {
        SmoothingState trial = trial_route(mesh, entry, exit, r.horseshoe, {entry, r.unconstrained, exit});
        const double trial_time = relax(mesh, trial, cfg);
        SmoothingState clipped = s;
        try_move(mesh, clipped, k, r.crossing);
        const double stay = local_time(mesh, clipped, k);
        if (trial_time < stay - tiny(stay)) {
          splice(s, k, trial);
          structural = true;
          k += trial.points.size() - 2;
          continue;
        }
      }
      if (r.outcome != StepOutcome::infeasible) try_move(mesh, s, k, r.crossing);
      ++k;
    }
    if (structural) remove_reversing_edges(s);

    const double nt = total_time(mesh, s);
    out.iterations = it;
    out.trace.push_back({it, nt, s.points.size()});
    const bool settled = !structural && std::abs(t - nt) < cfg.convergence_tol_days * geo::kSecondsPerDay;
    t = nt;
    if (settled) {
      out.converged = true;
      break;
    }
  }

  if (cfg.refine) refine(mesh, s);
  s.iteration = out.iterations;
  s.last_total_time = total_time(mesh, s);
  out.cells = s.cells;
  out.route = evaluate_route(s.points, s.cells, mesh);
  return out;
}

}  // namespace icenav
