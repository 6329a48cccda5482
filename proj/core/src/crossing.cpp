#include "icenav/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "icenav/error.hpp"

namespace icenav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Forward and lateral leg components as functions of y, with derivatives.
struct LegShape {
  double f, df, ddf;
  double l, dl;
};

struct Shapes {
  LegShape left;
  LegShape right;
};

Shapes leg_shapes(const CrossingProblem& p, double y) {
  const double x = p.left.half_span;
  const double a = p.right.half_span;
  switch (p.orientation) {
    case Orientation::flat_horizontal:
      return {{x, 0.0, 0.0, y, 1.0}, {a, 0.0, 0.0, p.Y - y, -1.0}};
    case Orientation::smoothed_horizontal: {
      // Widths shrink with the cosine of the crossing latitude.
      const double r = p.earth_radius;
      const double th = geo::deg_to_rad(p.entry_lat) + y / r;
      const double ps = geo::deg_to_rad(p.exit_lat) - (p.Y - y) / r;
      return {{x * std::cos(th), -x * std::sin(th) / r, -x * std::cos(th) / (r * r), y, 1.0},
              {a * std::cos(ps), -a * std::sin(ps) / r, -a * std::cos(ps) / (r * r), p.Y - y, -1.0}};
    }
    case Orientation::smoothed_vertical: {
      const double ct = std::cos(geo::deg_to_rad(p.boundary_lat));
      const double r1 = std::cos(geo::deg_to_rad(p.entry_lat)) / ct;
      const double r2 = std::cos(geo::deg_to_rad(p.exit_lat)) / ct;
      return {{x, 0.0, 0.0, r1 * y, r1}, {a, 0.0, 0.0, r2 * (p.Y - y), -r2}};
    }
  }
  return {};
}

struct LegEval {
  double t, X, g, dX, dg;
  bool ok;
};

LegEval eval_leg(const LegShape& s, const CellTraversal& c) {
  const double u = c.current.x;
  const double v = c.current.y;
  const double C = c.speed * c.speed - u * u - v * v;
  const double dd = s.f * s.f + s.l * s.l;
  const double D = u * s.f + v * s.l;
  const double X = std::sqrt(std::max(0.0, D * D + C * dd));
  LegEval e{};
  if (!(C > 0.0) || !(X + D > 0.0)) {
    e.ok = dd == 0.0 && C > 0.0;
    return e;
  }
  e.ok = true;
  e.t = dd / (X + D);
  e.X = X;
  const double dD = u * s.df + v * s.dl;
  const double d_dot_dd = s.f * s.df + s.l * s.dl;
  e.g = s.df * (s.f - e.t * u) + s.dl * (s.l - e.t * v);
  const double dt = e.g / X;
  e.dX = (D * dD + C * d_dot_dd) / X;
  e.dg = s.ddf * (s.f - e.t * u) + s.df * (s.df - dt * u) + s.dl * (s.dl - dt * v);
  return e;
}

double max_speed(const CrossingProblem& p) { return std::max(p.left.speed, p.right.speed); }

void require_feasible(const CrossingProblem& p) {
  for (const CellTraversal* c : {&p.left, &p.right}) {
    if (!(c->speed > 0.0)) throw InfeasibleError("crossing cell speed must be positive");
    if (!(c->speed * c->speed > c->current.dot(c->current))) {
      throw InfeasibleError("vessel cannot make way against the current in a crossing cell");
    }
    if (!(c->half_span > 0.0)) throw DomainError("crossing half-span must be positive");
  }
}

CrossingSolution finish(const CrossingProblem& p, double y, int iterations, bool converged) {
  const CrossingEval e = evaluate_crossing(p, y);
  CrossingSolution s;
  s.yval = y;
  s.t1 = e.t1;
  s.t2 = e.t2;
  s.iterations = iterations;
  s.residual = std::abs(e.slope) * max_speed(p);
  s.converged = converged;
  return s;
}

// Newton on F with a bisection fallback whenever a step leaves the bracket
// or fails to halve the bracket fast enough.
CrossingSolution safeguarded_newton(const CrossingProblem& p, std::optional<double> init_y,
                                    const SolverOptions& opts) {
  require_feasible(p);
  auto [lo, hi] = crossing_bracket(p, opts);
  const double scale = std::max({p.left.half_span, p.right.half_span, std::abs(p.Y), 1.0});
  const double vs = max_speed(p);

  const CrossingEval elo = evaluate_crossing(p, lo);
  const CrossingEval ehi = evaluate_crossing(p, hi);
  if (elo.f >= 0.0 || ehi.f <= 0.0) {
    // Minimum not bracketed: report the better end.
    const double y = elo.total() <= ehi.total() ? lo : hi;
    return finish(p, y, 0, false);
  }

  double y = init_y.value_or(straight_line_guess(p));
  if (!(y > lo && y < hi)) y = 0.5 * (lo + hi);
  double dx_old = hi - lo;
  double dx = dx_old;
  CrossingEval e = evaluate_crossing(p, y);
  for (int it = 1; it <= opts.max_iter; ++it) {
    if (std::abs(e.slope) * vs <= opts.tol) return finish(p, y, it - 1, true);
    if (e.f < 0.0) {
      lo = y;
    } else {
      hi = y;
    }
    const bool newton_leaves = e.df <= 0.0 || ((y - hi) * e.df - e.f) * ((y - lo) * e.df - e.f) > 0.0;
    const bool too_slow = std::abs(2.0 * e.f) > std::abs(dx_old * e.df);
    dx_old = dx;
    if (newton_leaves || too_slow) {
      dx = 0.5 * (hi - lo);
      y = lo + dx;
    } else {
      dx = e.f / e.df;
      y -= dx;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale ||
        std::abs(dx) <= std::numeric_limits<double>::epsilon() * scale) {
      return finish(p, y, it, true);
    }
    e = evaluate_crossing(p, y);
  }
  CrossingSolution s = finish(p, y, opts.max_iter, false);
  s.converged = s.residual <= opts.tol;
  return s;
}

}  // namespace

TravelTime travel_time(const geo::Vec2& d, const geo::Vec2& u, double s) {
  const double dd = d.dot(d);
  if (dd == 0.0) return {0.0, TravelStatus::ok};
  const double C = s * s - u.dot(u);
  const double D = u.dot(d);
  if (C == 0.0) {
    if (D > 0.0) return {dd / (2.0 * D), TravelStatus::ok};
    return {kInf, D == 0.0 ? TravelStatus::undefined : TravelStatus::infeasible};
  }
  const double disc = D * D + C * dd;
  if (disc < 0.0) return {kInf, TravelStatus::infeasible};
  const double X = std::sqrt(disc);
  // |d|^2 / (X + D) equals (X - D) / C without cancellation near C = 0.
  if (!(X + D > 0.0)) return {kInf, TravelStatus::infeasible};
  return {dd / (X + D), TravelStatus::ok};
}

CrossingEval evaluate_crossing(const CrossingProblem& p, double y) {
  const Shapes sh = leg_shapes(p, y);
  const LegEval e1 = eval_leg(sh.left, p.left);
  const LegEval e2 = eval_leg(sh.right, p.right);
  CrossingEval out;
  out.feasible = e1.ok && e2.ok;
  if (!out.feasible) {
    out.t1 = e1.ok ? e1.t : kInf;
    out.t2 = e2.ok ? e2.t : kInf;
    return out;
  }
  out.t1 = e1.t;
  out.t2 = e2.t;
  const double s1 = e1.X > 0.0 ? e1.g / e1.X : 0.0;
  const double s2 = e2.X > 0.0 ? e2.g / e2.X : 0.0;
  out.slope = s1 + s2;
  out.f = e2.X * e1.g + e1.X * e2.g;
  out.df = e2.dX * e1.g + e2.X * e1.dg + e1.dX * e2.g + e1.X * e2.dg;
  return out;
}

double crossing_objective(const CrossingProblem& p, double y) {
  const CrossingEval e = evaluate_crossing(p, y);
  return e.feasible ? e.total() : kInf;
}

std::pair<double, double> crossing_bracket(const CrossingProblem& p, const SolverOptions& opts) {
  const double span = p.left.half_span + p.right.half_span + std::abs(p.Y);
  double lo = std::min(0.0, p.Y) - opts.bracket_factor * span;
  double hi = std::max(0.0, p.Y) + opts.bracket_factor * span;
  if (p.orientation == Orientation::smoothed_horizontal) {
    // Keep the crossing latitude away from the poles.
    const double r = p.earth_radius;
    const double lam = geo::deg_to_rad(p.entry_lat);
    const double limit = geo::deg_to_rad(89.0);
    lo = std::max(lo, (-limit - lam) * r);
    hi = std::min(hi, (limit - lam) * r);
  }
  return {lo, hi};
}

double straight_line_guess(const CrossingProblem& p) {
  return p.Y * p.left.half_span / (p.left.half_span + p.right.half_span);
}

CrossingSolution solve_flat(const CrossingProblem& p, std::optional<double> init_y, const SolverOptions& opts) {
  CrossingProblem q = p;
  q.orientation = Orientation::flat_horizontal;
  return safeguarded_newton(q, init_y, opts);
}

CrossingSolution solve_smoothed_horizontal(const CrossingProblem& p, std::optional<double> init_y,
                                           const SolverOptions& opts) {
  CrossingProblem q = p;
  q.orientation = Orientation::smoothed_horizontal;
  return safeguarded_newton(q, init_y, opts);
}

CrossingSolution solve_smoothed_vertical(const CrossingProblem& p, std::optional<double> init_y,
                                         const SolverOptions& opts) {
  CrossingProblem q = p;
  q.orientation = Orientation::smoothed_vertical;
  return safeguarded_newton(q, init_y, opts);
}

CrossingSolution solve_crossing(const CrossingProblem& p, std::optional<double> init_y, const SolverOptions& opts) {
  return safeguarded_newton(p, init_y, opts);
}

}  // namespace icenav
