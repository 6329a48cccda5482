#include "icenav/vessel.hpp"

#include <algorithm>
#include <cmath>

#include "icenav/error.hpp"
#include "icenav/geo.hpp"

namespace icenav {

HullConstants hull_constants(HullType hull) {
  switch (hull) {
    case HullType::slender:
      return {4.4, -0.8267, 2.0};
    case HullType::blunt:
      return {16.1, -1.7937, 3.0};
  }
  throw DomainError("unknown hull type");
}

void VesselConfig::validate() const {
  if (!(max_speed > 0.0)) throw DomainError("vessel max_speed must be positive");
  if (!(max_ice_conc > 0.0 && max_ice_conc <= 100.0)) throw DomainError("vessel max_ice_conc must be in (0, 100]");
  if (!(beam > 0.0)) throw DomainError("vessel beam must be positive");
  if (!(ice_density > 0.0)) throw DomainError("vessel ice_density must be positive");
  if (ice_thickness < 0.0) throw DomainError("vessel ice_thickness must be >= 0");
  if (!(breaking.speed > 0.0 && breaking.thickness > 0.0 && breaking.concentration > 0.0 &&
        breaking.concentration <= 1.0)) {
    throw DomainError("vessel breaking spec needs positive speed and thickness and concentration in (0, 1]");
  }
}

double VesselConfig::force_limit() const {
  return ice_resistance(breaking.speed, breaking.thickness, breaking.concentration, *this);
}

double CellPerformance::speed_mps() const { return safe_speed * geo::kKnotsToMps; }

double ice_froude(double speed_mps, double thickness, double concentration) {
  if (!(thickness > 0.0) || !(concentration > 0.0)) {
    throw DomainError("ice Froude number needs positive thickness and concentration");
  }
  return speed_mps / std::sqrt(geo::kGravity * thickness * concentration);
}

double ice_resistance(double speed_kn, double thickness, double concentration, const VesselConfig& cfg) {
  if (speed_kn < 0.0 || thickness < 0.0 || concentration < 0.0 || concentration > 1.0) {
    throw DomainError("ice resistance inputs out of range");
  }
  if (concentration == 0.0 || thickness == 0.0 || speed_kn == 0.0) return 0.0;
  const HullConstants hc = hull_constants(cfg.hull);
  const double v = speed_kn * geo::kKnotsToMps;
  const double fr = ice_froude(v, thickness, concentration);
  const double newtons = 0.5 * hc.k_c * std::pow(fr, hc.b) * cfg.ice_density * cfg.beam * thickness * v * v *
                         std::pow(concentration, hc.n);
  return newtons / 1000.0;
}

double speed_from_resistance(double force_kn, double thickness, double concentration, const VesselConfig& cfg) {
  if (!(force_kn > 0.0) || !(thickness > 0.0) || !(concentration > 0.0)) {
    throw DomainError("speed_from_resistance needs positive force, thickness and concentration");
  }
  const HullConstants hc = hull_constants(cfg.hull);
  const double denom = hc.k_c * cfg.ice_density * cfg.beam * thickness * std::pow(concentration, hc.n) *
                       std::pow(geo::kGravity * thickness * concentration, -hc.b / 2.0);
  const double v = std::pow(2.0 * force_kn * 1000.0 / denom, 1.0 / (2.0 + hc.b));
  return std::min(v / geo::kKnotsToMps, cfg.max_speed);
}

double fuel_rate(double speed_kn, double resistance_kn, const VesselConfig& cfg) {
  const FuelCoeffs& f = cfg.fuel;
  return f.a2 * speed_kn * speed_kn + f.a1 * speed_kn + f.r2 * resistance_kn * resistance_kn +
         f.r1 * resistance_kn + f.base;
}

CellPerformance cell_performance(const CellBox& cell, const VesselConfig& cfg, double thickness) {
  CellPerformance p;
  if (is_blocked(cell, cfg.max_ice_conc)) return p;
  p.accessible = true;
  const double conc = std::clamp(cell.agg_sic / 100.0, 0.0, 1.0);
  p.safe_speed = cfg.max_speed;
  p.resistance = ice_resistance(cfg.max_speed, thickness, conc, cfg);
  const double limit = cfg.force_limit();
  if (p.resistance > limit) {
    p.safe_speed = speed_from_resistance(limit, thickness, conc, cfg);
    p.resistance = limit;
  }
  p.fuel_rate = fuel_rate(p.safe_speed, p.resistance, cfg);
  return p;
}

std::vector<CellPerformance> augment_mesh(const std::vector<CellBox>& cells, const VesselConfig& cfg) {
  return augment_mesh(cells, cfg, std::vector<double>(cells.size(), cfg.ice_thickness));
}

std::vector<CellPerformance> augment_mesh(const std::vector<CellBox>& cells, const VesselConfig& cfg,
                                          const std::vector<double>& thickness) {
  cfg.validate();
  if (thickness.size() != cells.size()) throw DomainError("one ice thickness per cell is required");
  std::vector<CellPerformance> out(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cell_performance(cells[i], cfg, thickness[i]);
  return out;
}

}  // namespace icenav
