#pragma once

// Ice resistance, safe speed and fuel use of a vessel in a mesh cell.

#include <vector>

#include "icenav/mesh.hpp"

namespace icenav {

enum class HullType { slender, blunt };

struct HullConstants {
  double k_c = 0.0;  // ice force scale
  double b = 0.0;    // Froude number exponent
  double n = 0.0;    // concentration exponent
};

HullConstants hull_constants(HullType hull);

/// Conditions the vessel is rated to break; they fix the force limit R_L.
struct BreakingSpec {
  double speed = 3.0;          // knots
  double thickness = 1.0;      // metres of level ice
  double concentration = 1.0;  // fraction
};

/// U_d = a2 V^2 + a1 V + r2 R^2 + r1 R + base, V in knots, R in kN, U_d in t/day.
struct FuelCoeffs {
  double a2 = 0.113;
  double a1 = -0.132;
  double r2 = 0.003;
  double r1 = 0.042;
  double base = 6.0;
};

struct VesselConfig {
  double max_speed = 13.0;      // knots
  double beam = 24.0;           // metres
  double ice_density = 900.0;   // kg/m^3
  HullType hull = HullType::slender;
  double max_ice_conc = 80.0;   // percent
  double ice_thickness = 0.8;   // metres
  BreakingSpec breaking;
  FuelCoeffs fuel;
  double min_depth = 10.0;      // metres of water needed under the keel

  void validate() const;
  /// Resistance at the breaking spec conditions, in kN.
  double force_limit() const;
};

struct CellPerformance {
  double resistance = 0.0;  // kN
  double safe_speed = 0.0;  // knots
  double fuel_rate = 0.0;   // tons/day
  bool accessible = false;

  double speed_mps() const;
};

/// V / sqrt(g h C) with V in m/s. Throws DomainError when h or C is not positive.
double ice_froude(double speed_mps, double thickness, double concentration);

/// 0.5 k_c Fr^b rho B h V^2 C^n in kN, with V given in knots.
double ice_resistance(double speed_kn, double thickness, double concentration, const VesselConfig& cfg);

/// Speed in knots at which the resistance equals `force_kn`, capped at max_speed.
double speed_from_resistance(double force_kn, double thickness, double concentration, const VesselConfig& cfg);

double fuel_rate(double speed_kn, double resistance_kn, const VesselConfig& cfg);

CellPerformance cell_performance(const CellBox& cell, const VesselConfig& cfg, double thickness);

/// Performance per cell, indexed by cell id, at the configured ice thickness.
std::vector<CellPerformance> augment_mesh(const std::vector<CellBox>& cells, const VesselConfig& cfg);

/// Same, with one ice thickness per cell id.
std::vector<CellPerformance> augment_mesh(const std::vector<CellBox>& cells, const VesselConfig& cfg,
                                          const std::vector<double>& thickness);

}  // namespace icenav
