// Closed-form references used by the test suites. These have no dependence on
// the mesh or solver code so a disagreement localizes blame.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace cablefem::oracles {

using Complex = std::complex<double>;

struct OracleResult {
  double value = 0.0;
  std::string unit;
  double truncation_bound = 0.0;  // certified bound on the evaluation error
  bool asymptotic = false;        // true when the series fell back to the asymptote
};

// AC resistance per meter of an isolated round wire carrying a uniform total
// current, from the Kelvin ber/bei solution of the internal impedance.
OracleResult round_wire_ac_resistance(double radius, double conductivity, double mu,
                                      double frequency);

// Same, as the ratio R_ac/R_dc with q = radius/skin_depth.
double skin_effect_ratio(double q);

double round_wire_dc_resistance(double radius, double conductivity);

// Circulation of H around a circular loop: the sum of enclosed currents.
Complex ampere_loop_field(const std::vector<Eigen::Vector2d>& positions,
                          const std::vector<Complex>& currents, const Eigen::Vector2d& loop_center,
                          double loop_radius);

// Mutual-inductance circuit model for the solid-bonded sheath currents of an
// untwisted trefoil with thin tubular sheaths. Distances enter through
// ln(return_radius/d) with the coaxial self distance equal to the sheath
// radius; return_radius should match the FEM outer boundary when comparing.
struct SheathCircuitInput {
  std::array<Eigen::Vector2d, 3> phase_centers;
  std::array<Complex, 3> phase_currents;  // peak phasors
  double sheath_radius = 0.0;             // mean
  double sheath_thickness = 0.0;
  double sheath_resistivity = 0.0;
  double frequency = 50.0;
  double return_radius = 1.0;
};

struct SheathCircuitResult {
  std::array<Complex, 3> sheath_currents;
  std::string warning;  // set when the thin-sheath approximation is doubtful
};

SheathCircuitResult sheath_circuit_model(const SheathCircuitInput& in);

}  // namespace cablefem::oracles
