// Domain types for three-core armored cable geometry and materials.
#pragma once

#include <complex>
#include <string>
#include <vector>

namespace cablefem {

using Complex = std::complex<double>;

enum class ConductorMaterial { copper, aluminium };
enum class LayRelation { contralay, unilay };
enum class Handedness { cw, ccw };

// Geometric description of one cable. Lengths in meters, frequency in Hz,
// phase_current is the peak phasor magnitude (e^{+jwt} convention).
struct CableSpec {
  std::string name;
  double voltage_class = 0.0;  // volts
  ConductorMaterial conductor_material = ConductorMaterial::copper;
  double conductor_radius = 0.0;
  double sheath_thickness = 0.0;
  double sheath_radius = 0.0;  // mean radius of the metallic sheath
  double core_lay_length = 0.0;   // p_c
  double armor_wire_diameter = 0.0;
  int armor_wire_count = 0;
  double armor_radius = 0.0;   // pitch-circle radius of the wire layer
  double armor_lay_length = 0.0;  // p_a
  LayRelation lay_relation = LayRelation::contralay;
  Handedness core_handedness = Handedness::ccw;
  double frequency = 50.0;
  double phase_current = 0.0;

  double sheath_inner_radius() const { return sheath_radius - 0.5 * sheath_thickness; }
  double sheath_outer_radius() const { return sheath_radius + 0.5 * sheath_thickness; }
  double armor_wire_radius() const { return 0.5 * armor_wire_diameter; }
  // Inner rim of the armor wire layer.
  double armor_inner_radius() const { return armor_radius - armor_wire_radius(); }
  double armor_outer_radius() const { return armor_radius + armor_wire_radius(); }

  // Radius of the circle carrying the three phase centers. The nominal trefoil
  // radius (2/sqrt(3) * sheath_radius) makes the mean sheath circles tangent,
  // which would let the outer sheath surfaces overlap by one thickness; the
  // layout keeps a clearance of 0.2*thickness between outer surfaces so the
  // cross section stays meshable.
  double trefoil_radius() const;
};

// Complex relative permeability, either a constant or the field-dependent
// saturation model  mu_r(B) = mu0r + mumr(1-e^{-a1|B|}) - j mumi(1-e^{-a2|B|}).
struct PermeabilityModel {
  enum class Variant { constant, field_dependent };
  Variant variant = Variant::constant;
  Complex constant_mu = Complex(1.0, 0.0);
  double mu_0r = 1.0;   // initial relative permeability
  double mu_mr = 0.0;   // real saturation amplitude
  double mu_mi = 0.0;   // imaginary (loss) saturation amplitude
  double alpha_1 = 1.0; // 1/T
  double alpha_2 = 1.0; // 1/T

  static PermeabilityModel Constant(Complex mu_r) {
    PermeabilityModel m;
    m.variant = Variant::constant;
    m.constant_mu = mu_r;
    return m;
  }
  static PermeabilityModel FieldDependent(double mu_0r, double mu_mr, double mu_mi,
                                          double alpha_1, double alpha_2) {
    PermeabilityModel m;
    m.variant = Variant::field_dependent;
    m.mu_0r = mu_0r;
    m.mu_mr = mu_mr;
    m.mu_mi = mu_mi;
    m.alpha_1 = alpha_1;
    m.alpha_2 = alpha_2;
    return m;
  }
};

// Evaluates the relative permeability at flux density magnitude b_mag (tesla).
// Throws std::domain_error for negative b_mag.
Complex complex_permeability(const PermeabilityModel& model, double b_mag);

// Electrical material data. Filler and air are nonconducting with mu_r = 1.
struct MaterialSet {
  double conductor_resistivity = 1.7241e-8;  // ohm m (IEC copper at 20 C)
  double sheath_resistivity = 2.14e-7;       // ohm m (IEC lead at 20 C)
  double armor_conductivity = 4.5e6;         // S/m (galvanized steel)
  PermeabilityModel armor_permeability = PermeabilityModel::Constant(Complex(100.0, -50.0));

  static MaterialSet Defaults(ConductorMaterial m);
};

// Checks all CableSpec invariants. Returns one human-readable line per failed
// invariant; an empty list means the spec is valid.
std::vector<std::string> validate_spec(const CableSpec& spec);

// Flat key/value cable spec file ('#' comments, SI units).
CableSpec load_cable_spec(const std::string& path);
void save_cable_spec(const CableSpec& spec, const std::string& path);
CableSpec parse_cable_spec(const std::string& text, const std::string& name);
std::string format_cable_spec(const CableSpec& spec);

}  // namespace cablefem
