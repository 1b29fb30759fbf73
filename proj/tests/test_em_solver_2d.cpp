#include <doctest.h>

#include <cmath>

#include "cablefem/analytic_oracles.hpp"
#include "cablefem/em_solver.hpp"

using namespace cablefem;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMu0 = 4.0 * kPi * 1e-7;

// Small three-core cable for fast 2D runs.
CableSpec mini_cable() {
  CableSpec s;
  s.name = "mini";
  s.voltage_class = 10e3;
  s.conductor_material = ConductorMaterial::copper;
  s.conductor_radius = 0.0025;
  s.sheath_thickness = 0.0006;
  s.sheath_radius = 0.007;
  s.core_lay_length = 0.9;
  s.armor_wire_diameter = 0.003;
  s.armor_wire_count = 10;
  s.armor_radius = 0.020;
  s.armor_lay_length = 0.3;
  s.frequency = 50.0;
  s.phase_current = 400.0;
  return s;
}

Mesh2D mini_mesh(const CableSpec& s, double scale = 1.0) {
  MeshControls c;
  c.layers_per_cp = std::max(16, min_layers_per_cp(s));
  c.size_conductor = scale * s.conductor_radius / 3.0;
  c.size_sheath = scale * s.sheath_thickness;
  c.size_wire = scale * s.armor_wire_radius() / 1.5;
  c.size_filler = scale * s.armor_radius / 7.0;
  c.outer_boundary_factor = 4.0;
  return build_cross_section(s, c);
}

struct SingleWire {
  CableSpec spec;
  Mesh2D mesh;
  MaterialSet materials;
};

// Isolated round conductor with imposed current, used against the Kelvin
// oracle. q = radius / skin depth.
SingleWire single_wire(double q, double current = 100.0) {
  SingleWire s;
  s.spec.name = "wire";
  const double r = 0.005;
  const double sigma = 5.8e7;
  s.spec.conductor_radius = r;
  s.spec.frequency = q * q / (kPi * kMu0 * sigma * r * r);
  s.spec.phase_current = current;
  s.materials = MaterialSet::Defaults(ConductorMaterial::copper);
  s.materials.conductor_resistivity = 1.0 / sigma;
  s.materials.armor_conductivity = 0.0;
  const double size = r / (q >= 2.0 ? 10.0 : 6.0);
  s.mesh = build_single_conductor_mesh(r, size, 8.0 * r);
  return s;
}

SystemOptions wire_options(double current) {
  SystemOptions o;
  o.excitation.phase_currents = {Complex(current, 0), Complex(0, 0), Complex(0, 0)};
  return o;
}

double total_loss(Solver2D& solver) {
  double loss = 0.0;
  for (const auto& tag : solver.conducting_regions()) {
    loss += solver.joule_loss(tag) + solver.magnetic_loss(tag);
  }
  return loss;
}
}  // namespace

TEST_CASE("imposed current is echoed by the region integral") {
  SingleWire s = single_wire(1.0);
  Solver2D solver(s.mesh, s.spec, s.materials, wire_options(100.0));
  solver.solve();
  const Complex i = solver.region_current({RegionKind::conductor, 0});
  CHECK(std::abs(i - Complex(100.0, 0.0)) < 1e-10 * 100.0);
}

TEST_CASE("dc limit reproduces the closed-form resistance") {
  SingleWire s = single_wire(1.0);
  s.spec.frequency = 1e-4;
  Solver2D solver(s.mesh, s.spec, s.materials, wire_options(100.0));
  solver.solve();
  const double r_fem = 2.0 * total_loss(solver) / (100.0 * 100.0);
  const double r_dc = oracles::round_wire_dc_resistance(0.005, 5.8e7);
  CHECK(r_fem == doctest::Approx(r_dc).epsilon(5e-3));
}

TEST_CASE("ac resistance matches the Kelvin oracle within 1%") {
  for (double q : {0.3, 1.0, 3.0}) {
    CAPTURE(q);
    SingleWire s = single_wire(q);
    Solver2D solver(s.mesh, s.spec, s.materials, wire_options(100.0));
    solver.solve();
    const double r_fem = 2.0 * total_loss(solver) / (100.0 * 100.0);
    const auto oracle = oracles::round_wire_ac_resistance(0.005, 5.8e7, kMu0, s.spec.frequency);
    CHECK(r_fem == doctest::Approx(oracle.value).epsilon(1e-2));
  }
}

TEST_CASE("ampere circulation around the conductor returns its current") {
  SingleWire s = single_wire(1.0);
  Solver2D solver(s.mesh, s.spec, s.materials, wire_options(100.0));
  solver.solve();
  // A piecewise-constant-gradient ring element reproduces a 1/r field exactly
  // at the band's harmonic radius (b-a)/ln(b/a); sample the loop there.
  const double t0 = 2.0 * kPi * 0.005 / 40.0;  // first graded air spacing
  const double a = 0.005 + t0, b = a + 1.6 * t0;
  const double r_loop = (b - a) / std::log(b / a);
  const Complex circ = solver.ampere_circulation({0.0, 0.0}, r_loop);
  CHECK(std::abs(circ - Complex(100.0, 0.0)) < 0.01 * 100.0);
}

TEST_CASE("open sheaths carry no net current; solid sheaths do") {
  const CableSpec spec = mini_cable();
  const Mesh2D mesh = mini_mesh(spec);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  SystemOptions open_opt;
  open_opt.bonding = Bonding::open;
  open_opt.armor_treatment = ArmorTreatment::plain_2d;
  open_opt.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  Solver2D open_solver(mesh, spec, mats, open_opt);
  open_solver.solve();
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(open_solver.region_current({RegionKind::sheath, i})) <
          1e-10 * spec.phase_current);
  }

  SystemOptions solid_opt = open_opt;
  solid_opt.bonding = Bonding::solid;
  Solver2D solid_solver(mesh, spec, mats, solid_opt);
  solid_solver.solve();
  const double i0 = std::abs(solid_solver.region_current({RegionKind::sheath, 0}));
  const double i1 = std::abs(solid_solver.region_current({RegionKind::sheath, 1}));
  const double i2 = std::abs(solid_solver.region_current({RegionKind::sheath, 2}));
  CHECK(i0 > 0.002 * spec.phase_current);
  // Symmetric trefoil: magnitudes agree within a percent on the untwisted mesh.
  CHECK(i1 == doctest::Approx(i0).epsilon(0.01));
  CHECK(i2 == doctest::Approx(i0).epsilon(0.01));
}

TEST_CASE("discrete power balance holds to solver accuracy") {
  const CableSpec spec = mini_cable();
  const Mesh2D mesh = mini_mesh(spec);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  SystemOptions opt;
  opt.bonding = Bonding::solid;
  opt.armor_treatment = ArmorTreatment::plain_2d;
  opt.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  Solver2D solver(mesh, spec, mats, opt);
  solver.solve();
  double loss = 0.0;
  for (const auto& tag : solver.conducting_regions()) {
    loss += solver.joule_loss(tag) + solver.magnetic_loss(tag);
  }
  CHECK(solver.source_power().real() == doctest::Approx(loss).epsilon(5e-3));
}

TEST_CASE("solid-bonded sheath currents match the circuit oracle") {
  // Thin sheaths, wires disabled: the analytic trefoil circuit applies.
  CableSpec spec = mini_cable();
  spec.conductor_radius = 0.002;
  spec.sheath_radius = 0.012;
  spec.sheath_thickness = 0.0008;
  spec.armor_radius = 0.030;
  spec.frequency = 50.0;
  MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  mats.armor_conductivity = 0.0;
  mats.armor_permeability = PermeabilityModel::Constant(Complex(1.0, 0.0));
  const Mesh2D mesh = mini_mesh(spec, 0.8);

  SystemOptions opt;
  opt.bonding = Bonding::solid;
  opt.armor_treatment = ArmorTreatment::plain_2d;
  opt.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  Solver2D solver(mesh, spec, mats, opt);
  solver.solve();

  oracles::SheathCircuitInput in;
  for (int i = 0; i < 3; ++i) {
    const double a = 2.0 * kPi * i / 3.0;
    in.phase_centers[i] = spec.trefoil_radius() * Eigen::Vector2d(std::cos(a), std::sin(a));
    in.phase_currents[i] = opt.excitation.phase_currents[i];
  }
  in.sheath_radius = spec.sheath_radius;
  in.sheath_thickness = spec.sheath_thickness;
  in.sheath_resistivity = mats.sheath_resistivity;
  in.frequency = spec.frequency;
  in.return_radius = mesh.outer_radius;
  const auto oracle = oracles::sheath_circuit_model(in);

  for (int i = 0; i < 3; ++i) {
    const Complex fem = solver.region_current({RegionKind::sheath, i});
    CHECK(std::abs(fem - oracle.sheath_currents[i]) < 0.03 * std::abs(oracle.sheath_currents[i]));
  }
}

TEST_CASE("series armor circuit carries no loop current when balanced") {
  const CableSpec spec = mini_cable();
  const Mesh2D mesh = mini_mesh(spec, 0.8);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  SystemOptions opt;
  opt.bonding = Bonding::solid;
  opt.armor_treatment = ArmorTreatment::series_circuit_2p5d;
  opt.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  Solver2D solver(mesh, spec, mats, opt);
  solver.solve();
  CHECK(std::abs(solver.armor_loop_current()) < 1e-6 * spec.phase_current);

  // Every wire carries the common loop current.
  for (int w = 0; w < spec.armor_wire_count; ++w) {
    CHECK(std::abs(solver.region_current({RegionKind::armor_wire, w}) -
                   solver.armor_loop_current()) < 1e-8 * spec.phase_current);
  }

  // Individually floating wires give the same solution under balanced
  // excitation (the series constraint is inactive).
  SystemOptions open_opt = opt;
  open_opt.armor_treatment = ArmorTreatment::plain_2d;
  open_opt.bonding = Bonding::open;
  Solver2D floating(mesh, spec, mats, open_opt);
  floating.solve();
  const double l2_series = [&] {
    double armor = 0, cond = 0;
    for (const auto& tag : solver.conducting_regions()) {
      if (tag.kind == RegionKind::armor_wire)
        armor += solver.joule_loss(tag) + solver.magnetic_loss(tag);
      if (tag.kind == RegionKind::conductor) cond += solver.joule_loss(tag);
    }
    return armor / cond;
  }();
  const double l2_float = [&] {
    double armor = 0, cond = 0;
    for (const auto& tag : floating.conducting_regions()) {
      if (tag.kind == RegionKind::armor_wire)
        armor += floating.joule_loss(tag) + floating.magnetic_loss(tag);
      if (tag.kind == RegionKind::conductor) cond += floating.joule_loss(tag);
    }
    return armor / cond;
  }();
  CHECK(l2_series == doctest::Approx(l2_float).epsilon(1e-4));
}

TEST_CASE("unbalanced excitation drives a series loop current") {
  const CableSpec spec = mini_cable();
  const Mesh2D mesh = mini_mesh(spec, 0.8);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  SystemOptions opt;
  opt.bonding = Bonding::solid;
  opt.armor_treatment = ArmorTreatment::series_circuit_2p5d;
  opt.excitation.phase_currents = {Complex(spec.phase_current, 0), Complex(0, 0), Complex(0, 0)};
  Solver2D solver(mesh, spec, mats, opt);
  solver.solve();
  CHECK(std::abs(solver.armor_loop_current()) > 1e-3 * spec.phase_current);
}

TEST_CASE("loss factors are invariant under phase rotation and current scale") {
  const CableSpec spec = mini_cable();
  const Mesh2D mesh = mini_mesh(spec, 1.2);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);

  auto lambdas = [&](double scale, double phase) {
    SystemOptions opt;
    opt.bonding = Bonding::solid;
    opt.armor_treatment = ArmorTreatment::plain_2d;
    auto cur = ExcitationSpec::balanced(spec.phase_current * scale);
    const Complex rot = std::polar(1.0, phase);
    for (auto& c : cur) c *= rot;
    opt.excitation.phase_currents = cur;
    Solver2D solver(mesh, spec, mats, opt);
    solver.solve();
    double cond = 0, sheath = 0, armor = 0;
    const double energy = solver.magnetic_energy();
    for (const auto& tag : solver.conducting_regions()) {
      const double l = solver.joule_loss(tag) + solver.magnetic_loss(tag);
      if (tag.kind == RegionKind::conductor) cond += l;
      if (tag.kind == RegionKind::sheath) sheath += l;
      if (tag.kind == RegionKind::armor_wire) armor += l;
    }
    return std::array<double, 4>{sheath / cond, armor / cond, cond, energy};
  };

  const auto base = lambdas(1.0, 0.0);
  const auto rotated = lambdas(1.0, 1.1);
  const auto scaled = lambdas(2.0, 0.0);
  CHECK(rotated[0] == doctest::Approx(base[0]).epsilon(1e-9));
  CHECK(rotated[1] == doctest::Approx(base[1]).epsilon(1e-9));
  CHECK(scaled[0] == doctest::Approx(base[0]).epsilon(1e-9));
  CHECK(scaled[1] == doctest::Approx(base[1]).epsilon(1e-9));
  CHECK(scaled[2] == doctest::Approx(4.0 * base[2]).epsilon(1e-9));
  CHECK(scaled[3] == doctest::Approx(4.0 * base[3]).epsilon(1e-9));
}

TEST_CASE("field-dependent armor permeability converges by Picard iteration") {
  CableSpec spec = mini_cable();
  spec.phase_current = 1500.0;  // drive the armor into visible saturation
  const Mesh2D mesh = mini_mesh(spec);
  MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  mats.armor_permeability = PermeabilityModel::FieldDependent(80.0, 300.0, 100.0, 4.0, 3.0);
  SystemOptions opt;
  opt.bonding = Bonding::solid;
  opt.armor_treatment = ArmorTreatment::plain_2d;
  opt.excitation.phase_currents = ExcitationSpec::balanced(spec.phase_current);
  Solver2D solver(mesh, spec, mats, opt);
  const SolverStats stats = solver.solve();
  CHECK(stats.picard_iterations >= 2);
  CHECK(stats.picard_iterations <= 25);
  CHECK(stats.residual <= 1e-8);
}
