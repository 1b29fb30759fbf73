#include <doctest.h>

#include <cmath>

#include "cablefem/em_solver.hpp"
#include "cablefem/postprocess.hpp"

using namespace cablefem;

namespace {
constexpr double kPi = 3.14159265358979323846;

// Tiny six-wire cable sized so 3D runs stay unit-test fast.
CableSpec micro_cable() {
  CableSpec s;
  s.name = "micro";
  s.voltage_class = 6e3;
  s.conductor_material = ConductorMaterial::copper;
  s.conductor_radius = 0.002;
  s.sheath_thickness = 0.0005;
  s.sheath_radius = 0.0055;
  s.core_lay_length = 0.9;
  s.armor_wire_diameter = 0.003;
  s.armor_wire_count = 6;
  s.armor_radius = 0.020;
  s.armor_lay_length = 0.3;
  s.frequency = 50.0;
  s.phase_current = 300.0;
  return s;
}

MeshControls micro_controls(const CableSpec& s) {
  MeshControls c;
  c.layers_per_cp = std::max(12, min_layers_per_cp(s));
  c.size_conductor = s.conductor_radius / 1.5;
  c.size_sheath = s.sheath_thickness;
  c.size_wire = s.armor_wire_radius() / 1.4;
  c.size_filler = s.armor_radius / 5.0;
  c.outer_boundary_factor = 2.5;
  return c;
}

SystemOptions micro_options(const CableSpec& s, Bonding b = Bonding::solid) {
  SystemOptions o;
  o.bonding = b;
  o.armor_treatment = ArmorTreatment::wires_3d;
  o.excitation.phase_currents = ExcitationSpec::balanced(s.phase_current);
  return o;
}
}  // namespace

TEST_CASE("zero excitation gives the zero solution") {
  CableSpec spec = micro_cable();
  spec.phase_current = 0.0;
  const MeshControls mc = micro_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, mc);
  PlanOptions po;
  po.layers_per_cp = mc.layers_per_cp;
  const Mesh3D m3 = sweep(m2, spec, plan(spec, Strategy::short_periodic, po));
  Solver3D solver(m3, spec, MaterialSet::Defaults(spec.conductor_material), micro_options(spec));
  solver.solve();
  for (const auto& tag : solver.conducting_regions()) {
    CHECK(std::abs(solver.region_current(tag)) < 1e-12);
    CHECK(solver.joule_loss(tag) < 1e-20);
  }
}

TEST_CASE("straight 3D model reproduces the 2D solution") {
  CableSpec spec = micro_cable();
  spec.core_lay_length = std::numeric_limits<double>::infinity();
  spec.armor_lay_length = std::numeric_limits<double>::infinity();
  const MeshControls mc = micro_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, mc);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);

  SystemOptions opt2d = micro_options(spec);
  opt2d.armor_treatment = ArmorTreatment::plain_2d;
  Solver2D s2(m2, spec, mats, opt2d);
  s2.solve();
  CableReport r2 = build_report(s2, spec);

  PlanOptions po;
  po.layers_per_cp = 4;
  po.untwisted_length = 0.05;
  const Mesh3D m3 = sweep(m2, spec, plan(spec, Strategy::full_periodic, po));
  Solver3D s3(m3, spec, mats, micro_options(spec));
  s3.solve();
  CableReport r3 = build_report(s3, spec);

  CHECK(r3.r_ohm_per_km == doctest::Approx(r2.r_ohm_per_km).epsilon(0.01));
  CHECK(r3.x_ohm_per_km == doctest::Approx(r2.x_ohm_per_km).epsilon(0.01));
  CHECK(r3.lambda1 == doctest::Approx(r2.lambda1).epsilon(0.01));
  // Net sheath currents agree as well.
  for (int i = 0; i < 3; ++i) {
    CHECK(r3.sheath_current[i] == doctest::Approx(r2.sheath_current[i]).epsilon(0.01));
  }
}

TEST_CASE("twisted short periodic model: armor currents vanish, power balances") {
  const CableSpec spec = micro_cable();
  const MeshControls mc = micro_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, mc);
  PlanOptions po;
  po.layers_per_cp = mc.layers_per_cp;
  const TwistPlan p = plan(spec, Strategy::short_periodic, po);
  const Mesh3D m3 = sweep(m2, spec, p);
  const MaterialSet mats = MaterialSet::Defaults(spec.conductor_material);
  Solver3D solver(m3, spec, mats, micro_options(spec));
  const SolverStats stats = solver.solve();
  CHECK(stats.residual <= 1e-8);

  // Phase currents echo the excitation.
  const auto balanced = ExcitationSpec::balanced(spec.phase_current);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(solver.region_current({RegionKind::conductor, i}) - balanced[i]) <
          1e-8 * spec.phase_current);
  }
  // Zero net axial current in every wire despite solid bonding.
  for (int w = 0; w < spec.armor_wire_count; ++w) {
    CHECK(std::abs(solver.region_current({RegionKind::armor_wire, w})) <
          1e-3 * spec.phase_current);
  }
  // Power balance including the regularization bookkeeping.
  double loss = solver.regularization_loss();
  for (const auto& tag : solver.conducting_regions()) {
    loss += solver.joule_loss(tag) + solver.magnetic_loss(tag);
  }
  CHECK(solver.source_power().real() == doctest::Approx(loss).epsilon(5e-3));

  // Ampere: circulation around one phase at mid-length, loop in the
  // structured insulation annulus at its harmonic radius.
  const double span = spec.sheath_inner_radius() - spec.conductor_radius;
  const int ins_layers =
      std::max(1, static_cast<int>(std::lround(span / (2.0 * mc.size_conductor))));
  const double d = span / ins_layers;
  const double a = spec.conductor_radius + (ins_layers / 2) * d;
  const double r_loop = ins_layers > 1 ? d / std::log((a + d) / a)
                                       : span / std::log(spec.sheath_inner_radius() /
                                                         spec.conductor_radius);
  const double z_mid = 0.5 * p.length;
  const double ang = core_twist(spec, z_mid);
  const Eigen::Vector2d center =
      spec.trefoil_radius() * Eigen::Vector2d(std::cos(ang), std::sin(ang));
  const Complex circ = solver.ampere_circulation(center, r_loop, z_mid);
  CHECK(std::abs(circ - balanced[0]) < 0.01 * spec.phase_current);
}

TEST_CASE("rotated map with zero angle equals the translate map") {
  CableSpec spec = micro_cable();
  spec.core_lay_length = std::numeric_limits<double>::infinity();
  spec.armor_lay_length = std::numeric_limits<double>::infinity();
  const MeshControls mc = micro_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, mc);
  PlanOptions po;
  po.layers_per_cp = 3;
  po.untwisted_length = 0.04;
  Mesh3D translate = sweep(m2, spec, plan(spec, Strategy::full_periodic, po));
  Mesh3D rotated = translate;
  rotated.boundary_mode = BoundaryMode::periodic_rotated;
  rotated.theta = 0.0;
  const auto a = Solver3D::match_end_faces(translate);
  const auto b = Solver3D::match_end_faces(rotated);
  CHECK(a.n_matched_edges == b.n_matched_edges);
  CHECK(a.worst_distance == doctest::Approx(b.worst_distance));
}
