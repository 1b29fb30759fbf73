#include <doctest.h>

#include <cmath>
#include <set>

#include "cablefem/em_solver.hpp"
#include "cablefem/meshing.hpp"

using namespace cablefem;

namespace {
constexpr double kPi = 3.14159265358979323846;

CableSpec load_data_cable(int i) {
  return load_cable_spec(std::string(CABLEFEM_DATA_DIR) + "/cables/cable" + std::to_string(i) +
                         ".spec");
}

MeshControls coarse_controls(const CableSpec& spec, int layers = 0) {
  MeshControls c;
  c.layers_per_cp = layers > 0 ? layers : std::max(16, min_layers_per_cp(spec));
  c.size_conductor = spec.conductor_radius / 2.5;
  c.size_sheath = spec.sheath_thickness;
  c.size_wire = spec.armor_wire_radius() / 1.2;
  c.size_filler = spec.armor_radius / 6.0;
  c.outer_boundary_factor = 3.0;
  return c;
}
}  // namespace

TEST_CASE("cross section carries every region of cable 1") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c;
  c.layers_per_cp = std::max(40, min_layers_per_cp(spec));
  const Mesh2D m = build_cross_section(spec, c);

  std::set<std::string> names;
  for (const auto& tag : m.region) names.insert(region_name(tag));
  // 3 conductors + 3 sheaths + 28 wires + filler + air.
  CHECK(names.size() == 3 + 3 + 28 + 2);
  CHECK(names.count("conductor_0") == 1);
  CHECK(names.count("sheath_2") == 1);
  CHECK(names.count("wire_27") == 1);
  CHECK(names.count("filler") == 1);
  CHECK(names.count("air") == 1);

  // Positively oriented everywhere.
  for (size_t t = 0; t < m.triangles.size(); ++t) CHECK(m.triangle_area(t) > 0.0);
}

TEST_CASE("conductor and wire areas match the circles at default size") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c;
  c.layers_per_cp = std::max(40, min_layers_per_cp(spec));
  const Mesh2D m = build_cross_section(spec, c);
  const double rc = spec.conductor_radius;
  for (int i = 0; i < 3; ++i) {
    const double area = m.total_area({RegionKind::conductor, i});
    CHECK(area == doctest::Approx(kPi * rc * rc).epsilon(5e-3));
  }
  const double rw = spec.armor_wire_radius();
  const double wire_area = m.total_area({RegionKind::armor_wire, 13});
  CHECK(wire_area == doctest::Approx(kPi * rw * rw).epsilon(2e-2));
  // Sheath annulus.
  const double sheath_area = m.total_area({RegionKind::sheath, 0});
  const double exact = kPi * (std::pow(spec.sheath_outer_radius(), 2) -
                              std::pow(spec.sheath_inner_radius(), 2));
  CHECK(sheath_area == doctest::Approx(exact).epsilon(2e-2));
}

TEST_CASE("coarser target size yields fewer triangles") {
  const CableSpec spec = load_data_cable(1);
  MeshControls fine = coarse_controls(spec);
  MeshControls coarse = fine;
  coarse.size_conductor *= 2.0;
  coarse.size_wire *= 2.0;
  coarse.size_filler *= 2.0;
  const Mesh2D mf = build_cross_section(spec, fine);
  const Mesh2D mc = build_cross_section(spec, coarse);
  CHECK(mc.triangles.size() < mf.triangles.size());
}

TEST_CASE("node budget violations raise a budget error with counts") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c = coarse_controls(spec);
  c.max_nodes = 200;
  CHECK_THROWS_WITH_AS(build_cross_section(spec, c),
                       doctest::Contains("budget"), std::runtime_error);
}

TEST_CASE("twist angle field blends between core and armor rotation") {
  const CableSpec spec = load_data_cable(1);
  double r1, r2;
  band_radii(spec, r1, r2);
  const double cp = crossing_pitch(spec.armor_lay_length, spec.core_lay_length);
  // z = 0 is untwisted everywhere.
  for (double r : {0.0, r1, 0.5 * (r1 + r2), r2, 2.0 * r2}) {
    CHECK(twist_angle_field(spec, r, 0.0) == doctest::Approx(0.0));
  }
  // Armor side does a full turn per armor lay length.
  CHECK(twist_angle_field(spec, r2 * 1.2, spec.armor_lay_length) ==
        doctest::Approx(-2.0 * kPi).epsilon(1e-12));
  // Blend midpoint at z = CP sits halfway between theta and theta - 2*pi.
  const double theta = rotation_angle(cp, spec.core_lay_length, spec.core_handedness);
  const double mid = twist_angle_field(spec, 0.5 * (r1 + r2), cp);
  CHECK(mid == doctest::Approx(0.5 * (theta + theta - 2.0 * kPi)).epsilon(1e-12));
  CHECK_THROWS_AS(twist_angle_field(spec, -1.0, 0.0), std::domain_error);
}

TEST_CASE("sweep of an untwisted cable is a straight extrusion") {
  CableSpec spec = load_data_cable(1);
  spec.core_lay_length = std::numeric_limits<double>::infinity();
  spec.armor_lay_length = std::numeric_limits<double>::infinity();
  MeshControls c = coarse_controls(spec, 16);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = 4;
  po.untwisted_length = 0.1;
  const TwistPlan plan_u = plan(spec, Strategy::full_periodic, po);
  const Mesh3D m3 = sweep(m2, spec, plan_u);

  CHECK(m3.n_planes == 5);
  // Layer nodes keep their (x, y) up to the band Steiner points.
  const int n2 = m3.nodes_per_plane;
  CHECK(n2 == static_cast<int>(m2.nodes.size()));
  for (int l = 1; l < m3.n_planes; ++l) {
    for (int i = 0; i < n2; i += 37) {
      CHECK((m3.nodes[l * n2 + i].head<2>() - m3.nodes[i].head<2>()).norm() < 1e-15);
    }
  }
  const QualityReport q = quality_report(m3);
  CHECK(q.max_shear_angle == doctest::Approx(0.0));
  CHECK(q.min_volume > 0.0);
}

TEST_CASE("short periodic sweep ends theta-congruent (cable 1)") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c = coarse_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = c.layers_per_cp;
  const TwistPlan p = plan(spec, Strategy::short_periodic, po);
  const Mesh3D m3 = sweep(m2, spec, p);
  CHECK(m3.boundary_mode == BoundaryMode::periodic_rotated);

  // Armor-side node check: the zL armor nodes equal the z0 nodes rotated by
  // theta (pi/2 for cable 1).
  const auto match = Solver3D::match_end_faces(m3, 1e-9);
  CHECK(match.n_matched_edges > 0);
  CHECK(match.worst_distance < 1e-9);

  // Node count bookkeeping: extrusion plus one Steiner node per band wedge.
  const size_t expect =
      m2.nodes.size() * (p.n_layers + 1) + static_cast<size_t>(m2.band_slots) * p.n_layers;
  CHECK(m3.nodes.size() == expect);
}

TEST_CASE("cross-section areas are invariant along the sweep") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c = coarse_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = c.layers_per_cp;
  const TwistPlan p = plan(spec, Strategy::short_periodic, po);
  const Mesh3D m3 = sweep(m2, spec, p);

  // Each layer's in-plane map is a rotation, so the tagged area of every node
  // plane matches the base cross section to roundoff.
  const int n2 = m3.nodes_per_plane;
  for (const RegionTag tag : {RegionTag{RegionKind::conductor, 0},
                              RegionTag{RegionKind::armor_wire, 7},
                              RegionTag{RegionKind::sheath, 1}}) {
    const double base_area = m2.total_area(tag);
    for (int l = 0; l <= p.n_layers; l += p.n_layers / 4) {
      double area = 0.0;
      for (size_t t = 0; t < m2.triangles.size(); ++t) {
        if (!(m2.region[t] == tag)) continue;
        const auto& v = m2.triangles[t];
        const Eigen::Vector2d a = m3.nodes[l * n2 + v[0]].head<2>();
        const Eigen::Vector2d b = m3.nodes[l * n2 + v[1]].head<2>();
        const Eigen::Vector2d cpt = m3.nodes[l * n2 + v[2]].head<2>();
        area += 0.5 * ((b - a).x() * (cpt - a).y() - (b - a).y() * (cpt - a).x());
      }
      CHECK(area == doctest::Approx(base_area).epsilon(1e-12));
    }
    // The chordal tet volumes approach area * length from below; at this
    // axial resolution they already agree to a percent.
    double vol = 0.0;
    for (size_t t = 0; t < m3.tets.size(); ++t)
      if (m3.region[t] == tag) vol += m3.tet_volume(static_cast<int>(t));
    CHECK(vol == doctest::Approx(base_area * p.length).epsilon(1e-2));
  }
}

TEST_CASE("full periodic sweep ends translate-congruent and layer refinement stays valid") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c = coarse_controls(spec);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = c.layers_per_cp;
  const TwistPlan p = plan(spec, Strategy::full_periodic, po);
  const Mesh3D m3 = sweep(m2, spec, p);
  CHECK(m3.boundary_mode == BoundaryMode::periodic_translate);
  const auto match = Solver3D::match_end_faces(m3, 1e-9);
  CHECK(match.worst_distance < 1e-9);
  CHECK(quality_report(m3).min_volume > 0.0);

  // Doubling the axial resolution cannot flip a volume negative.
  MeshControls c2x = c;
  c2x.layers_per_cp *= 2;
  const Mesh2D m2b = build_cross_section(spec, c2x);
  PlanOptions po2;
  po2.layers_per_cp = c2x.layers_per_cp;
  const Mesh3D m3b = sweep(m2b, spec, plan(spec, Strategy::full_periodic, po2));
  CHECK(quality_report(m3b).min_volume > 0.0);
}

TEST_CASE("halving the layer count doubles the per-layer shear") {
  const CableSpec spec = load_data_cable(2);
  const int base = std::max(32, 2 * ((min_layers_per_cp(spec) + 1) / 2));
  MeshControls c = coarse_controls(spec, 2 * base);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = 2 * base;
  const QualityReport fine = quality_report(sweep(m2, spec, plan(spec, Strategy::short_periodic, po)));

  MeshControls ch = coarse_controls(spec, base);
  const Mesh2D m2h = build_cross_section(spec, ch);
  PlanOptions poh;
  poh.layers_per_cp = base;
  const QualityReport coarse =
      quality_report(sweep(m2h, spec, plan(spec, Strategy::short_periodic, poh)));
  CHECK(coarse.max_shear_angle == doctest::Approx(2.0 * fine.max_shear_angle).epsilon(0.05));
}

TEST_CASE("band construction requires the locked layer count") {
  const CableSpec spec = load_data_cable(1);
  MeshControls c = coarse_controls(spec, 16);
  const Mesh2D m2 = build_cross_section(spec, c);
  PlanOptions po;
  po.layers_per_cp = 24;  // mismatched with the 16-slot band
  const TwistPlan p = plan(spec, Strategy::short_periodic, po);
  CHECK_THROWS(sweep(m2, spec, p));
}
