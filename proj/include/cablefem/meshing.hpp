// Cross-section meshing and the twisted sweep.
//
// The 2D mesh is templates (polar disks and annuli) for conductors, sheaths,
// wires, band and air, glued by constrained-Delaunay filler regions. For the
// sweep, everything inside the band annulus rotates rigidly with the cores
// and everything outside rotates rigidly with the armor; the band absorbs the
// relative twist, reconnecting by exactly one ring slot per axial layer so
// that every node plane is congruent and the end faces match the plan's
// boundary map by construction.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "cablefem/cable_model.hpp"
#include "cablefem/twist_geometry.hpp"

namespace cablefem {

enum class RegionKind { conductor, sheath, armor_wire, filler, air };

struct RegionTag {
  RegionKind kind = RegionKind::filler;
  int index = -1;  // conductor/sheath 0..2, armor_wire 0..N-1, else -1
  bool operator==(const RegionTag& o) const { return kind == o.kind && index == o.index; }
};

std::string region_name(const RegionTag& tag);

struct Mesh2D {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<int, 3>> triangles;  // ccw
  std::vector<RegionTag> region;              // per triangle
  std::vector<std::array<int, 2>> outer_boundary_edges;
  double outer_radius = 0.0;

  // Twist-band bookkeeping for the sweep. Ring nodes are listed in ascending
  // angle with entry 0 on the +x axis; both rings carry band_slots nodes.
  std::vector<int> band_inner_ring;
  std::vector<int> band_outer_ring;
  std::vector<int> band_triangles;  // indices into triangles; replaced by the sweep
  double band_r_inner = 0.0;
  double band_r_outer = 0.0;
  int band_slots = 0;

  double total_area(const RegionTag& tag) const;
  double triangle_area(int t) const;
};

struct MeshControls {
  // Target element sizes in meters; 0 selects a geometry-scaled default.
  double size_conductor = 0.0;
  double size_sheath = 0.0;
  double size_wire = 0.0;   // default wire_radius/3 (skin-depth resolution)
  double size_filler = 0.0;
  double outer_boundary_factor = 4.0;  // air radius = factor * armor_radius
  int layers_per_cp = 40;              // axial layers per crossing pitch
  int max_nodes = 2000000;
  double radius_edge_bound = 1.35;
};

// Minimum layers_per_cp for which the band ring polygons of this cable clear
// the sheath and wire circles (the band has exactly layers_per_cp slots).
int min_layers_per_cp(const CableSpec& spec);

Mesh2D build_cross_section(const CableSpec& spec, const MeshControls& controls);

// Isolated round conductor in air, used by the skin-effect oracle checks.
Mesh2D build_single_conductor_mesh(double radius, double size, double outer_radius);

// Blended in-plane rotation angle of the cross section at (r, z): rigid core
// rotation inside the band, rigid armor rotation outside, cubic blend across.
double twist_angle_field(const CableSpec& spec, double r, double z);

// Band annulus radii used by both the mesher and twist_angle_field.
void band_radii(const CableSpec& spec, double& r_inner, double& r_outer);

struct Mesh3D {
  std::vector<Eigen::Vector3d> nodes;
  std::vector<std::array<int, 4>> tets;  // positive volume order
  std::vector<RegionTag> region;         // per tet
  std::vector<std::array<int, 3>> z0_face;
  std::vector<std::array<int, 3>> zL_face;
  std::vector<std::array<int, 3>> lateral_face;  // outer cylinder (field = 0)
  int n_planes = 0;         // node planes = n_layers + 1
  int nodes_per_plane = 0;  // 2D node count; band Steiner nodes follow after
  double length = 0.0;
  double theta = 0.0;  // end-face rotation used by the plan (0 for translate)
  BoundaryMode boundary_mode = BoundaryMode::none;
  double core_twist_per_layer = 0.0;   // radians, signed
  double armor_twist_per_layer = 0.0;

  double tet_volume(int t) const;
};

// Sweeps the cross section along the plan. Throws a quality error naming the
// worst element when any element volume is non-positive.
Mesh3D sweep(const Mesh2D& mesh2d, const CableSpec& spec, const TwistPlan& plan);

struct QualityReport {
  double min_volume = 0.0;
  double min_volume_ratio = 0.0;  // worst tet volume / its ideal equilateral volume
  double max_shear_angle = 0.0;   // largest per-layer relative twist, radians
  std::size_t n_nodes = 0;
  std::size_t n_elements = 0;
  std::size_t n_edges = 0;
  std::string summary() const;
};

QualityReport quality_report(const Mesh3D& mesh);

// Versioned text container (node, element, region and facet tables).
void export_mesh(const Mesh2D& m, const std::string& path);
void export_mesh(const Mesh3D& m, const std::string& path);

}  // namespace cablefem
