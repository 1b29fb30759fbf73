#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cablefem/delaunay.hpp"
#include "cablefem/meshing.hpp"

namespace cablefem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Builder {
  std::vector<Eigen::Vector2d> pts;
  std::vector<std::array<int, 3>> tris;
  std::vector<RegionTag> tags;

  int add_point(const Eigen::Vector2d& p) {
    pts.push_back(p);
    return static_cast<int>(pts.size()) - 1;
  }

  void add_tri(int a, int b, int c, RegionTag tag) {
    if (cdt::orient2d(pts[a], pts[b], pts[c]) < 0.0) std::swap(b, c);
    tris.push_back({a, b, c});
    tags.push_back(tag);
  }

  std::vector<int> ring(const Eigen::Vector2d& c, double r, int n, double a0) {
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) {
      const double a = a0 + kTwoPi * i / n;
      ids[i] = add_point(c + r * Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
    return ids;
  }

  // Polar disk: center fan plus structured rings; returns the boundary ring.
  std::vector<int> disk(const Eigen::Vector2d& c, double r, int n_theta, int n_rings,
                        RegionTag tag, double a0) {
    const int center = add_point(c);
    std::vector<int> prev;
    for (int j = 1; j <= n_rings; ++j) {
      std::vector<int> cur = ring(c, r * j / n_rings, n_theta, a0);
      if (j == 1) {
        for (int i = 0; i < n_theta; ++i) add_tri(center, cur[i], cur[(i + 1) % n_theta], tag);
      } else {
        stitch(prev, cur, tag);
      }
      prev = std::move(cur);
    }
    return prev;
  }

  // Quad strip between two matched rings, split along (inner_i, outer_{i+1}).
  void stitch(const std::vector<int>& inner, const std::vector<int>& outer, RegionTag tag) {
    const int n = static_cast<int>(inner.size());
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      add_tri(inner[i], inner[j], outer[j], tag);
      add_tri(inner[i], outer[j], outer[i], tag);
    }
  }

  // Structured annulus from an existing inner ring through the given radii.
  std::vector<int> annulus(const Eigen::Vector2d& c, std::vector<int> inner,
                           const std::vector<double>& radii, RegionTag tag, double a0) {
    const int n = static_cast<int>(inner.size());
    for (double r : radii) {
      std::vector<int> cur = ring(c, r, n, a0);
      stitch(inner, cur, tag);
      inner = std::move(cur);
    }
    return inner;
  }
};

std::vector<double> uniform_radii(double r_in, double r_out, int n) {
  std::vector<double> out;
  for (int j = 1; j <= n; ++j) out.push_back(r_in + (r_out - r_in) * j / n);
  return out;
}

// Geometric radial progression with given first spacing and growth.
std::vector<double> graded_radii(double r_in, double r_out, double first, double growth) {
  std::vector<double> out;
  double r = r_in, t = first;
  while (r + 1.5 * t < r_out) {
    r += t;
    out.push_back(r);
    t *= growth;
  }
  out.push_back(r_out);
  return out;
}

int ring_count_for(double radius, double spacing, int min_count) {
  return std::max(min_count, static_cast<int>(std::lround(kTwoPi * radius / spacing)));
}

struct Sizes {
  double conductor, sheath, wire, filler, gap;
};

Sizes resolve_sizes(const CableSpec& spec, const MeshControls& c) {
  Sizes s{};
  const double r_c = spec.conductor_radius;
  const double r_w = spec.armor_wire_radius();
  s.conductor = c.size_conductor > 0 ? c.size_conductor : r_c / 5.0;
  s.sheath = c.size_sheath > 0 ? c.size_sheath : spec.sheath_thickness / 2.0;
  s.wire = c.size_wire > 0 ? c.size_wire : r_w / 3.0;
  double r1, r2;
  band_radii(spec, r1, r2);
  const double gap_band = spec.armor_inner_radius() - (spec.trefoil_radius() + spec.sheath_outer_radius());
  s.filler = c.size_filler > 0 ? c.size_filler : std::clamp(0.9 * gap_band, s.conductor, 8.0 * s.conductor);
  const double wire_gap = kTwoPi * spec.armor_radius / spec.armor_wire_count - 2.0 * r_w;
  s.gap = std::max(1.2 * s.wire, 0.9 * wire_gap);
  return s;
}

}  // namespace

std::string region_name(const RegionTag& tag) {
  switch (tag.kind) {
    case RegionKind::conductor: return "conductor_" + std::to_string(tag.index);
    case RegionKind::sheath: return "sheath_" + std::to_string(tag.index);
    case RegionKind::armor_wire: return "wire_" + std::to_string(tag.index);
    case RegionKind::filler: return "filler";
    case RegionKind::air: return "air";
  }
  return "?";
}

double Mesh2D::triangle_area(int t) const {
  const auto& v = triangles[t];
  const Eigen::Vector2d a = nodes[v[0]], b = nodes[v[1]], c = nodes[v[2]];
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double Mesh2D::total_area(const RegionTag& tag) const {
  double sum = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t)
    if (region[t] == tag) sum += triangle_area(static_cast<int>(t));
  return sum;
}

void band_radii(const CableSpec& spec, double& r_inner, double& r_outer) {
  const double bundle_out = spec.trefoil_radius() + spec.sheath_outer_radius();
  const double armor_in = spec.armor_inner_radius();
  const double gap = armor_in - bundle_out;
  if (gap <= 0.0) throw std::runtime_error("band_radii: cable bundle does not fit in the armor");
  r_inner = bundle_out + 0.25 * gap;
  r_outer = armor_in - 0.25 * gap;
}

int min_layers_per_cp(const CableSpec& spec) {
  double r1, r2;
  band_radii(spec, r1, r2);
  const double bundle_out = spec.trefoil_radius() + spec.sheath_outer_radius();
  const double armor_in = spec.armor_inner_radius();
  auto m_for = [](double radius, double clearance) {
    const double cos_lim = 1.0 - 0.6 * clearance / radius;
    if (cos_lim <= 0.0) return 8;
    return static_cast<int>(std::ceil(kPi / std::acos(cos_lim)));
  };
  const int m1 = m_for(r1, r1 - bundle_out);
  const int m2 = m_for(r2, armor_in - r2);
  return std::max({8, m1, m2});
}

double twist_angle_field(const CableSpec& spec, double r, double z) {
  if (r < 0.0) throw std::domain_error("twist_angle_field: r must be >= 0");
  double r1, r2;
  band_radii(spec, r1, r2);
  const double core = core_twist(spec, z);
  const double armor = armor_twist(spec, z);
  if (r <= r1) return core;
  if (r >= r2) return armor;
  const double s = (r - r1) / (r2 - r1);
  const double w = 1.0 - (3.0 * s * s - 2.0 * s * s * s);
  return w * core + (1.0 - w) * armor;
}

Mesh2D build_cross_section(const CableSpec& spec, const MeshControls& controls) {
  {
    const auto violations = validate_spec(spec);
    if (!violations.empty()) {
      throw std::invalid_argument("build_cross_section: invalid cable spec: " + violations[0]);
    }
  }
  const int m_min = min_layers_per_cp(spec);
  if (controls.layers_per_cp < m_min) {
    throw std::invalid_argument("build_cross_section: layers_per_cp " +
                                std::to_string(controls.layers_per_cp) +
                                " is below the geometric minimum " + std::to_string(m_min) +
                                " for this cable (band ring polygons would cut the material circles)");
  }
  const Sizes sz = resolve_sizes(spec, controls);
  const double r_c = spec.conductor_radius;
  const double r_t = spec.trefoil_radius();
  const double r_w = spec.armor_wire_radius();
  double r1, r2;
  band_radii(spec, r1, r2);
  const int m = controls.layers_per_cp;
  const double r3 = spec.armor_outer_radius() + 0.75 * r_w;
  const double r_out = controls.outer_boundary_factor * spec.armor_radius;
  if (r_out <= r3) throw std::invalid_argument("build_cross_section: outer_boundary_factor too small");

  Builder b;

  // Core stacks: conductor disk, insulation annulus, sheath annulus. The
  // 40-node floor keeps the default polygonized conductor area within 0.5%;
  // explicit size overrides are trusted.
  const int n_theta_core = ring_count_for(r_c, sz.conductor, controls.size_conductor > 0 ? 16 : 40);
  const int rings_c = std::max(2, static_cast<int>(std::lround(r_c / sz.conductor)));
  std::vector<std::vector<int>> sheath_outer_rings;
  for (int i = 0; i < 3; ++i) {
    const double a0 = kTwoPi * i / 3.0;
    const Eigen::Vector2d c = r_t * Eigen::Vector2d(std::cos(a0), std::sin(a0));
    auto cond_ring = b.disk(c, r_c, n_theta_core, rings_c, {RegionKind::conductor, i}, a0);
    const double ins_span = spec.sheath_inner_radius() - r_c;
    const int ins_layers = std::max(1, static_cast<int>(std::lround(ins_span / (2.0 * sz.conductor))));
    auto ins_ring = b.annulus(c, cond_ring,
                              uniform_radii(r_c, spec.sheath_inner_radius(), ins_layers),
                              {RegionKind::filler, -1}, a0);
    const int sheath_layers =
        std::max(1, static_cast<int>(std::lround(spec.sheath_thickness / sz.sheath)));
    auto so_ring = b.annulus(c, ins_ring,
                             uniform_radii(spec.sheath_inner_radius(),
                                           spec.sheath_outer_radius(), sheath_layers),
                             {RegionKind::sheath, i}, a0);
    sheath_outer_rings.push_back(std::move(so_ring));
  }

  // Armor wires.
  const int n_theta_wire = ring_count_for(r_w, sz.wire, 12);
  const int rings_w = std::max(2, static_cast<int>(std::lround(r_w / sz.wire)));
  std::vector<std::vector<int>> wire_rings;
  for (int k = 0; k < spec.armor_wire_count; ++k) {
    const double a0 = kTwoPi * k / spec.armor_wire_count;
    const Eigen::Vector2d c = spec.armor_radius * Eigen::Vector2d(std::cos(a0), std::sin(a0));
    wire_rings.push_back(b.disk(c, r_w, n_theta_wire, rings_w, {RegionKind::armor_wire, k}, a0));
  }

  // Band rings (slot 0 on +x) and the band annulus template.
  Mesh2D out;
  std::vector<int> band_inner = b.ring(Eigen::Vector2d::Zero(), r1, m, 0.0);
  std::vector<int> band_outer = b.ring(Eigen::Vector2d::Zero(), r2, m, 0.0);
  const int band_tri_start = static_cast<int>(b.tris.size());
  b.stitch(band_inner, band_outer, {RegionKind::filler, -1});
  for (int t = band_tri_start; t < static_cast<int>(b.tris.size()); ++t)
    out.band_triangles.push_back(t);

  // Armor gap outer rim and graded air annulus out to the truncation circle.
  const int n_r3 = ring_count_for(r3, sz.gap, 32);
  std::vector<int> r3_ring = b.ring(Eigen::Vector2d::Zero(), r3, n_r3, 0.0);
  const double air_first = kTwoPi * r3 / n_r3;
  std::vector<int> outer_ring = b.annulus(Eigen::Vector2d::Zero(), r3_ring,
                                          graded_radii(r3, r_out, air_first, 1.7),
                                          {RegionKind::air, -1}, 0.0);

  // Constrained-Delaunay filler: the inner region between the sheaths and the
  // band, and the armor gap region between the band, the wires and the rim.
  cdt::Input in;
  std::vector<int> local_to_global;
  auto add_loop = [&](const std::vector<int>& loop) {
    const int base = static_cast<int>(in.points.size());
    for (int gid : loop) {
      in.points.push_back(b.pts[gid]);
      local_to_global.push_back(gid);
    }
    const int n = static_cast<int>(loop.size());
    for (int i = 0; i < n; ++i) {
      in.segments.push_back({base + i, base + (i + 1) % n});
      in.segment_splittable.push_back(0);
    }
  };
  for (const auto& ring : sheath_outer_rings) add_loop(ring);
  add_loop(band_inner);
  add_loop(band_outer);
  add_loop(r3_ring);
  for (const auto& ring : wire_rings) add_loop(ring);

  cdt::RegionSpec inner_region;
  inner_region.seed = Eigen::Vector2d::Zero();
  inner_region.tag = 0;
  inner_region.max_area = 0.5 * sz.filler * sz.filler;
  inner_region.refine = true;
  cdt::RegionSpec gap_region;
  const double gap_seed_angle = kPi / spec.armor_wire_count;
  gap_region.seed = 0.5 * (r2 + spec.armor_inner_radius()) *
                    Eigen::Vector2d(std::cos(gap_seed_angle), std::sin(gap_seed_angle));
  gap_region.tag = 1;
  gap_region.max_area = 0.5 * sz.gap * sz.gap;
  gap_region.refine = true;
  in.regions = {inner_region, gap_region};
  in.radius_edge_bound = controls.radius_edge_bound;
  in.max_points = controls.max_nodes;

  cdt::Output filler = cdt::triangulate(in);
  const int n_local_input = static_cast<int>(in.points.size());
  for (size_t i = n_local_input; i < filler.points.size(); ++i) {
    local_to_global.push_back(b.add_point(filler.points[i]));
  }
  for (size_t t = 0; t < filler.triangles.size(); ++t) {
    const auto& v = filler.triangles[t];
    b.add_tri(local_to_global[v[0]], local_to_global[v[1]], local_to_global[v[2]],
              {RegionKind::filler, -1});
  }

  if (static_cast<int>(b.pts.size()) > controls.max_nodes) {
    std::ostringstream os;
    os << "build_cross_section: node budget exceeded: " << b.pts.size() << " nodes, "
       << b.tris.size() << " triangles (budget " << controls.max_nodes << ")";
    throw std::runtime_error(os.str());
  }

  out.nodes = std::move(b.pts);
  out.triangles = std::move(b.tris);
  out.region = std::move(b.tags);
  out.band_inner_ring = std::move(band_inner);
  out.band_outer_ring = std::move(band_outer);
  out.band_r_inner = r1;
  out.band_r_outer = r2;
  out.band_slots = m;
  out.outer_radius = r_out;
  const int n_out = static_cast<int>(outer_ring.size());
  for (int i = 0; i < n_out; ++i) out.outer_boundary_edges.push_back({outer_ring[i], outer_ring[(i + 1) % n_out]});
  return out;
}

Mesh2D build_single_conductor_mesh(double radius, double size, double outer_radius) {
  if (!(radius > 0) || !(size > 0) || !(outer_radius > 2.0 * radius)) {
    throw std::invalid_argument("build_single_conductor_mesh: bad geometry");
  }
  Builder b;
  const int n_theta = ring_count_for(radius, size, 40);
  const int rings = std::max(3, static_cast<int>(std::lround(radius / size)));
  auto boundary = b.disk(Eigen::Vector2d::Zero(), radius, n_theta, rings,
                         {RegionKind::conductor, 0}, 0.0);
  const double first = kTwoPi * radius / n_theta;
  auto outer = b.annulus(Eigen::Vector2d::Zero(), boundary,
                         graded_radii(radius, outer_radius, first, 1.6),
                         {RegionKind::air, -1}, 0.0);
  Mesh2D out;
  out.nodes = std::move(b.pts);
  out.triangles = std::move(b.tris);
  out.region = std::move(b.tags);
  out.outer_radius = outer_radius;
  const int n = static_cast<int>(outer.size());
  for (int i = 0; i < n; ++i) out.outer_boundary_edges.push_back({outer[i], outer[(i + 1) % n]});
  return out;
}

}  // namespace cablefem
