#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cablefem/meshing.hpp"

namespace cablefem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

struct SweepBuilder {
  const Mesh2D& m2;
  const CableSpec& spec;
  const TwistPlan& plan;
  Mesh3D out;
  int n_layers = 0;
  int n2 = 0;           // 2D node count
  int m = 0;            // band slots
  int k_step = 0;       // band slot shift per layer (-1, 0, +1)
  std::vector<char> node_outer;            // 1 when the node sweeps with the armor
  std::vector<int> slot_shift;             // per plane, modulo m, >= 0
  std::unordered_map<uint64_t, int> outer_ring_edge;  // sorted 2D pair -> slot of predecessor
  std::unordered_set<int> band_tri_set;

  SweepBuilder(const Mesh2D& mesh2d, const CableSpec& s, const TwistPlan& p)
      : m2(mesh2d), spec(s), plan(p) {}

  int gid(int plane, int node2d) const { return plane * n2 + node2d; }

  void classify_nodes() {
    node_outer.assign(n2, 0);
    const double mid = 0.5 * (m2.band_r_inner + m2.band_r_outer);
    const double tol = 1e-9 * std::max(1.0, m2.outer_radius);
    // Filler Steiner points may sit between a ring polygon chord and its
    // circle; only the region between the two ring polygons must stay empty.
    const double chord_dip = m > 0 ? std::cos(kPi / m) : 1.0;
    for (int i = 0; i < n2; ++i) {
      const double r = m2.nodes[i].norm();
      if (r > m2.band_r_inner + tol && r < m2.band_r_outer * chord_dip - tol) {
        throw std::runtime_error("sweep: 2D node " + std::to_string(i) +
                                 " lies strictly inside the twist band");
      }
      node_outer[i] = r > mid ? 1 : 0;
    }
    for (int i : m2.band_inner_ring) node_outer[i] = 0;
    for (int i : m2.band_outer_ring) node_outer[i] = 1;
  }

  void compute_shifts() {
    slot_shift.assign(n_layers + 1, 0);
    if (m == 0) return;
    for (int l = 0; l <= n_layers; ++l) {
      const double z = plan.length * l / n_layers;
      const double delta = core_twist(spec, z) - armor_twist(spec, z);
      const double slots = delta * m / kTwoPi;
      const double rounded = std::llround(slots);
      if (std::abs(slots - rounded) > 1e-6) {
        throw std::runtime_error(
            "sweep: plan is not locked to the band grid (relative twist per plane is not a whole "
            "slot); use layers_per_cp equal to the band slot count");
      }
      slot_shift[l] = static_cast<int>(((static_cast<long long>(rounded) % m) + m) % m);
    }
    const double per_layer =
        (core_twist(spec, plan.length / n_layers) - armor_twist(spec, plan.length / n_layers)) *
        m / kTwoPi;
    k_step = static_cast<int>(std::llround(per_layer));
    if (std::abs(per_layer - k_step) > 1e-6 || std::abs(k_step) > 1) {
      throw std::runtime_error("sweep: band must reconnect by at most one slot per layer (got " +
                               std::to_string(per_layer) + ")");
    }
  }

  void build_nodes() {
    out.nodes.reserve(static_cast<size_t>(n_layers + 1) * n2 + static_cast<size_t>(n_layers) * m);
    for (int l = 0; l <= n_layers; ++l) {
      const double z = plan.length * l / n_layers;
      const double a_in = core_twist(spec, z);
      const double a_out = armor_twist(spec, z);
      const double ci = std::cos(a_in), si = std::sin(a_in);
      const double co = std::cos(a_out), so = std::sin(a_out);
      for (int i = 0; i < n2; ++i) {
        const Eigen::Vector2d& p = m2.nodes[i];
        if (node_outer[i]) {
          out.nodes.emplace_back(co * p.x() - so * p.y(), so * p.x() + co * p.y(), z);
        } else {
          out.nodes.emplace_back(ci * p.x() - si * p.y(), si * p.x() + ci * p.y(), z);
        }
      }
    }
  }

  void add_tet(int a, int b, int c, int d, RegionTag tag) {
    const Eigen::Vector3d& pa = out.nodes[a];
    const Eigen::Vector3d v1 = out.nodes[b] - pa;
    const Eigen::Vector3d v2 = out.nodes[c] - pa;
    const Eigen::Vector3d v3 = out.nodes[d] - pa;
    if (v1.cross(v2).dot(v3) < 0.0) std::swap(c, d);
    out.tets.push_back({a, b, c, d});
    out.region.push_back(tag);
  }

  // Diagonal flag of the lateral quad over 2D edge (u, v) between planes l and
  // l+1: true when the diagonal rises u@l -> v@l+1. Outer band-ring edges use
  // the helical rule so the band wedges tile the ring surface exactly; all
  // other quads use the smallest-global-vertex rule, which with plane-major
  // numbering reduces to comparing the 2D indices.
  bool quad_diag_rises(int u, int v) const {
    auto it = outer_ring_edge.find(pair_key(u, v));
    if (it != outer_ring_edge.end() && k_step != 0) {
      const int slot_u = it->second;  // slot of u along the ring
      const int pred = m2.band_outer_ring[slot_u];
      const bool u_is_pred = (pred == u);
      // k=+1: diagonal anchored at the ring predecessor's bottom node.
      // k=-1: anchored at the successor's bottom node.
      return (k_step > 0) ? u_is_pred : !u_is_pred;
    }
    return u < v;
  }

  void build_prisms() {
    // Precompute the helical-edge lookup: predecessor slot per ring edge.
    for (int j = 0; j < m; ++j) {
      const int u = m2.band_outer_ring[j];
      const int v = m2.band_outer_ring[(j + 1) % m];
      outer_ring_edge.emplace(pair_key(u, v), j);
    }
    for (int idx : m2.band_triangles) band_tri_set.insert(idx);

    for (int t = 0; t < static_cast<int>(m2.triangles.size()); ++t) {
      if (band_tri_set.count(t)) continue;
      const auto& tri = m2.triangles[t];
      const RegionTag tag = m2.region[t];
      bool f[3];
      for (int e = 0; e < 3; ++e) f[e] = quad_diag_rises(tri[e], tri[(e + 1) % 3]);

      for (int l = 0; l < n_layers; ++l) {
        const int a[3] = {gid(l, tri[0]), gid(l, tri[1]), gid(l, tri[2])};
        const int b[3] = {gid(l + 1, tri[0]), gid(l + 1, tri[1]), gid(l + 1, tri[2])};
        if ((f[0] && f[1] && f[2]) || (!f[0] && !f[1] && !f[2])) {
          // Cyclic diagonals (possible next to helical overrides): cone from
          // the prism centroid to its eight boundary triangles.
          Eigen::Vector3d cen = Eigen::Vector3d::Zero();
          for (int q = 0; q < 3; ++q) cen += out.nodes[a[q]] + out.nodes[b[q]];
          cen /= 6.0;
          const int c_id = static_cast<int>(out.nodes.size());
          out.nodes.push_back(cen);
          add_tet(c_id, a[0], a[1], a[2], tag);
          add_tet(c_id, b[0], b[2], b[1], tag);
          for (int e = 0; e < 3; ++e) {
            const int u = e, v = (e + 1) % 3;
            if (f[e]) {
              add_tet(c_id, a[u], a[v], b[v], tag);
              add_tet(c_id, a[u], b[v], b[u], tag);
            } else {
              add_tet(c_id, a[u], a[v], b[u], tag);
              add_tet(c_id, a[v], b[v], b[u], tag);
            }
          }
          continue;
        }
        // Rotate so the flags match (T,T,F) or (T,F,F).
        int r = 0;
        const int n_true = (f[0] ? 1 : 0) + (f[1] ? 1 : 0) + (f[2] ? 1 : 0);
        if (n_true == 2) {
          for (int s = 0; s < 3; ++s)
            if (f[s] && f[(s + 1) % 3] && !f[(s + 2) % 3]) r = s;
        } else {
          for (int s = 0; s < 3; ++s)
            if (f[s]) r = s;
        }
        const int A0 = a[r], A1 = a[(r + 1) % 3], A2 = a[(r + 2) % 3];
        const int B0 = b[r], B1 = b[(r + 1) % 3], B2 = b[(r + 2) % 3];
        if (n_true == 2) {
          add_tet(A0, A1, A2, B2, tag);
          add_tet(A0, A1, B2, B1, tag);
          add_tet(A0, B1, B2, B0, tag);
        } else {
          add_tet(A0, A1, A2, B1, tag);
          add_tet(A0, A2, B2, B1, tag);
          add_tet(A0, B0, B1, B2, tag);
        }
      }
    }
  }

  int in_id(int plane, int slot) const {
    return gid(plane, m2.band_inner_ring[((slot % m) + m) % m]);
  }
  int out_id(int plane, int slot) const {
    return gid(plane, m2.band_outer_ring[((slot % m) + m) % m]);
  }

  // Band annulus triangulation at a node plane; also used for the end facets.
  void plane_pattern(int plane, std::vector<std::array<int, 3>>& tris) const {
    const int s = slot_shift[plane];
    for (int j = 0; j < m; ++j) {
      const int i0 = in_id(plane, j), i1 = in_id(plane, j + 1);
      const int o0 = out_id(plane, j + s), o1 = out_id(plane, j + s + 1);
      tris.push_back({i0, i1, o1});
      tris.push_back({i0, o1, o0});
    }
  }

  void build_band() {
    if (m == 0) return;
    const RegionTag tag{RegionKind::filler, -1};
    for (int l = 0; l < n_layers; ++l) {
      const int s = slot_shift[l];
      for (int j = 0; j < m; ++j) {
        const int b = j + s;
        // Wedge corners on plane l and plane l+1.
        const int i0 = in_id(l, j), i1 = in_id(l, j + 1);
        const int o0 = out_id(l, b), o1 = out_id(l, b + 1);
        const int I0 = in_id(l + 1, j), I1 = in_id(l + 1, j + 1);
        const int O0 = out_id(l + 1, b + k_step), O1 = out_id(l + 1, b + 1 + k_step);

        Eigen::Vector3d cen = Eigen::Vector3d::Zero();
        for (int q : {i0, i1, o0, o1, I0, I1, O0, O1}) cen += out.nodes[q];
        cen /= 8.0;
        const int c_id = static_cast<int>(out.nodes.size());
        out.nodes.push_back(cen);

        // Bottom and top: the plane patterns.
        add_tet(c_id, i0, i1, o1, tag);
        add_tet(c_id, i0, o1, o0, tag);
        add_tet(c_id, I0, I1, O1, tag);
        add_tet(c_id, I0, O1, O0, tag);
        // Inner lateral: conforms to the inner prism's min-vertex split.
        const int u = m2.band_inner_ring[j], v = m2.band_inner_ring[(j + 1) % m];
        if (quad_diag_rises(u, v)) {
          add_tet(c_id, i0, i1, I1, tag);
          add_tet(c_id, i0, I1, I0, tag);
        } else {
          add_tet(c_id, i0, i1, I0, tag);
          add_tet(c_id, i1, I1, I0, tag);
        }
        // Outer lateral: helical (or min-vertex when untwisted).
        if (k_step > 0) {
          add_tet(c_id, o0, o1, O0, tag);
          add_tet(c_id, o1, O1, O0, tag);
        } else if (k_step < 0) {
          add_tet(c_id, o0, o1, O1, tag);
          add_tet(c_id, o0, O1, O0, tag);
        } else {
          const int uo = m2.band_outer_ring[j], vo = m2.band_outer_ring[(j + 1) % m];
          if (quad_diag_rises(uo, vo)) {
            add_tet(c_id, o0, o1, O1, tag);
            add_tet(c_id, o0, O1, O0, tag);
          } else {
            add_tet(c_id, o0, o1, O0, tag);
            add_tet(c_id, o1, O1, O0, tag);
          }
        }
        // Cuts: diagonal from the inner bottom corner to the outer top corner.
        add_tet(c_id, i0, o0, O0, tag);
        add_tet(c_id, i0, O0, I0, tag);
        add_tet(c_id, i1, o1, O1, tag);
        add_tet(c_id, i1, O1, I1, tag);
      }
    }
  }

  void build_facets() {
    for (int t = 0; t < static_cast<int>(m2.triangles.size()); ++t) {
      if (band_tri_set.count(t)) continue;
      const auto& tri = m2.triangles[t];
      out.z0_face.push_back({gid(0, tri[0]), gid(0, tri[1]), gid(0, tri[2])});
      out.zL_face.push_back({gid(n_layers, tri[0]), gid(n_layers, tri[1]), gid(n_layers, tri[2])});
    }
    if (m > 0) {
      plane_pattern(0, out.z0_face);
      plane_pattern(n_layers, out.zL_face);
    }
    for (const auto& e : m2.outer_boundary_edges) {
      const bool rises = quad_diag_rises(e[0], e[1]);
      for (int l = 0; l < n_layers; ++l) {
        const int a0 = gid(l, e[0]), a1 = gid(l, e[1]);
        const int b0 = gid(l + 1, e[0]), b1 = gid(l + 1, e[1]);
        if (rises) {
          out.lateral_face.push_back({a0, a1, b1});
          out.lateral_face.push_back({a0, b1, b0});
        } else {
          out.lateral_face.push_back({a0, a1, b0});
          out.lateral_face.push_back({a1, b1, b0});
        }
      }
    }
  }

  void check_volumes() {
    double worst = std::numeric_limits<double>::max();
    int worst_t = -1;
    for (int t = 0; t < static_cast<int>(out.tets.size()); ++t) {
      const double v = out.tet_volume(t);
      if (v < worst) {
        worst = v;
        worst_t = t;
      }
    }
    if (worst <= 0.0) {
      std::ostringstream os;
      os << "sweep: non-positive element volume " << worst << " at tet " << worst_t
         << " (region " << region_name(out.region[worst_t])
         << "); increase n_layers to at least " << 2 * n_layers;
      throw std::runtime_error(os.str());
    }
  }

  Mesh3D run() {
    n2 = static_cast<int>(m2.nodes.size());
    m = m2.band_slots;
    n_layers = plan.n_layers;
    if (n_layers < 1) throw std::invalid_argument("sweep: plan has no layers");
    out.n_planes = n_layers + 1;
    out.nodes_per_plane = n2;
    out.length = plan.length;
    out.boundary_mode = plan.boundary_mode;
    out.theta = plan.boundary_mode == BoundaryMode::periodic_rotated ? plan.rotation_angle : 0.0;
    out.core_twist_per_layer = core_twist(spec, plan.length / n_layers);
    out.armor_twist_per_layer = armor_twist(spec, plan.length / n_layers);

    classify_nodes();
    compute_shifts();
    if (plan.boundary_mode != BoundaryMode::none && m > 0 && slot_shift[n_layers] != 0) {
      throw std::runtime_error(
          "sweep: periodic plan does not close the band (end shift " +
          std::to_string(slot_shift[n_layers]) + " of " + std::to_string(m) + " slots)");
    }
    build_nodes();
    build_prisms();
    build_band();
    build_facets();
    check_volumes();
    return std::move(out);
  }
};

}  // namespace

double Mesh3D::tet_volume(int t) const {
  const auto& v = tets[t];
  const Eigen::Vector3d a = nodes[v[0]];
  return (nodes[v[1]] - a).cross(nodes[v[2]] - a).dot(nodes[v[3]] - a) / 6.0;
}

Mesh3D sweep(const Mesh2D& mesh2d, const CableSpec& spec, const TwistPlan& plan) {
  SweepBuilder b(mesh2d, spec, plan);
  return b.run();
}

QualityReport quality_report(const Mesh3D& mesh) {
  QualityReport q;
  q.n_nodes = mesh.nodes.size();
  q.n_elements = mesh.tets.size();
  q.min_volume = std::numeric_limits<double>::max();
  q.min_volume_ratio = std::numeric_limits<double>::max();
  std::unordered_set<uint64_t> edges;
  edges.reserve(mesh.tets.size() * 2);
  for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
    const double v = mesh.tet_volume(t);
    q.min_volume = std::min(q.min_volume, v);
    const auto& tet = mesh.tets[t];
    double lmax = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        lmax = std::max(lmax, (mesh.nodes[tet[i]] - mesh.nodes[tet[j]]).norm());
        edges.insert(pair_key(tet[i], tet[j]));
      }
    const double ideal = lmax * lmax * lmax / (6.0 * std::sqrt(2.0));
    q.min_volume_ratio = std::min(q.min_volume_ratio, v / ideal);
  }
  q.n_edges = edges.size();

  // Largest relative in-plane rotation between consecutive node planes; the
  // band sees the full core-armor differential.
  q.max_shear_angle = std::max({std::abs(mesh.core_twist_per_layer),
                                std::abs(mesh.armor_twist_per_layer),
                                std::abs(mesh.core_twist_per_layer - mesh.armor_twist_per_layer)});
  return q;
}

std::string QualityReport::summary() const {
  std::ostringstream os;
  os << "nodes " << n_nodes << ", tets " << n_elements << ", edges " << n_edges
     << ", min volume " << min_volume << ", min shape ratio " << min_volume_ratio
     << ", max layer shear " << max_shear_angle << " rad";
  return os.str();
}

}  // namespace cablefem
