#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "cablefem/em_solver.hpp"

namespace cablefem {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMu0 = 4.0 * kPi * 1e-7;

inline uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

struct TetGeom {
  double volume;
  Eigen::Vector3d grad[4];
};

TetGeom tet_geom(const Mesh3D& m, int t) {
  const auto& v = m.tets[t];
  const Eigen::Vector3d a = m.nodes[v[0]];
  Eigen::Matrix3d J;
  J.col(0) = m.nodes[v[1]] - a;
  J.col(1) = m.nodes[v[2]] - a;
  J.col(2) = m.nodes[v[3]] - a;
  TetGeom g;
  g.volume = J.determinant() / 6.0;
  const Eigen::Matrix3d Jinv = J.inverse();
  for (int i = 1; i < 4; ++i) g.grad[i] = Jinv.row(i - 1);
  g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
  return g;
}

constexpr int kEdgeNodes[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

// Spatial hash for matching rotated end-face nodes.
struct NodeGrid {
  double cell;
  std::unordered_map<uint64_t, std::vector<int>> cells;
  static uint64_t key(long x, long y) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(x)) << 32) | static_cast<uint32_t>(y);
  }
  void insert(const Eigen::Vector2d& p, int id) {
    cells[key(std::lround(p.x() / cell), std::lround(p.y() / cell))].push_back(id);
  }
  template <typename F>
  void near(const Eigen::Vector2d& p, F&& f) const {
    const long cx = std::lround(p.x() / cell), cy = std::lround(p.y() / cell);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (int id : it->second) f(id);
      }
  }
};

}  // namespace

Solver3D::Solver3D(const Mesh3D& mesh, const CableSpec& cable, const MaterialSet& materials,
                   const SystemOptions& options)
    : mesh_(mesh), cable_(cable), materials_(materials), opt_(options) {
  omega_ = 2.0 * kPi * cable_.frequency;
  build_edges();
  classify_regions();
  build_materials();
}

void Solver3D::build_edges() {
  std::unordered_map<uint64_t, int> edge_ids;
  edge_ids.reserve(mesh_.tets.size() * 2);
  tet_edges_.resize(mesh_.tets.size());
  for (size_t t = 0; t < mesh_.tets.size(); ++t) {
    const auto& v = mesh_.tets[t];
    for (int e = 0; e < 6; ++e) {
      int a = v[kEdgeNodes[e][0]];
      int b = v[kEdgeNodes[e][1]];
      const int sign = a < b ? 1 : -1;
      const uint64_t key = pair_key(a, b);
      auto it = edge_ids.find(key);
      int id;
      if (it == edge_ids.end()) {
        id = static_cast<int>(edges_.size());
        edge_ids.emplace(key, id);
        edges_.push_back({std::min(a, b), std::max(a, b)});
      } else {
        id = it->second;
      }
      tet_edges_[t][e] = sign * (id + 1);
    }
  }
  n_edges_ = static_cast<int>(edges_.size());
}

void Solver3D::classify_regions() {
  std::vector<RegionTag> found;
  auto seen = [&](const RegionTag& tag) {
    for (const auto& r : found)
      if (r == tag) return true;
    return false;
  };
  for (const auto& tag : mesh_.region)
    if (tag.kind != RegionKind::filler && tag.kind != RegionKind::air && !seen(tag))
      found.push_back(tag);
  auto rank = [](const RegionTag& t) {
    const int kind_rank = t.kind == RegionKind::conductor ? 0 : (t.kind == RegionKind::sheath ? 1 : 2);
    return kind_rank * 1000000 + t.index;
  };
  std::sort(found.begin(), found.end(),
            [&](const RegionTag& a, const RegionTag& b) { return rank(a) < rank(b); });
  const bool wires_conduct = materials_.armor_conductivity > 0.0;
  for (const auto& tag : found) {
    if (tag.kind == RegionKind::armor_wire && !wires_conduct) continue;
    regions_.push_back(tag);
  }
  tet_region_.assign(mesh_.tets.size(), -1);
  for (size_t t = 0; t < mesh_.tets.size(); ++t)
    for (size_t k = 0; k < regions_.size(); ++k)
      if (mesh_.region[t] == regions_[k]) {
        tet_region_[t] = static_cast<int>(k);
        break;
      }
  region_I_.assign(regions_.size(), Complex(0, 0));
  for (size_t k = 0; k < regions_.size(); ++k)
    if (regions_[k].kind == RegionKind::conductor)
      region_I_[k] = opt_.excitation.phase_currents[regions_[k].index];
}

void Solver3D::build_materials() {
  tet_nu_.assign(mesh_.tets.size(), Complex(1.0 / kMu0, 0.0));
  tet_sigma_.assign(mesh_.tets.size(), 0.0);
  tet_sigma_eff_.assign(mesh_.tets.size(), 0.0);
  for (size_t t = 0; t < mesh_.tets.size(); ++t) {
    const RegionTag& tag = mesh_.region[t];
    double sigma = 0.0;
    switch (tag.kind) {
      case RegionKind::conductor: sigma = 1.0 / materials_.conductor_resistivity; break;
      case RegionKind::sheath: sigma = 1.0 / materials_.sheath_resistivity; break;
      case RegionKind::armor_wire: {
        sigma = materials_.armor_conductivity;
        const Complex mu = complex_permeability(materials_.armor_permeability, 0.0);
        tet_nu_[t] = 1.0 / (kMu0 * mu);
        break;
      }
      default: break;
    }
    tet_sigma_[t] = sigma;
    tet_sigma_eff_[t] = sigma > 0.0 ? sigma : opt_.solve.sigma_reg;
  }
}

void Solver3D::build_constraints() {
  system_.constraints.clear();

  // Field = 0 on the outer cylinder: every edge of a lateral facet.
  std::unordered_set<uint64_t> lateral_edges;
  for (const auto& f : mesh_.lateral_face) {
    lateral_edges.insert(pair_key(f[0], f[1]));
    lateral_edges.insert(pair_key(f[1], f[2]));
    lateral_edges.insert(pair_key(f[2], f[0]));
  }
  std::unordered_map<uint64_t, int> edge_ids;
  edge_ids.reserve(edges_.size() * 2);
  for (int e = 0; e < n_edges_; ++e) edge_ids.emplace(pair_key(edges_[e][0], edges_[e][1]), e);
  std::vector<char> dirichlet(n_edges_, 0);
  for (uint64_t key : lateral_edges) {
    auto it = edge_ids.find(key);
    if (it != edge_ids.end()) {
      dirichlet[it->second] = 1;
      system_.constraints.push_back({it->second, -1, 1.0});
    }
  }

  if (mesh_.boundary_mode == BoundaryMode::none) return;

  // Periodic end faces: map every zL entity onto z0 with the inverse end map
  // (rotate by -theta, shift by -L) and slave its DoF to the image.
  const double theta = mesh_.boundary_mode == BoundaryMode::periodic_rotated ? mesh_.theta : 0.0;
  const double c = std::cos(-theta), s = std::sin(-theta);

  std::unordered_set<int> z0_nodes, zl_nodes;
  for (const auto& f : mesh_.z0_face) for (int i : f) z0_nodes.insert(i);
  for (const auto& f : mesh_.zL_face) for (int i : f) zl_nodes.insert(i);

  double scale = 1e-3;
  for (int i : z0_nodes) scale = std::max(scale, mesh_.nodes[i].head<2>().norm());
  NodeGrid grid{0.5 * scale, {}};
  grid.cell = std::max(1e-6, 1e-2 * scale);
  for (int i : z0_nodes) grid.insert(mesh_.nodes[i].head<2>(), i);

  const double tol = 1e-9;
  std::unordered_map<int, int> node_map;  // zL node -> z0 node
  for (int i : zl_nodes) {
    const Eigen::Vector2d p = mesh_.nodes[i].head<2>();
    const Eigen::Vector2d q(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    int best = -1;
    double best_d = tol;
    grid.near(q, [&](int j) {
      const double d = (mesh_.nodes[j].head<2>() - q).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    });
    if (best < 0) {
      throw std::runtime_error("apply_periodic: zL node " + std::to_string(i) +
                               " has no z0 image under the end map within 1e-9 m");
    }
    node_map.emplace(i, best);
  }

  std::unordered_set<uint64_t> zl_edges;
  for (const auto& f : mesh_.zL_face) {
    zl_edges.insert(pair_key(f[0], f[1]));
    zl_edges.insert(pair_key(f[1], f[2]));
    zl_edges.insert(pair_key(f[2], f[0]));
  }
  int unmatched = 0;
  for (uint64_t key : zl_edges) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    auto slave_it = edge_ids.find(key);
    if (slave_it == edge_ids.end()) continue;
    const int ma = node_map.at(a), mb = node_map.at(b);
    auto master_it = edge_ids.find(pair_key(ma, mb));
    if (master_it == edge_ids.end()) {
      ++unmatched;
      continue;
    }
    if (dirichlet[slave_it->second] || dirichlet[master_it->second]) continue;
    // a<b by key construction; the master circulation flips sign when the
    // mapped pair comes out descending.
    const double coeff = (ma < mb) ? 1.0 : -1.0;
    system_.constraints.push_back({slave_it->second, master_it->second, coeff});
  }
  if (unmatched > 0) {
    throw std::runtime_error("apply_periodic: " + std::to_string(unmatched) +
                             " zL edges have no z0 partner edge (end faces not congruent)");
  }
}

Solver3D::PeriodicMatch Solver3D::match_end_faces(const Mesh3D& mesh, double tol) {
  PeriodicMatch out;
  const double theta = mesh.boundary_mode == BoundaryMode::periodic_rotated ? mesh.theta : 0.0;
  const double c = std::cos(-theta), s = std::sin(-theta);
  std::unordered_set<int> z0_nodes, zl_nodes;
  for (const auto& f : mesh.z0_face) for (int i : f) z0_nodes.insert(i);
  for (const auto& f : mesh.zL_face) for (int i : f) zl_nodes.insert(i);
  double scale = 1e-3;
  for (int i : z0_nodes) scale = std::max(scale, mesh.nodes[i].head<2>().norm());
  NodeGrid grid{std::max(1e-6, 1e-2 * scale), {}};
  for (int i : z0_nodes) grid.insert(mesh.nodes[i].head<2>(), i);
  std::unordered_map<int, int> node_map;
  for (int i : zl_nodes) {
    const Eigen::Vector2d p = mesh.nodes[i].head<2>();
    const Eigen::Vector2d q(c * p.x() - s * p.y(), s * p.x() + c * p.y());
    int best = -1;
    double best_d = tol;
    grid.near(q, [&](int j) {
      const double d = (mesh.nodes[j].head<2>() - q).norm();
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    });
    if (best < 0) {
      throw std::runtime_error("match_end_faces: zL node " + std::to_string(i) +
                               " unmatched under the end map");
    }
    out.worst_distance = std::max(out.worst_distance, best_d);
    node_map.emplace(i, best);
  }
  std::unordered_set<uint64_t> z0_edges, zl_edges;
  for (const auto& f : mesh.z0_face) {
    z0_edges.insert(pair_key(f[0], f[1]));
    z0_edges.insert(pair_key(f[1], f[2]));
    z0_edges.insert(pair_key(f[2], f[0]));
  }
  for (const auto& f : mesh.zL_face) {
    zl_edges.insert(pair_key(f[0], f[1]));
    zl_edges.insert(pair_key(f[1], f[2]));
    zl_edges.insert(pair_key(f[2], f[0]));
  }
  for (uint64_t key : zl_edges) {
    const int a = static_cast<int>(key >> 32);
    const int b = static_cast<int>(key & 0xffffffffu);
    const uint64_t master = pair_key(node_map.at(a), node_map.at(b));
    if (!z0_edges.count(master)) {
      throw std::runtime_error("match_end_faces: zL edge has no z0 partner edge");
    }
    ++out.n_matched_edges;
  }
  return out;
}

void Solver3D::assemble_once() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n_regions = static_cast<int>(regions_.size());
  const int n_dofs = n_edges_ + n_regions;
  const double L = mesh_.length;

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(mesh_.tets.size() * 48 + 1024);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_dofs);
  std::vector<double> region_volume(n_regions, 0.0);

  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    const TetGeom g = tet_geom(mesh_, t);
    const Complex nu = tet_nu_[t];
    const double sig = tet_sigma_eff_[t];
    const int k = tet_region_[t];
    if (k >= 0) region_volume[k] += g.volume;

    int ids[6];
    double signs[6];
    Eigen::Vector3d curls[6];
    double gdot[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gdot[i][j] = g.grad[i].dot(g.grad[j]);
    for (int e = 0; e < 6; ++e) {
      const int se = tet_edges_[t][e];
      ids[e] = std::abs(se) - 1;
      signs[e] = se > 0 ? 1.0 : -1.0;
      curls[e] = 2.0 * g.grad[kEdgeNodes[e][0]].cross(g.grad[kEdgeNodes[e][1]]);
    }
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeNodes[e][0], b = kEdgeNodes[e][1];
      for (int f = 0; f < 6; ++f) {
        const int cindex = kEdgeNodes[f][0], d = kEdgeNodes[f][1];
        const double curl_term = curls[e].dot(curls[f]) * g.volume;
        const double mass =
            g.volume / 20.0 *
            ((1.0 + (a == cindex ? 1.0 : 0.0)) * gdot[b][d] - (1.0 + (a == d ? 1.0 : 0.0)) * gdot[b][cindex] -
             (1.0 + (b == cindex ? 1.0 : 0.0)) * gdot[a][d] + (1.0 + (b == d ? 1.0 : 0.0)) * gdot[a][cindex]);
        const Complex val =
            (nu * curl_term + Complex(0.0, omega_) * sig * mass) * signs[e] * signs[f];
        trips.emplace_back(ids[e], ids[f], val);
      }
      if (k >= 0) {
        const double ce = signs[e] * g.volume / 4.0 * (g.grad[b] - g.grad[a]).z();
        const double sigma = tet_sigma_[t];
        trips.emplace_back(ids[e], n_edges_ + k, Complex(-sigma * ce, 0.0));
        trips.emplace_back(n_edges_ + k, ids[e], Complex(0.0, -omega_) * sigma * ce / L);
      }
    }
  }

  const bool series_loop = opt_.armor_treatment == ArmorTreatment::series_circuit_2p5d;
  if (series_loop) throw std::invalid_argument("assemble_3d: series circuit is a 2.5D treatment");
  for (int k = 0; k < n_regions; ++k) {
    const RegionTag& tag = regions_[k];
    const int row = n_edges_ + k;
    const double sigma = tag.kind == RegionKind::conductor
                             ? 1.0 / materials_.conductor_resistivity
                             : (tag.kind == RegionKind::sheath ? 1.0 / materials_.sheath_resistivity
                                                               : materials_.armor_conductivity);
    if (tag.kind == RegionKind::conductor) {
      trips.emplace_back(row, row, Complex(sigma * region_volume[k] / L, 0.0));
      rhs[row] = region_I_[k];
    } else if (opt_.bonding == Bonding::open) {
      trips.emplace_back(row, row, Complex(sigma * region_volume[k] / L, 0.0));
    }
    // Solid bonding handled as u_k = 0 through a constraint below.
  }

  system_ = LinearSystem{};
  system_.n_dofs = n_dofs;
  system_.rhs = rhs;
  system_.matrix.resize(n_dofs, n_dofs);
  system_.matrix.setFromTriplets(trips.begin(), trips.end());
  system_.matrix.makeCompressed();

  build_constraints();
  for (int k = 0; k < n_regions; ++k) {
    if (regions_[k].kind == RegionKind::conductor) continue;
    if (opt_.bonding == Bonding::solid) system_.constraints.push_back({n_edges_ + k, -1, 1.0});
  }

  stats_.assemble_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  assembled_ = true;
}

void Solver3D::assemble() { assemble_once(); }

SolverStats Solver3D::solve() {
  const bool nonlinear =
      materials_.armor_permeability.variant == PermeabilityModel::Variant::field_dependent;
  int picard = 0;
  double mu_change = 0.0;
  std::vector<Complex> wire_mu(mesh_.tets.size(), Complex(0, 0));
  while (true) {
    assemble_once();
    solution_ = solve_linear_system(system_, opt_.solve, &stats_);
    solved_ = true;
    ++picard;
    if (!nonlinear) break;
    mu_change = 0.0;
    for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
      if (mesh_.region[t].kind != RegionKind::armor_wire) continue;
      const TetGeom g = tet_geom(mesh_, t);
      Eigen::Vector3cd b_vec = Eigen::Vector3cd::Zero();
      for (int e = 0; e < 6; ++e) {
        const int id = std::abs(tet_edges_[t][e]) - 1;
        const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
        const Eigen::Vector3d curl =
            2.0 * g.grad[kEdgeNodes[e][0]].cross(g.grad[kEdgeNodes[e][1]]);
        b_vec += sign * solution_[id] * curl.cast<Complex>();
      }
      const double b_mag = std::sqrt(0.5 * b_vec.squaredNorm());
      const Complex mu = complex_permeability(materials_.armor_permeability, b_mag);
      const Complex old = wire_mu[t];
      wire_mu[t] = mu;
      tet_nu_[t] = 1.0 / (kMu0 * mu);
      mu_change = std::max(mu_change, std::abs(old) > 0 ? std::abs(mu - old) / std::abs(old) : 1.0);
    }
    if (mu_change < opt_.solve.picard_tol || picard >= opt_.solve.picard_max_iters) break;
  }
  stats_.picard_iterations = picard;
  if (nonlinear && mu_change >= opt_.solve.picard_tol) {
    throw std::runtime_error("solve3d: Picard iteration for mu(B) did not converge");
  }
  return stats_;
}

Complex Solver3D::circuit_gradient(const RegionTag& tag) const {
  for (size_t k = 0; k < regions_.size(); ++k)
    if (regions_[k] == tag) return solution_[n_edges_ + k];
  throw std::invalid_argument("circuit_gradient: not a conducting region");
}

Complex Solver3D::region_current(const RegionTag& tag) const {
  int region = -1;
  for (size_t k = 0; k < regions_.size(); ++k)
    if (regions_[k] == tag) region = static_cast<int>(k);
  if (region < 0) throw std::invalid_argument("region_current: " + region_name(tag));
  const Complex u = solution_[n_edges_ + region];
  Complex current(0, 0);
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    if (tet_region_[t] != region) continue;
    const TetGeom g = tet_geom(mesh_, t);
    Complex az_int(0, 0);
    for (int e = 0; e < 6; ++e) {
      const int id = std::abs(tet_edges_[t][e]) - 1;
      const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      const int a = kEdgeNodes[e][0], b = kEdgeNodes[e][1];
      az_int += sign * solution_[id] * g.volume / 4.0 * (g.grad[b] - g.grad[a]).z();
    }
    current += tet_sigma_[t] * (Complex(0, -omega_) * az_int + u * g.volume);
  }
  return current / mesh_.length;
}

double Solver3D::joule_loss(const RegionTag& tag) const {
  double loss = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    if (!(mesh_.region[t] == tag)) continue;
    const double sigma = tet_sigma_[t];
    if (sigma <= 0) continue;
    const int region = tet_region_[t];
    const Complex u = region >= 0 ? solution_[n_edges_ + region] : Complex(0, 0);
    const TetGeom g = tet_geom(mesh_, t);
    double gdot[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gdot[i][j] = g.grad[i].dot(g.grad[j]);
    Complex a_coeff[6];
    for (int e = 0; e < 6; ++e) {
      const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      a_coeff[e] = sign * solution_[std::abs(tet_edges_[t][e]) - 1];
    }
    Complex aa(0, 0);
    Complex az(0, 0);
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeNodes[e][0], b = kEdgeNodes[e][1];
      az += a_coeff[e] * g.volume / 4.0 * (g.grad[b] - g.grad[a]).z();
      for (int f = 0; f < 6; ++f) {
        const int ci = kEdgeNodes[f][0], d = kEdgeNodes[f][1];
        const double mass =
            g.volume / 20.0 *
            ((1.0 + (a == ci ? 1.0 : 0.0)) * gdot[b][d] - (1.0 + (a == d ? 1.0 : 0.0)) * gdot[b][ci] -
             (1.0 + (b == ci ? 1.0 : 0.0)) * gdot[a][d] + (1.0 + (b == d ? 1.0 : 0.0)) * gdot[a][ci]);
        aa += a_coeff[e] * std::conj(a_coeff[f]) * mass;
      }
    }
    const double e2_int = omega_ * omega_ * aa.real() + std::norm(u) * g.volume +
                          2.0 * (Complex(0, -omega_) * az * std::conj(u)).real();
    loss += 0.5 * sigma * e2_int;
  }
  return loss / mesh_.length;
}

double Solver3D::regularization_loss() const {
  double loss = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    if (tet_sigma_[t] > 0.0) continue;
    const double sigma = tet_sigma_eff_[t];
    const TetGeom g = tet_geom(mesh_, t);
    double gdot[4][4];
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) gdot[i][j] = g.grad[i].dot(g.grad[j]);
    Complex aa(0, 0);
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeNodes[e][0], b = kEdgeNodes[e][1];
      const double se = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      for (int f = 0; f < 6; ++f) {
        const int ci = kEdgeNodes[f][0], d = kEdgeNodes[f][1];
        const double sf = tet_edges_[t][f] > 0 ? 1.0 : -1.0;
        const double mass =
            g.volume / 20.0 *
            ((1.0 + (a == ci ? 1.0 : 0.0)) * gdot[b][d] - (1.0 + (a == d ? 1.0 : 0.0)) * gdot[b][ci] -
             (1.0 + (b == ci ? 1.0 : 0.0)) * gdot[a][d] + (1.0 + (b == d ? 1.0 : 0.0)) * gdot[a][ci]);
        aa += se * solution_[std::abs(tet_edges_[t][e]) - 1] * sf *
              std::conj(solution_[std::abs(tet_edges_[t][f]) - 1]) * mass;
      }
    }
    loss += 0.5 * sigma * omega_ * omega_ * aa.real();
  }
  return loss / mesh_.length;
}

double Solver3D::magnetic_loss(const RegionTag& tag) const {
  double loss = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    if (!(mesh_.region[t] == tag)) continue;
    const double im_nu = tet_nu_[t].imag();
    if (im_nu == 0.0) continue;
    const TetGeom g = tet_geom(mesh_, t);
    Eigen::Vector3cd b_vec = Eigen::Vector3cd::Zero();
    for (int e = 0; e < 6; ++e) {
      const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      const Eigen::Vector3d curl = 2.0 * g.grad[kEdgeNodes[e][0]].cross(g.grad[kEdgeNodes[e][1]]);
      b_vec += sign * solution_[std::abs(tet_edges_[t][e]) - 1] * curl.cast<Complex>();
    }
    loss += 0.5 * omega_ * im_nu * b_vec.squaredNorm() * g.volume;
  }
  return loss / mesh_.length;
}

double Solver3D::magnetic_energy() const {
  double energy = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    const TetGeom g = tet_geom(mesh_, t);
    Eigen::Vector3cd b_vec = Eigen::Vector3cd::Zero();
    for (int e = 0; e < 6; ++e) {
      const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      const Eigen::Vector3d curl = 2.0 * g.grad[kEdgeNodes[e][0]].cross(g.grad[kEdgeNodes[e][1]]);
      b_vec += sign * solution_[std::abs(tet_edges_[t][e]) - 1] * curl.cast<Complex>();
    }
    energy += 0.25 * tet_nu_[t].real() * b_vec.squaredNorm() * g.volume;
  }
  return energy / mesh_.length;
}

Complex Solver3D::source_power() const {
  Complex s(0, 0);
  for (size_t k = 0; k < regions_.size(); ++k) {
    s += 0.5 * solution_[n_edges_ + k] * std::conj(region_current(regions_[k]));
  }
  return s;
}

Complex Solver3D::ampere_circulation(const Eigen::Vector2d& center, double radius, double z,
                                     int samples) const {
  // Gather candidate tets crossing the z plane near the circle, bucketed by
  // angle so each sample only scans a handful.
  const int n_sectors = 64;
  std::vector<std::vector<int>> buckets(n_sectors);
  for (int t = 0; t < static_cast<int>(mesh_.tets.size()); ++t) {
    double zmin = 1e300, zmax = -1e300, rmin = 1e300, rmax = -1e300;
    double amin = 1e300, amax = -1e300;
    bool wraps = false;
    for (int i = 0; i < 4; ++i) {
      const Eigen::Vector3d& p = mesh_.nodes[mesh_.tets[t][i]];
      zmin = std::min(zmin, p.z());
      zmax = std::max(zmax, p.z());
      const Eigen::Vector2d q = p.head<2>() - center;
      rmin = std::min(rmin, q.norm());
      rmax = std::max(rmax, q.norm());
      const double ang = std::atan2(q.y(), q.x());
      amin = std::min(amin, ang);
      amax = std::max(amax, ang);
    }
    if (z < zmin - 1e-12 || z > zmax + 1e-12) continue;
    if (radius < rmin - 1e-9 || radius > rmax + 1e-9) continue;
    if (amax - amin > kPi) wraps = true;
    for (int s = 0; s < n_sectors; ++s) {
      const double a = -kPi + 2.0 * kPi * (s + 0.5) / n_sectors;
      if (wraps || (a >= amin - 0.2 && a <= amax + 0.2)) buckets[s].push_back(t);
    }
  }
  auto h_in_tet = [&](int t) {
    const TetGeom g = tet_geom(mesh_, t);
    Eigen::Vector3cd b_vec = Eigen::Vector3cd::Zero();
    for (int e = 0; e < 6; ++e) {
      const double sign = tet_edges_[t][e] > 0 ? 1.0 : -1.0;
      const Eigen::Vector3d curl = 2.0 * g.grad[kEdgeNodes[e][0]].cross(g.grad[kEdgeNodes[e][1]]);
      b_vec += sign * solution_[std::abs(tet_edges_[t][e]) - 1] * curl.cast<Complex>();
    }
    return (tet_nu_[t] * b_vec).eval();
  };
  Complex circ(0, 0);
  const double dl = 2.0 * kPi * radius / samples;
  for (int sidx = 0; sidx < samples; ++sidx) {
    const double a = -kPi + 2.0 * kPi * (sidx + 0.5) / samples;
    const Eigen::Vector3d p(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a), z);
    const int sector = std::min(n_sectors - 1, static_cast<int>((a + kPi) / (2.0 * kPi) * n_sectors));
    int found = -1;
    for (int t : buckets[sector]) {
      const auto& v = mesh_.tets[t];
      const Eigen::Vector3d p0 = mesh_.nodes[v[0]];
      Eigen::Matrix3d J;
      J.col(0) = mesh_.nodes[v[1]] - p0;
      J.col(1) = mesh_.nodes[v[2]] - p0;
      J.col(2) = mesh_.nodes[v[3]] - p0;
      const Eigen::Vector3d lam = J.colPivHouseholderQr().solve(p - p0);
      const double l0 = 1.0 - lam.sum();
      const double eps = -1e-9;
      if (lam.minCoeff() >= eps && l0 >= eps) {
        found = t;
        break;
      }
    }
    if (found < 0) continue;  // sample fell in a crack; the average forgives it
    const Eigen::Vector3cd h = h_in_tet(found);
    const Eigen::Vector3d tangent(-std::sin(a), std::cos(a), 0.0);
    circ += (h.x() * tangent.x() + h.y() * tangent.y()) * dl;
  }
  return circ;
}

}  // namespace cablefem
