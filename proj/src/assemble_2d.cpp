#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "cablefem/em_solver.hpp"

namespace cablefem {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMu0 = 4.0 * kPi * 1e-7;

struct TriGeom {
  double area;
  Eigen::Vector2d grad[3];  // P1 shape gradients
};

TriGeom tri_geom(const Mesh2D& m, int t) {
  const auto& v = m.triangles[t];
  const Eigen::Vector2d a = m.nodes[v[0]], b = m.nodes[v[1]], c = m.nodes[v[2]];
  const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
  TriGeom g;
  g.area = 0.5 * det;
  g.grad[0] = Eigen::Vector2d(b.y() - c.y(), c.x() - b.x()) / det;
  g.grad[1] = Eigen::Vector2d(c.y() - a.y(), a.x() - c.x()) / det;
  g.grad[2] = Eigen::Vector2d(a.y() - b.y(), b.x() - a.x()) / det;
  return g;
}

}  // namespace

Solver2D::Solver2D(const Mesh2D& mesh, const CableSpec& cable, const MaterialSet& materials,
                   const SystemOptions& options)
    : mesh_(mesh), cable_(cable), materials_(materials), opt_(options) {
  omega_ = 2.0 * kPi * cable_.frequency;
  classify_regions();
  build_materials();
}

void Solver2D::classify_regions() {
  // Deterministic circuit ordering: phases, sheaths, wires.
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

  tri_region_.assign(mesh_.triangles.size(), -1);
  for (size_t t = 0; t < mesh_.triangles.size(); ++t) {
    for (size_t k = 0; k < regions_.size(); ++k) {
      if (mesh_.region[t] == regions_[k]) {
        tri_region_[t] = static_cast<int>(k);
        break;
      }
    }
  }

  region_I_.assign(regions_.size(), Complex(0, 0));
  for (size_t k = 0; k < regions_.size(); ++k) {
    if (regions_[k].kind == RegionKind::conductor) {
      region_I_[k] = opt_.excitation.phase_currents[regions_[k].index];
    }
  }
}

void Solver2D::build_materials() {
  tri_nu_.assign(mesh_.triangles.size(), Complex(1.0 / kMu0, 0.0));
  tri_sigma_.assign(mesh_.triangles.size(), 0.0);
  for (size_t t = 0; t < mesh_.triangles.size(); ++t) {
    const RegionTag& tag = mesh_.region[t];
    switch (tag.kind) {
      case RegionKind::conductor:
        tri_sigma_[t] = 1.0 / materials_.conductor_resistivity;
        break;
      case RegionKind::sheath:
        tri_sigma_[t] = 1.0 / materials_.sheath_resistivity;
        break;
      case RegionKind::armor_wire: {
        tri_sigma_[t] = materials_.armor_conductivity;
        const Complex mu = complex_permeability(materials_.armor_permeability, 0.0);
        tri_nu_[t] = 1.0 / (kMu0 * mu);
        break;
      }
      default:
        break;
    }
  }
}

void Solver2D::assemble_once() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n_nodes = static_cast<int>(mesh_.nodes.size());

  node_dof_.assign(n_nodes, 0);
  for (const auto& e : mesh_.outer_boundary_edges) {
    node_dof_[e[0]] = -1;
    node_dof_[e[1]] = -1;
  }
  n_node_dofs_ = 0;
  for (int i = 0; i < n_nodes; ++i)
    if (node_dof_[i] >= 0) node_dof_[i] = n_node_dofs_++;

  const int n_regions = static_cast<int>(regions_.size());
  const bool series_loop = opt_.armor_treatment == ArmorTreatment::series_circuit_2p5d;
  loop_dof_ = series_loop ? n_node_dofs_ + n_regions : -1;
  const int n_dofs = n_node_dofs_ + n_regions + (series_loop ? 1 : 0);

  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(mesh_.triangles.size() * 12 + n_regions * 32);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n_dofs);

  std::vector<double> region_area(n_regions, 0.0);
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    const Complex nu = tri_nu_[t];
    const double sigma = tri_sigma_[t];
    const int k = tri_region_[t];
    if (k >= 0) region_area[k] += g.area;
    for (int i = 0; i < 3; ++i) {
      const int di = node_dof_[v[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int dj = node_dof_[v[j]];
        if (dj < 0) continue;
        Complex val = nu * g.grad[i].dot(g.grad[j]) * g.area;
        if (sigma > 0) {
          val += Complex(0.0, omega_) * sigma * g.area / 12.0 * (i == j ? 2.0 : 1.0);
        }
        trips.emplace_back(di, dj, val);
      }
      if (k >= 0) {
        // -sigma u_k \int phi_i, and the transposed current-constraint entry.
        trips.emplace_back(di, n_node_dofs_ + k, Complex(-sigma * g.area / 3.0, 0.0));
      }
    }
    if (k >= 0) {
      for (int i = 0; i < 3; ++i) {
        const int di = node_dof_[v[i]];
        if (di < 0) continue;
        trips.emplace_back(n_node_dofs_ + k, di, Complex(0.0, -omega_) * sigma * g.area / 3.0);
      }
    }
  }

  // Circuit rows. Phases: imposed current. Sheaths and wires: bonding.
  for (int k = 0; k < n_regions; ++k) {
    const RegionTag& tag = regions_[k];
    const int row = n_node_dofs_ + k;
    const double sigma = tag.kind == RegionKind::conductor
                             ? 1.0 / materials_.conductor_resistivity
                             : (tag.kind == RegionKind::sheath ? 1.0 / materials_.sheath_resistivity
                                                               : materials_.armor_conductivity);
    const bool is_wire = tag.kind == RegionKind::armor_wire;
    const bool grounded =
        (opt_.bonding == Bonding::solid) && (tag.kind == RegionKind::sheath ||
                                             (is_wire && !series_loop));
    if (tag.kind == RegionKind::conductor) {
      trips.emplace_back(row, row, Complex(sigma * region_area[k], 0.0));
      rhs[row] = region_I_[k];
    } else if (grounded) {
      // Solid bonding through an ideal return: zero axial voltage gradient.
      // Replaces the current row; the -jw C^T A entries must not remain.
      // (handled below by overwriting the row)
    } else if (is_wire && series_loop) {
      trips.emplace_back(row, row, Complex(sigma * region_area[k], 0.0));
      trips.emplace_back(row, loop_dof_, Complex(-1.0, 0.0));
      trips.emplace_back(loop_dof_, row, Complex(1.0, 0.0));  // sum of wire gradients = 0
    } else {
      // Open bonding: zero net current.
      trips.emplace_back(row, row, Complex(sigma * region_area[k], 0.0));
      rhs[row] = Complex(0.0, 0.0);
    }
  }

  system_ = LinearSystem{};
  system_.n_dofs = n_dofs;
  system_.rhs = rhs;
  system_.matrix.resize(n_dofs, n_dofs);
  system_.matrix.setFromTriplets(trips.begin(), trips.end());
  system_.matrix.makeCompressed();

  // Grounded regions: replace the whole current row by u_k = 0 through the
  // constraint mechanism so assembly stays one pass.
  system_.constraints.clear();
  for (int k = 0; k < n_regions; ++k) {
    const RegionTag& tag = regions_[k];
    const bool series_wire = tag.kind == RegionKind::armor_wire &&
                             opt_.armor_treatment == ArmorTreatment::series_circuit_2p5d;
    const bool grounded = (opt_.bonding == Bonding::solid) &&
                          (tag.kind == RegionKind::sheath ||
                           (tag.kind == RegionKind::armor_wire && !series_wire));
    if (grounded) system_.constraints.push_back({n_node_dofs_ + k, -1, 1.0});
  }

  stats_.assemble_seconds +=
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  assembled_ = true;
}

void Solver2D::assemble() { assemble_once(); }

SolverStats Solver2D::solve() {
  const bool nonlinear =
      materials_.armor_permeability.variant == PermeabilityModel::Variant::field_dependent;
  int picard = 0;
  double mu_change = 0.0;
  std::vector<Complex> wire_mu(mesh_.triangles.size(), Complex(0, 0));
  while (true) {
    assemble_once();
    solution_ = solve_linear_system(system_, opt_.solve, &stats_);
    solved_ = true;
    ++picard;
    if (!nonlinear) break;

    // Update the armor reluctivity from each element's |B| and iterate.
    mu_change = 0.0;
    for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
      if (mesh_.region[t].kind != RegionKind::armor_wire) continue;
      const TriGeom g = tri_geom(mesh_, t);
      const auto& v = mesh_.triangles[t];
      Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
      for (int i = 0; i < 3; ++i) {
        const int d = node_dof_[v[i]];
        const Complex a = d >= 0 ? solution_[d] : Complex(0, 0);
        grad += a * g.grad[i].cast<Complex>();
      }
      const Eigen::Vector2cd b_vec(grad.y(), -grad.x());
      const double b_mag = std::sqrt(0.5 * (std::norm(b_vec.x()) + std::norm(b_vec.y())));
      const Complex mu = complex_permeability(materials_.armor_permeability, b_mag);
      const Complex old = wire_mu[t];
      wire_mu[t] = mu;
      tri_nu_[t] = 1.0 / (kMu0 * mu);
      if (std::abs(old) > 0) {
        mu_change = std::max(mu_change, std::abs(mu - old) / std::abs(old));
      } else {
        mu_change = 1.0;
      }
    }
    if (mu_change < opt_.solve.picard_tol || picard >= opt_.solve.picard_max_iters) break;
  }
  stats_.picard_iterations = picard;
  if (nonlinear && mu_change >= opt_.solve.picard_tol) {
    throw std::runtime_error("solve: Picard iteration for mu(B) did not converge (change " +
                             std::to_string(mu_change) + " after " + std::to_string(picard) +
                             " iterations)");
  }
  return stats_;
}

int Solver2D::region_index_of_tri(int t) const { return tri_region_[t]; }

Complex Solver2D::circuit_gradient(const RegionTag& tag) const {
  for (size_t k = 0; k < regions_.size(); ++k)
    if (regions_[k] == tag) return solution_[n_node_dofs_ + k];
  throw std::invalid_argument("circuit_gradient: not a conducting region: " + region_name(tag));
}

Complex Solver2D::region_current(const RegionTag& tag) const {
  int region = -1;
  for (size_t k = 0; k < regions_.size(); ++k)
    if (regions_[k] == tag) region = static_cast<int>(k);
  if (region < 0) throw std::invalid_argument("region_current: " + region_name(tag));
  const Complex u = solution_[n_node_dofs_ + region];
  Complex current(0, 0);
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    if (tri_region_[t] != region) continue;
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    Complex a_sum(0, 0);
    for (int i = 0; i < 3; ++i) {
      const int d = node_dof_[v[i]];
      if (d >= 0) a_sum += solution_[d];
    }
    current += tri_sigma_[t] * (Complex(0, -omega_) * a_sum / 3.0 + u) * g.area;
  }
  return current;
}

double Solver2D::joule_loss(const RegionTag& tag) const {
  double loss = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    if (!(mesh_.region[t] == tag)) continue;
    const double sigma = tri_sigma_[t];
    if (sigma <= 0) continue;
    const int region = tri_region_[t];
    const Complex u = region >= 0 ? solution_[n_node_dofs_ + region] : Complex(0, 0);
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    Complex e[3];
    Complex e_sum(0, 0);
    double e_sq = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int d = node_dof_[v[i]];
      const Complex a = d >= 0 ? solution_[d] : Complex(0, 0);
      e[i] = Complex(0, -omega_) * a + u;
      e_sum += e[i];
      e_sq += std::norm(e[i]);
    }
    loss += 0.5 * sigma * g.area / 12.0 * (std::norm(e_sum) + e_sq);
  }
  return loss;
}

double Solver2D::magnetic_loss(const RegionTag& tag) const {
  double loss = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    if (!(mesh_.region[t] == tag)) continue;
    const double im_nu = tri_nu_[t].imag();
    if (im_nu == 0.0) continue;
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
    for (int i = 0; i < 3; ++i) {
      const int d = node_dof_[v[i]];
      const Complex a = d >= 0 ? solution_[d] : Complex(0, 0);
      grad += a * g.grad[i].cast<Complex>();
    }
    const double b2 = std::norm(grad.x()) + std::norm(grad.y());
    loss += 0.5 * omega_ * im_nu * b2 * g.area;
  }
  return loss;
}

double Solver2D::magnetic_energy() const {
  double energy = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
    for (int i = 0; i < 3; ++i) {
      const int d = node_dof_[v[i]];
      const Complex a = d >= 0 ? solution_[d] : Complex(0, 0);
      grad += a * g.grad[i].cast<Complex>();
    }
    const double b2 = std::norm(grad.x()) + std::norm(grad.y());
    energy += 0.25 * tri_nu_[t].real() * b2 * g.area;
  }
  return energy;
}

Complex Solver2D::source_power() const {
  Complex s(0, 0);
  for (size_t k = 0; k < regions_.size(); ++k) {
    const Complex u = solution_[n_node_dofs_ + k];
    s += 0.5 * u * std::conj(region_current(regions_[k]));
  }
  return s;
}

Complex Solver2D::armor_loop_current() const {
  if (loop_dof_ < 0) throw std::runtime_error("armor_loop_current: not a 2.5D system");
  return solution_[loop_dof_];
}

Complex Solver2D::az_region_average(const RegionTag& tag) const {
  Complex sum(0, 0);
  double area = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    if (!(mesh_.region[t] == tag)) continue;
    const TriGeom g = tri_geom(mesh_, t);
    const auto& v = mesh_.triangles[t];
    Complex a_sum(0, 0);
    for (int i = 0; i < 3; ++i) {
      const int d = node_dof_[v[i]];
      if (d >= 0) a_sum += solution_[d];
    }
    sum += a_sum / 3.0 * g.area;
    area += g.area;
  }
  return sum / area;
}

double Solver2D::region_area(const RegionTag& tag) const {
  double area = 0.0;
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    if (mesh_.region[t] == tag) area += tri_geom(mesh_, t).area;
  }
  return area;
}

int Solver2D::locate_triangle(const Eigen::Vector2d& p) const {
  for (int t = 0; t < static_cast<int>(mesh_.triangles.size()); ++t) {
    const auto& v = mesh_.triangles[t];
    const Eigen::Vector2d a = mesh_.nodes[v[0]], b = mesh_.nodes[v[1]], c = mesh_.nodes[v[2]];
    const double d1 = (b - a).x() * (p - a).y() - (b - a).y() * (p - a).x();
    const double d2 = (c - b).x() * (p - b).y() - (c - b).y() * (p - b).x();
    const double d3 = (a - c).x() * (p - c).y() - (a - c).y() * (p - c).x();
    if (d1 >= -1e-18 && d2 >= -1e-18 && d3 >= -1e-18) return t;
  }
  return -1;
}

Complex Solver2D::az_at(const Eigen::Vector2d& p) const {
  const int t = locate_triangle(p);
  if (t < 0) throw std::runtime_error("az_at: point outside mesh");
  const auto& v = mesh_.triangles[t];
  const TriGeom g = tri_geom(mesh_, t);
  Complex az(0, 0);
  const Eigen::Vector2d a = mesh_.nodes[v[0]];
  // Barycentric interpolation via shape gradients.
  double lam[3];
  lam[1] = g.grad[1].dot(p - a) + 0.0;
  lam[2] = g.grad[2].dot(p - a) + 0.0;
  lam[0] = 1.0 - lam[1] - lam[2];
  for (int i = 0; i < 3; ++i) {
    const int d = node_dof_[v[i]];
    if (d >= 0) az += lam[i] * solution_[d];
  }
  return az;
}

Eigen::Vector2cd Solver2D::h_at(const Eigen::Vector2d& p) const {
  const int t = locate_triangle(p);
  if (t < 0) throw std::runtime_error("h_at: point outside mesh");
  const auto& v = mesh_.triangles[t];
  const TriGeom g = tri_geom(mesh_, t);
  Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
  for (int i = 0; i < 3; ++i) {
    const int d = node_dof_[v[i]];
    const Complex a = d >= 0 ? solution_[d] : Complex(0, 0);
    grad += a * g.grad[i].cast<Complex>();
  }
  return tri_nu_[t] * Eigen::Vector2cd(grad.y(), -grad.x());
}

Complex Solver2D::ampere_circulation(const Eigen::Vector2d& center, double radius,
                                     int samples) const {
  Complex circ(0, 0);
  const double dl = 2.0 * kPi * radius / samples;
  for (int s = 0; s < samples; ++s) {
    const double a = 2.0 * kPi * (s + 0.5) / samples;
    const Eigen::Vector2d p = center + radius * Eigen::Vector2d(std::cos(a), std::sin(a));
    const Eigen::Vector2d tangent(-std::sin(a), std::cos(a));
    const Eigen::Vector2cd h = h_at(p);
    circ += (h.x() * tangent.x() + h.y() * tangent.y()) * dl;
  }
  return circ;
}

}  // namespace cablefem
