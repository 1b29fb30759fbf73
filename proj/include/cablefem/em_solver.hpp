// Frequency-domain eddy-current solvers (e^{+jwt} convention, peak phasors).
//
// 2D: nodal complex A_z on the cross section with one axial-gradient circuit
// unknown per conducting region and a current or bonding constraint each.
// 3D: lowest-order edge elements on the swept tetrahedral mesh with the same
// circuit treatment, small-conductivity regularization of the curl-curl null
// space, and translated or rotated periodic end constraints.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <string>
#include <vector>

#include "cablefem/cable_model.hpp"
#include "cablefem/meshing.hpp"
#include "cablefem/twist_geometry.hpp"

namespace cablefem {

enum class Bonding { solid, open };
enum class ArmorTreatment { wires_3d, series_circuit_2p5d, plain_2d };

struct SolveControls {
  double tolerance = 1e-8;        // relative residual contract
  double sigma_reg = 1e-3;        // S/m in nonconducting regions (3D gauge)
  int direct_max_dofs = 260000;   // above this, switch to preconditioned Krylov
  int max_iterations = 4000;
  int picard_max_iters = 25;      // field-dependent armor permeability
  double picard_tol = 1e-3;
  double ilut_droptol = 2e-4;
  int ilut_fill = 40;
};

struct SolverStats {
  std::string method;
  int iterations = 0;
  double residual = 0.0;
  int picard_iterations = 0;
  double assemble_seconds = 0.0;
  double solve_seconds = 0.0;
  int n_dofs = 0;
  int n_constraints = 0;
};

// One slave DoF tied to one master with a +-1 coefficient; master -1 pins the
// slave to zero.
struct Constraint {
  int slave = -1;
  int master = -1;
  double coeff = 1.0;
};

struct LinearSystem {
  Eigen::SparseMatrix<Complex> matrix;
  Eigen::VectorXcd rhs;
  std::vector<Constraint> constraints;
  int n_dofs = 0;
};

// Eliminates constraints, solves to the residual contract and expands the
// solution back to the full DoF space. Throws on breakdown.
Eigen::VectorXcd solve_linear_system(const LinearSystem& system, const SolveControls& controls,
                                     SolverStats* stats);

struct ExcitationSpec {
  // Balanced three-phase set: |I| at 0, -120, +120 degrees.
  static std::array<Complex, 3> balanced(double magnitude);
  std::array<Complex, 3> phase_currents{Complex(0, 0), Complex(0, 0), Complex(0, 0)};
};

struct SystemOptions {
  Bonding bonding = Bonding::solid;
  ArmorTreatment armor_treatment = ArmorTreatment::plain_2d;
  ExcitationSpec excitation;
  SolveControls solve;
};

// ---------------------------------------------------------------------------
// 2D / 2.5D solver
// ---------------------------------------------------------------------------

class Solver2D {
 public:
  Solver2D(const Mesh2D& mesh, const CableSpec& cable, const MaterialSet& materials,
           const SystemOptions& options);

  void assemble();
  const LinearSystem& system() const { return system_; }
  SolverStats solve();  // assembles when needed; runs Picard for mu(B) armor

  // Post-processing on the solved state. Losses are W/m, currents peak amperes.
  Complex region_current(const RegionTag& tag) const;
  double joule_loss(const RegionTag& tag) const;
  double magnetic_loss(const RegionTag& tag) const;
  double magnetic_energy() const;     // time-average, J/m
  Complex source_power() const;       // complex power injected per meter
  Complex armor_loop_current() const; // 2.5D series current
  Complex circuit_gradient(const RegionTag& tag) const;  // u_k, V/m

  // Field evaluation (tests): complex A_z and H at a point.
  Complex az_at(const Eigen::Vector2d& p) const;
  Complex az_region_average(const RegionTag& tag) const;
  double region_area(const RegionTag& tag) const;
  Eigen::Vector2cd h_at(const Eigen::Vector2d& p) const;
  Complex ampere_circulation(const Eigen::Vector2d& center, double radius, int samples = 720) const;

  const std::vector<RegionTag>& conducting_regions() const { return regions_; }
  const SolverStats& stats() const { return stats_; }

 private:
  void classify_regions();
  void build_materials();
  void assemble_once();
  int region_index_of_tri(int t) const;
  int locate_triangle(const Eigen::Vector2d& p) const;

  const Mesh2D& mesh_;
  const CableSpec& cable_;
  MaterialSet materials_;
  SystemOptions opt_;
  double omega_ = 0.0;

  std::vector<RegionTag> regions_;    // conducting regions in DoF order
  std::vector<int> tri_region_;      // triangle -> index into regions_, or -1
  std::vector<Complex> tri_nu_;      // complex reluctivity nu = 1/(mu0 mur)
  std::vector<double> tri_sigma_;
  std::vector<int> node_dof_;        // -1 for Dirichlet boundary nodes
  int n_node_dofs_ = 0;
  int loop_dof_ = -1;                // 2.5D series-loop current unknown
  std::vector<Complex> region_I_;    // imposed currents (phases), 0 elsewhere

  LinearSystem system_;
  Eigen::VectorXcd solution_;        // full DoF vector (nodes + circuits)
  SolverStats stats_;
  bool assembled_ = false;
  bool solved_ = false;
};

// ---------------------------------------------------------------------------
// 3D solver
// ---------------------------------------------------------------------------

class Solver3D {
 public:
  Solver3D(const Mesh3D& mesh, const CableSpec& cable, const MaterialSet& materials,
           const SystemOptions& options);

  void assemble();
  const LinearSystem& system() const { return system_; }
  SolverStats solve();

  Complex region_current(const RegionTag& tag) const;  // net axial current
  double joule_loss(const RegionTag& tag) const;       // W/m (total / length)
  double magnetic_loss(const RegionTag& tag) const;
  double magnetic_energy() const;                      // J/m
  Complex source_power() const;                        // W/m
  Complex circuit_gradient(const RegionTag& tag) const;
  double regularization_loss() const;                  // sigma_reg Joule, W/m

  // Circulation of H around a circle at axial position z (Ampere check).
  Complex ampere_circulation(const Eigen::Vector2d& center, double radius, double z,
                             int samples = 360) const;

  const std::vector<RegionTag>& conducting_regions() const { return regions_; }
  const SolverStats& stats() const { return stats_; }
  int edge_count() const { return n_edges_; }

  // Exposed for the congruence acceptance check: pairs every zL-face entity
  // with its z0 image under the plan's end map. Throws when any entity has no
  // match within tol.
  struct PeriodicMatch {
    int n_matched_edges = 0;
    double worst_distance = 0.0;
  };
  static PeriodicMatch match_end_faces(const Mesh3D& mesh, double tol = 1e-9);

 private:
  void build_edges();
  void classify_regions();
  void build_materials();
  void assemble_once();
  void build_constraints();

  const Mesh3D& mesh_;
  const CableSpec& cable_;
  MaterialSet materials_;
  SystemOptions opt_;
  double omega_ = 0.0;

  std::vector<std::array<int, 6>> tet_edges_;  // signed edge ids per tet (1-based, sign = orient)
  int n_edges_ = 0;
  std::vector<std::array<int, 2>> edges_;      // node pairs, ascending
  std::vector<RegionTag> regions_;
  std::vector<int> tet_region_;                // tet -> conducting region index or -1
  std::vector<Complex> tet_nu_;
  std::vector<double> tet_sigma_;              // physical conductivity
  std::vector<double> tet_sigma_eff_;          // with regularization
  std::vector<Complex> region_I_;

  LinearSystem system_;
  Eigen::VectorXcd solution_;
  SolverStats stats_;
  bool assembled_ = false;
  bool solved_ = false;
};

}  // namespace cablefem
