#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <chrono>
#include <stdexcept>

#include "cablefem/em_solver.hpp"

namespace cablefem {

std::array<Complex, 3> ExcitationSpec::balanced(double magnitude) {
  const double a = 2.0 * 3.14159265358979323846 / 3.0;
  return {Complex(magnitude, 0.0), magnitude * Complex(std::cos(-a), std::sin(-a)),
          magnitude * Complex(std::cos(a), std::sin(a))};
}

namespace {

struct Reduction {
  std::vector<int> map;      // full dof -> reduced dof, -1 when eliminated
  std::vector<int> master;   // for eliminated: master full dof or -1 (zero)
  std::vector<double> coef;
  int n_reduced = 0;
};

Reduction build_reduction(const LinearSystem& s) {
  Reduction r;
  r.map.assign(s.n_dofs, 0);
  r.master.assign(s.n_dofs, -1);
  r.coef.assign(s.n_dofs, 0.0);
  std::vector<char> eliminated(s.n_dofs, 0);
  // Zero-pins first, then slave links; a slave whose master is pinned to zero
  // becomes a zero-pin itself.
  for (const auto& c : s.constraints) {
    if (c.master < 0) eliminated[c.slave] = 2;  // pinned
  }
  for (const auto& c : s.constraints) {
    if (c.master < 0) continue;
    if (eliminated[c.slave] == 2) continue;
    if (eliminated[c.master] == 2) {
      eliminated[c.slave] = 2;
      continue;
    }
    eliminated[c.slave] = 1;
    r.master[c.slave] = c.master;
    r.coef[c.slave] = c.coeff;
  }
  int n = 0;
  for (int i = 0; i < s.n_dofs; ++i) {
    if (eliminated[i]) {
      r.map[i] = -1;
    } else {
      r.map[i] = n++;
    }
  }
  r.n_reduced = n;
  for (const auto& c : s.constraints) {
    if (c.master >= 0 && r.map[c.master] == -1 && eliminated[c.slave] == 1) {
      throw std::runtime_error("solve: constraint chains are not supported (slave master)");
    }
  }
  return r;
}

}  // namespace

Eigen::VectorXcd solve_linear_system(const LinearSystem& s, const SolveControls& controls,
                                     SolverStats* stats) {
  using Clock = std::chrono::steady_clock;
  const auto t0 = Clock::now();
  const Reduction red = build_reduction(s);

  // Galerkin reduction with the real +-1 prolongation.
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(s.matrix.nonZeros());
  for (int k = 0; k < s.matrix.outerSize(); ++k) {
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(s.matrix, k); it; ++it) {
      int r = static_cast<int>(it.row());
      int c = static_cast<int>(it.col());
      Complex v = it.value();
      double scale = 1.0;
      if (red.map[r] == -1) {
        if (red.master[r] < 0) continue;
        scale *= red.coef[r];
        r = red.master[r];
      }
      if (red.map[c] == -1) {
        if (red.master[c] < 0) continue;
        scale *= red.coef[c];
        c = red.master[c];
      }
      trips.emplace_back(red.map[r], red.map[c], scale * v);
    }
  }
  Eigen::SparseMatrix<Complex> A(red.n_reduced, red.n_reduced);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(red.n_reduced);
  for (int i = 0; i < s.n_dofs; ++i) {
    if (red.map[i] >= 0) {
      b[red.map[i]] += s.rhs[i];
    } else if (red.master[i] >= 0) {
      b[red.map[red.master[i]]] += red.coef[i] * s.rhs[i];
    }
  }

  Eigen::VectorXcd y;
  std::string method;
  int iterations = 0;
  if (red.n_reduced <= controls.direct_max_dofs) {
    Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) {
      throw std::runtime_error("solve: sparse LU factorization failed (singular system?)");
    }
    y = lu.solve(b);
    // One step of iterative refinement keeps the residual at the contract
    // even for ill-scaled circuit rows.
    y += lu.solve(b - A * y);
    method = "sparse_lu";
  } else {
    Eigen::BiCGSTAB<Eigen::SparseMatrix<Complex>, Eigen::IncompleteLUT<Complex>> krylov;
    krylov.preconditioner().setDroptol(controls.ilut_droptol);
    krylov.preconditioner().setFillfactor(controls.ilut_fill);
    krylov.setTolerance(controls.tolerance * 0.1);
    krylov.setMaxIterations(controls.max_iterations);
    krylov.compute(A);
    y = krylov.solve(b);
    iterations = static_cast<int>(krylov.iterations());
    method = "bicgstab_ilut";
  }

  const double bnorm = std::max(b.norm(), 1e-300);
  const double residual = (b - A * y).norm() / bnorm;
  if (!(residual <= controls.tolerance)) {
    throw std::runtime_error("solve: relative residual " + std::to_string(residual) +
                             " misses the contract " + std::to_string(controls.tolerance) +
                             " (method " + method + ")");
  }

  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(s.n_dofs);
  for (int i = 0; i < s.n_dofs; ++i) {
    if (red.map[i] >= 0) {
      x[i] = y[red.map[i]];
    } else if (red.master[i] >= 0) {
      x[i] = red.coef[i] * y[red.map[red.master[i]]];
    }
  }
  if (stats) {
    stats->method = method;
    stats->iterations = iterations;
    stats->residual = residual;
    stats->n_dofs = red.n_reduced;
    stats->n_constraints = static_cast<int>(s.constraints.size());
    stats->solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  }
  return x;
}

}  // namespace cablefem
