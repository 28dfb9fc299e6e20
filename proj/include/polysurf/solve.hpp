#pragma once

#include "polysurf/assemble.hpp"

namespace polysurf {

struct FieldSolution {
  Eigen::VectorXd coeffs;  // one scalar per control vertex
};

// Jacobi-preconditioned conjugate gradients. Throws SolveError on
// non-convergence or detected indefiniteness. maxiter < 0 means 10 * dim.
struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Eigen::VectorXd solve_spd(const SparseSym& a, const Eigen::VectorXd& b, double tol = 1e-10,
                          int maxiter = -1);

// Steady problem: K c = load on the free DoFs, constrained DoFs fixed by the
// DofMap (zero for the homogeneous boundary case).
FieldSolution solve_poisson(const SplineComplex& complex, const ControlToBBMap& map,
                            const DofMap& dofs, const ScalarField& rhs,
                            const QuadratureRule& rule, double cg_tol = 1e-10, int threads = 1);

// One backward-Euler step: (M + dt K) c_next = M c on the free DoFs,
// constrained DoFs held at their prescribed values.
Eigen::VectorXd step_heat(const SparseSym& mass, const SparseSym& stiffness, const DofMap& dofs,
                          const Eigen::VectorXd& c, double dt, double cg_tol = 1e-10);

// Time series from a cold start (fixed values applied at t=0). Snapshots are
// taken at the first step boundary reaching each requested time; time 0 snaps
// the initial state.
std::vector<std::pair<double, FieldSolution>> run_heat(const SplineComplex& complex,
                                                       const ControlToBBMap& map,
                                                       const DofMap& dofs, double dt, int nsteps,
                                                       const std::vector<double>& snapshot_times,
                                                       const QuadratureRule& rule,
                                                       double cg_tol = 1e-10, int threads = 1);

struct ErrorReport {
  std::vector<double> per_patch;  // max |u_h - exact| on the sample grid
  double global_max = 0.0;
  int samples = 9;
};

ErrorReport error_field(const SplineComplex& complex, const ControlToBBMap& map,
                        const FieldSolution& solution,
                        const std::function<double(const Vec3&)>& exact, int samples = 9);

}  // namespace polysurf
