#include "polysurf/solve.hpp"

#include <algorithm>
#include <cmath>

#include "polysurf/bezier.hpp"

namespace polysurf {

namespace {

// rows/cols with both ends free, compacted by the dof numbering
SparseSym restrict_free(const SparseSym& a, const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> ts;
  for (int c = 0; c < a.outerSize(); ++c) {
    if (!dofs.is_free(c)) continue;
    for (SparseSym::InnerIterator it(a, c); it; ++it)
      if (dofs.is_free(int(it.row())))
        ts.emplace_back(dofs.free_index[int(it.row())], dofs.free_index[c], it.value());
  }
  SparseSym out(dofs.free_count, dofs.free_count);
  out.setFromTriplets(ts.begin(), ts.end());
  return out;
}

Eigen::VectorXd fixed_part(const DofMap& dofs) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dofs.free_index.size());
  for (size_t v = 0; v < dofs.free_index.size(); ++v)
    if (!dofs.is_free(int(v))) x[v] = dofs.fixed_value[int(v)];
  return x;
}

Eigen::VectorXd take_free(const Eigen::VectorXd& full, const DofMap& dofs) {
  Eigen::VectorXd out(dofs.free_count);
  for (size_t v = 0; v < dofs.free_index.size(); ++v)
    if (dofs.is_free(int(v))) out[dofs.free_index[v]] = full[int(v)];
  return out;
}

Eigen::VectorXd scatter(const Eigen::VectorXd& free_vals, const DofMap& dofs) {
  Eigen::VectorXd full = fixed_part(dofs);
  for (size_t v = 0; v < dofs.free_index.size(); ++v)
    if (dofs.is_free(int(v))) full[v] = free_vals[dofs.free_index[v]];
  return full;
}

// constrained elliptic solve: A_ff x_f = (b - A x_fixed)_f, returns the full
// vector with the fixed values back in place
Eigen::VectorXd solve_constrained(const SparseSym& a, const Eigen::VectorXd& b, const DofMap& dofs,
                                  double tol) {
  if (dofs.free_count == 0) throw SolveError("no free degrees of freedom");
  const Eigen::VectorXd shift = a * fixed_part(dofs);
  const Eigen::VectorXd rhs = take_free(b - shift, dofs);
  const Eigen::VectorXd xf = solve_spd(restrict_free(a, dofs), rhs, tol);
  return scatter(xf, dofs);
}

}  // namespace

Eigen::VectorXd solve_spd(const SparseSym& a, const Eigen::VectorXd& b, double tol, int maxiter) {
  const int n = int(a.rows());
  if (a.cols() != n || b.size() != n) throw SolveError("solve_spd: dimension mismatch");
  if (maxiter < 0) maxiter = std::max(100, 10 * n);

  Eigen::VectorXd invd(n);
  for (int i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    if (d <= 0.0) throw SolveError("matrix is not positive definite (diagonal)");
    invd[i] = 1.0 / d;
  }

  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) return x;
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = invd.asDiagonal() * r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  for (int it = 0; it < maxiter; ++it) {
    const Eigen::VectorXd ap = a * p;
    const double pap = p.dot(ap);
    if (pap <= 0.0) throw SolveError("matrix is not positive definite (pAp <= 0)");
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= tol * bnorm) return x;
    z = invd.asDiagonal() * r;
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  throw SolveError("conjugate gradients did not converge in " + std::to_string(maxiter) +
                   " iterations");
}

FieldSolution solve_poisson(const SplineComplex& complex, const ControlToBBMap& map,
                            const DofMap& dofs, const ScalarField& rhs, const QuadratureRule& rule,
                            double cg_tol, int threads) {
  if (dofs.free_count == int(dofs.free_index.size()))
    throw SolveError("no constrained boundary: the Poisson problem is singular");
  const SparseSym k = assemble_stiffness(complex, map, rule, threads);
  const Eigen::VectorXd f = assemble_load(complex, map, rule, rhs, threads);
  FieldSolution sol;
  sol.coeffs = solve_constrained(k, f, dofs, cg_tol);
  return sol;
}

Eigen::VectorXd step_heat(const SparseSym& mass, const SparseSym& stiffness, const DofMap& dofs,
                          const Eigen::VectorXd& c, double dt, double cg_tol) {
  if (dt <= 0.0) throw SolveError("step_heat: dt must be positive");
  const SparseSym a = mass + dt * stiffness;
  return solve_constrained(a, mass * c, dofs, cg_tol);
}

std::vector<std::pair<double, FieldSolution>> run_heat(const SplineComplex& complex,
                                                       const ControlToBBMap& map,
                                                       const DofMap& dofs, double dt, int nsteps,
                                                       const std::vector<double>& snapshot_times,
                                                       const QuadratureRule& rule, double cg_tol,
                                                       int threads) {
  if (dt <= 0.0 || nsteps <= 0) throw SolveError("run_heat: need positive dt and step count");
  const SparseSym m = assemble_mass(complex, map, rule, threads);
  const SparseSym k = assemble_stiffness(complex, map, rule, threads);

  std::vector<double> wanted = snapshot_times;
  std::sort(wanted.begin(), wanted.end());
  std::vector<std::pair<double, FieldSolution>> out;

  Eigen::VectorXd c = fixed_part(dofs);
  size_t next = 0;
  while (next < wanted.size() && wanted[next] <= 1e-12) {
    out.push_back({wanted[next], FieldSolution{c}});
    ++next;
  }
  for (int s = 1; s <= nsteps && next < wanted.size(); ++s) {
    c = step_heat(m, k, dofs, c, dt, cg_tol);
    const double t = s * dt;
    while (next < wanted.size() && wanted[next] <= t + 1e-12) {
      out.push_back({wanted[next], FieldSolution{c}});
      ++next;
    }
  }
  return out;
}

ErrorReport error_field(const SplineComplex& complex, const ControlToBBMap& map,
                        const FieldSolution& solution,
                        const std::function<double(const Vec3&)>& exact, int samples) {
  if (samples < 2) samples = 2;
  const auto field = apply_map(map, solution.coeffs);
  ErrorReport rep;
  rep.samples = samples;
  rep.per_patch.assign(complex.patch_count(), 0.0);
  for (int p = 0; p < complex.patch_count(); ++p) {
    double worst = 0.0;
    for (int i = 0; i < samples; ++i)
      for (int j = 0; j < samples; ++j) {
        const double u = double(i) / (samples - 1), v = double(j) / (samples - 1);
        const double uh = eval(field[p], u, v);
        const double ue = exact(eval(complex.patches[p], u, v));
        worst = std::max(worst, std::abs(uh - ue));
      }
    rep.per_patch[p] = worst;
    rep.global_max = std::max(rep.global_max, worst);
  }
  return rep;
}

}  // namespace polysurf
