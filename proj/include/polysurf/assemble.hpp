#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "polysurf/basis.hpp"
#include "polysurf/quadrature.hpp"

namespace polysurf {

using SparseSym = Eigen::SparseMatrix<double>;

// First-fundamental-form data of one patch at a parameter point.
struct GeometryFactors {
  Eigen::Matrix<double, 3, 2> jac;   // columns d s/du, d s/dv
  Eigen::Matrix2d metric_inv;        // (J^T J)^-1
  double area_element = 0.0;         // sqrt(det(J^T J))
};

// Throws on rank-deficient geometry (det(J^T J) <= 1e-14); quadrature nodes
// are interior so collapsed polar edges are never evaluated.
GeometryFactors geometry_factors(const SplineComplex& complex, int patch, double u, double v);

// Scalar field sampled at a physical point; the patch id lets manufactured
// cases use global (x,y) coordinates on flat nets.
using ScalarField = std::function<double(const Vec3&, int patch)>;

// K_ij = sum over patches of int grad(B_i)^T (J^T J)^-1 grad(B_j) dA
SparseSym assemble_stiffness(const SplineComplex& complex, const ControlToBBMap& map,
                             const QuadratureRule& rule, int threads = 1);

// M_ij = sum over patches of int B_i B_j dA
SparseSym assemble_mass(const SplineComplex& complex, const ControlToBBMap& map,
                        const QuadratureRule& rule, int threads = 1);

// f_i = sum over patches of int f B_i dA
Eigen::VectorXd assemble_load(const SplineComplex& complex, const ControlToBBMap& map,
                              const QuadratureRule& rule, const ScalarField& f, int threads = 1);

// Lower-triangle coordinate dump "i j value" for external checks.
std::string matrix_text(const SparseSym& m);

}  // namespace polysurf
