#pragma once

#include <string>
#include <vector>

#include "polysurf/construct.hpp"

namespace polysurf {

// One generating function per control vertex: the vertex's column of the
// control-to-BB map, grouped into 4x4 coefficient blocks per support patch.
struct BasisFunction {
  int vertex = -1;
  std::vector<std::pair<int, std::array<double, 16>>> support;  // (patch, row-major block)
};

BasisFunction basis_function(const ControlToBBMap& map, int vertex);

// Symmetric adjacency over vertices: (i,j) listed iff some patch carries
// nonzero coefficients of both columns. Includes i itself when its support is
// nonempty. Drives the assembly sparsity pattern.
std::vector<std::vector<int>> overlap_graph(const ControlToBBMap& map);

struct DofMap {
  std::vector<int> free_index;  // per vertex: compact index among free, -1 if constrained
  Eigen::VectorXd fixed_value;  // per vertex: prescribed value (0 where free)
  int free_count = 0;

  bool is_free(int v) const { return free_index[v] >= 0; }
  std::string text() const;  // "dof <v> free|fixed <value>" per line
};

// Constrains every vertex whose generating function is nonzero on the domain
// boundary (uncovered patch edges) to boundary_value, plus the explicitly
// pinned vertices; vertices with empty support are constrained as well.
struct BoundarySpec {
  double boundary_value = 0.0;
  std::vector<std::pair<int, double>> pinned;
};

DofMap apply_dirichlet(const HalfEdgeMesh& mesh, const ControlToBBMap& map,
                       const SplineComplex& complex, const BoundarySpec& spec);

}  // namespace polysurf
