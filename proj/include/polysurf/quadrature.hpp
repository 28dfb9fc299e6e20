#pragma once

#include <vector>

namespace polysurf {

// Gauss-Legendre rule mapped to [0,1]; weights sum to 1.
struct QuadratureRule {
  int order = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

// Exact for polynomials of degree <= 2g-1; supported orders 1..16.
QuadratureRule make_gauss_rule(int g);

}  // namespace polysurf
