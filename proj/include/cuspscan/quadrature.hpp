#pragma once

#include <vector>

namespace cusp {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule, cached per n.
const QuadratureRule &gauss_legendre(int n);

}  // namespace cusp
