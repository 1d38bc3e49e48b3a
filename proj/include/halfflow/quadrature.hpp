#pragma once

#include <vector>

namespace halfflow {

// Gauss-Legendre nodes and weights on [lo, hi].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const { return static_cast<int>(nodes.size()); }
};

GaussRule gauss_legendre(int n, double lo, double hi);

}  // namespace halfflow
