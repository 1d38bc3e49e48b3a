#include "halfflow/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace halfflow {

GaussRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(static_cast<size_t>(n));
  rule.weights.resize(static_cast<size_t>(n));

  // Newton on P_n from the asymptotic initial guess; symmetric pairs.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // Re-evaluate P_{n-1} at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    pp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);

    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    rule.nodes[static_cast<size_t>(i)] = mid - rad * x;
    rule.nodes[static_cast<size_t>(n - 1 - i)] = mid + rad * x;
    rule.weights[static_cast<size_t>(i)] = rad * w;
    rule.weights[static_cast<size_t>(n - 1 - i)] = rad * w;
  }
  return rule;
}

}  // namespace halfflow
