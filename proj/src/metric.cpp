#include "halfflow/metric.hpp"

namespace halfflow {

double collar_width(double boundary_len) {
  if (!(boundary_len > 0.0))
    throw std::invalid_argument("collar_width: boundary length must be positive");
  const double l = boundary_len;
  return (2.0 * M_PI / l) * (M_PI / 2.0 - std::atan(std::sinh(l / 2.0)));
}

double collar_density(double boundary_len, double s) {
  if (!(boundary_len > 0.0))
    throw std::invalid_argument("collar_density: boundary length must be positive");
  const double l = boundary_len;
  if (!(s >= 0.0) || !(s < collar_width(l)))
    throw std::invalid_argument("collar_density: s outside [0, X(l))");
  return (l / (2.0 * M_PI)) / std::cos(l * s / (2.0 * M_PI));
}

}  // namespace halfflow
