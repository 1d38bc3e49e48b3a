#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace halfflow {

// Flat unit-area cylinder metric g_a = (2pi)^-2 (a^-1 dx^2 + a dtheta^2)
// on [-pi,pi] x S^1. In the conformal chart s = x/a the metric becomes
// (a/(2pi)^2)(ds^2 + dtheta^2) with s in [-L, L], L = pi/a.
struct CylinderMetric {
  double a = 1.0;

  explicit CylinderMetric(double a_) : a(a_) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument("CylinderMetric: parameter a must be positive");
  }

  double boundary_length() const { return std::sqrt(a); }
  double conformal_half_length() const { return M_PI / a; }
  // lambda^2 in g = lambda^2 (ds^2 + dtheta^2).
  double conformal_factor_sq() const { return a / (4.0 * M_PI * M_PI); }
  double injectivity_radius() const {
    return 0.5 * std::sqrt(std::min(a, 1.0 / a));
  }
};

inline double injectivity_radius(const CylinderMetric& g) {
  return g.injectivity_radius();
}

enum class DomainKind { Disc, Cylinder };

struct DomainSpec {
  DomainKind kind = DomainKind::Disc;
  std::optional<CylinderMetric> metric;  // engaged iff kind == Cylinder

  static DomainSpec disc() { return DomainSpec{DomainKind::Disc, std::nullopt}; }
  static DomainSpec cylinder(double a) {
    return DomainSpec{DomainKind::Cylinder, CylinderMetric(a)};
  }

  int circles() const { return kind == DomainKind::Disc ? 1 : 2; }
  const CylinderMetric& cylinder_metric() const {
    if (!metric) throw std::logic_error("DomainSpec: no metric on the disc");
    return *metric;
  }
  // Length of each boundary circle under the domain metric.
  double circle_length() const {
    return kind == DomainKind::Disc ? 2.0 * M_PI : metric->boundary_length();
  }
};

// Hyperbolic collar about a geodesic boundary curve of length l:
// width X(l) and conformal density rho_l(s). Standalone utilities; the
// flow itself runs only on the disc and the flat cylinder.
double collar_width(double boundary_len);
double collar_density(double boundary_len, double s);

}  // namespace halfflow
