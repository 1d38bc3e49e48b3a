#include "halfflow/targets.hpp"

#include <cmath>

namespace halfflow {

namespace {

double norm2(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void TargetManifold::nearest_point(std::span<const double> p,
                                   std::span<double> out) const {
  check_cut_locus(p);
  if (!(distance(p) < tubular_radius()))
    throw OutsideTubularNeighbourhood(name() + ": point outside the tubular neighbourhood");
  project_unchecked(p, out);
}

void TargetManifold::tangent_project(std::span<const double> p,
                                     std::span<const double> w,
                                     std::span<double> out) const {
  std::vector<double> base(p.size());
  nearest_point(p, base);
  tangent_at(base, w, out);
}

void TargetManifold::normal_project(std::span<const double> p,
                                    std::span<const double> w,
                                    std::span<double> out) const {
  tangent_project(p, w, out);
  for (size_t i = 0; i < w.size(); ++i) out[i] = w[i] - out[i];
}

SphereTarget::SphereTarget(double radius, int ambient_dim, double eta)
    : radius_(radius), n_(ambient_dim), eta_(eta > 0.0 ? eta : radius / 2.0) {
  if (!(radius > 0.0)) throw std::invalid_argument("SphereTarget: radius must be positive");
  if (ambient_dim < 2) throw std::invalid_argument("SphereTarget: ambient_dim must be >= 2");
}

double SphereTarget::distance(std::span<const double> p) const {
  return std::abs(norm2(p) - radius_);
}

void SphereTarget::check_cut_locus(std::span<const double> p) const {
  if (norm2(p) <= kCutLocusTol)
    throw CutLocusAmbiguity("sphere: point at the centre is equidistant from all of N");
}

void SphereTarget::project_unchecked(std::span<const double> p,
                                     std::span<double> out) const {
  const double scale = radius_ / norm2(p);
  for (size_t i = 0; i < p.size(); ++i) out[i] = scale * p[i];
}

void SphereTarget::tangent_at(std::span<const double> q, std::span<const double> w,
                              std::span<double> out) const {
  double dot = 0.0;
  for (size_t i = 0; i < q.size(); ++i) dot += q[i] * w[i];
  dot /= radius_ * radius_;
  for (size_t i = 0; i < q.size(); ++i) out[i] = w[i] - dot * q[i];
}

CirclePairTarget::CirclePairTarget(double radius, double half_gap, double eta)
    : radius_(radius),
      half_gap_(half_gap),
      eta_(eta > 0.0 ? eta : std::min(radius, half_gap) / 2.0) {
  if (!(radius > 0.0) || !(half_gap > 0.0))
    throw std::invalid_argument("CirclePairTarget: radius and half_gap must be positive");
  if (eta_ > std::min(radius_, half_gap_) / 2.0)
    throw std::invalid_argument(
        "CirclePairTarget: eta must not exceed min(radius, half_gap)/2");
}

double CirclePairTarget::dist_to_circle(std::span<const double> p, double height) const {
  const double rho = std::hypot(p[0], p[1]);
  return std::hypot(rho - radius_, p[2] - height);
}

double CirclePairTarget::distance(std::span<const double> p) const {
  return std::min(dist_to_circle(p, half_gap_), dist_to_circle(p, -half_gap_));
}

void CirclePairTarget::check_cut_locus(std::span<const double> p) const {
  if (std::hypot(p[0], p[1]) <= kCutLocusTol)
    throw CutLocusAmbiguity("circle_pair: point on the axis has no unique nearest point");
  const double dtop = dist_to_circle(p, half_gap_);
  const double dbot = dist_to_circle(p, -half_gap_);
  if (std::abs(dtop - dbot) <= kCutLocusTol)
    throw CutLocusAmbiguity("circle_pair: point equidistant from both circles");
}

void CirclePairTarget::project_unchecked(std::span<const double> p,
                                         std::span<double> out) const {
  const double dtop = dist_to_circle(p, half_gap_);
  const double dbot = dist_to_circle(p, -half_gap_);
  const double z = dtop < dbot ? half_gap_ : -half_gap_;
  const double rho = std::hypot(p[0], p[1]);
  out[0] = radius_ * p[0] / rho;
  out[1] = radius_ * p[1] / rho;
  out[2] = z;
}

void CirclePairTarget::tangent_at(std::span<const double> q, std::span<const double> w,
                                  std::span<double> out) const {
  // Tangent line is the theta-direction of the circle through q.
  const double rho = std::hypot(q[0], q[1]);
  const double tx = -q[1] / rho, ty = q[0] / rho;
  const double dot = tx * w[0] + ty * w[1];
  out[0] = dot * tx;
  out[1] = dot * ty;
  out[2] = 0.0;
}

}  // namespace halfflow
