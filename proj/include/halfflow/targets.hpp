#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>

namespace halfflow {

struct TargetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// dist(p, N) >= eta: the nearest-point projection is only defined on the
// open tubular neighbourhood.
struct OutsideTubularNeighbourhood : TargetError {
  using TargetError::TargetError;
};

// p is (numerically) equidistant from several nearest points.
struct CutLocusAmbiguity : TargetError {
  using TargetError::TargetError;
};

// Closed submanifold N of R^n with nearest-point projection and
// tangent/normal projectors. Projectors are always evaluated at the
// projected base point, so P_p = P_{pi(p)} throughout the tube; outside
// the tube every operation throws rather than extending.
class TargetManifold {
 public:
  virtual ~TargetManifold() = default;

  virtual int ambient_dim() const = 0;
  virtual double tubular_radius() const = 0;
  virtual double distance(std::span<const double> p) const = 0;
  virtual std::string name() const = 0;

  void nearest_point(std::span<const double> p, std::span<double> out) const;
  void tangent_project(std::span<const double> p, std::span<const double> w,
                       std::span<double> out) const;
  void normal_project(std::span<const double> p, std::span<const double> w,
                      std::span<double> out) const;

 protected:
  // Projection assuming the tube/cut-locus guards already passed.
  virtual void project_unchecked(std::span<const double> p,
                                 std::span<double> out) const = 0;
  // Tangent projector at a point q on N.
  virtual void tangent_at(std::span<const double> q, std::span<const double> w,
                          std::span<double> out) const = 0;
  // Throws CutLocusAmbiguity if p is within tolerance of equidistance.
  virtual void check_cut_locus(std::span<const double> p) const = 0;

  static constexpr double kCutLocusTol = 1e-9;
};

// Round sphere of radius R about the origin in R^n.
class SphereTarget final : public TargetManifold {
 public:
  SphereTarget(double radius, int ambient_dim, double eta = -1.0);

  int ambient_dim() const override { return n_; }
  double tubular_radius() const override { return eta_; }
  double distance(std::span<const double> p) const override;
  std::string name() const override { return "sphere"; }
  double radius() const { return radius_; }

 protected:
  void project_unchecked(std::span<const double> p, std::span<double> out) const override;
  void tangent_at(std::span<const double> q, std::span<const double> w,
                  std::span<double> out) const override;
  void check_cut_locus(std::span<const double> p) const override;

 private:
  double radius_;
  int n_;
  double eta_;
};

// Two disjoint coaxial circles of radius r in the planes z = +-h of R^3.
class CirclePairTarget final : public TargetManifold {
 public:
  CirclePairTarget(double radius, double half_gap, double eta = -1.0);

  int ambient_dim() const override { return 3; }
  double tubular_radius() const override { return eta_; }
  double distance(std::span<const double> p) const override;
  std::string name() const override { return "circle_pair"; }
  double radius() const { return radius_; }
  double half_gap() const { return half_gap_; }

 protected:
  void project_unchecked(std::span<const double> p, std::span<double> out) const override;
  void tangent_at(std::span<const double> q, std::span<const double> w,
                  std::span<double> out) const override;
  void check_cut_locus(std::span<const double> p) const override;

 private:
  double dist_to_circle(std::span<const double> p, double height) const;
  double radius_;
  double half_gap_;
  double eta_;
};

}  // namespace halfflow
