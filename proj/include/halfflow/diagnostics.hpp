#pragma once

#include <optional>

#include "halfflow/stress.hpp"
#include "halfflow/targets.hpp"

namespace halfflow {

// The three residuals measuring distance to a free-boundary minimal
// surface: the map is half-harmonic iff the first vanishes; the
// extension is conformal iff the second vanishes; on the cylinder the
// metric is critical iff the third vanishes (it equals ||P^H k|| and is
// bounded by the second).
struct ResidualReport {
  double half_harmonic = 0.0;  // ||P_u dtn u||_{L2(boundary, ds_g)}
  double conformality = 0.0;   // ||k(u_g, g)||_{L2(Sigma, g)}
  double horizontal = 0.0;     // ||P^H_g k||_{L2} (cylinder; 0 on the disc)
};

// P_u(dtn u) sampled on the physical grid: synthesize dtn u and u, apply
// the tangent projector at the trace values pointwise.
std::vector<CircleSamples> projected_neumann_samples(const BoundaryField& u,
                                                     const DomainSpec& domain,
                                                     const TargetManifold& target);

// The same data analyzed back into a boundary field on the oversampled grid.
BoundaryField projected_neumann(const BoundaryField& u, const DomainSpec& domain,
                                const TargetManifold& target);

// ||w||_{L2(boundary, ds_g)} of grid samples by trapezoid quadrature.
double boundary_samples_norm(const std::vector<CircleSamples>& w, int ambient_dim,
                             const DomainSpec& domain);

ResidualReport residuals(const BoundaryField& u, const DomainSpec& domain,
                         const TargetManifold& target);

// Central-difference validation of the first variation in the map:
// d/de E(pi(u + e v)) vs boundary_inner(v, P_u dtn u); returns the
// relative error of the Richardson-combined difference (steps 1e-4, 1e-5).
double fd_check_map_variation(const BoundaryField& u, const BoundaryField& v,
                              const DomainSpec& domain, const TargetManifold& target);

// Same for the metric direction: d/da E(u, g_a) vs
// -(1/2) <d_a g_a, k>_{L2(g_a)} evaluated by stress-tensor quadrature.
double fd_check_metric_variation(const BoundaryField& u, const CylinderMetric& g);

struct LocalEnergyScan {
  double value = 0.0;  // sup over boundary points of the windowed energy
  int circle = 0;
  double theta = 0.0;  // argmax boundary point
};

// Max over boundary points of the Dirichlet energy of u_g on the metric
// ball of radius r, smoothed by a fixed quintic cutoff on [r/2, r].
LocalEnergyScan local_energy_scan(const BoundaryField& u, const DomainSpec& domain,
                                  double radius);

// Degree of the angular coordinate of pi(u) about the target axis on one
// boundary circle, by unwrapped phase on the physical grid.
int winding_number(const BoundaryField& u, const CirclePairTarget& target, int circle);

// Boundary data and metric parameter of the catenoid spanning coaxial
// circles of radius r at heights +-h: solves L/cosh L = h/r (smaller root
// = the stable branch; the larger root sits behind `unstable_branch`).
struct CatenoidReference {
  BoundaryField boundary;
  double a = 0.0;                     // metric parameter pi / L*
  double conformal_half_length = 0.0; // L*
};

std::optional<CatenoidReference> catenoid_reference(double half_gap,
                                                    double radius = 1.0,
                                                    int max_mode = 32,
                                                    bool unstable_branch = false);

// Largest ratio half_gap/radius for which a connecting catenoid exists
// (max of L/cosh L).
double catenoid_existence_ratio();

}  // namespace halfflow
