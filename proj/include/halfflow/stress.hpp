#pragma once

#include "halfflow/quadrature.hpp"
#include "halfflow/spectral.hpp"

namespace halfflow {

// Interior quadrature grid: Gauss-Legendre in the radial/height direction
// times a uniform theta grid. Node counts scale with the mode cutoff (and,
// on the cylinder, with the chart length so boundary layers of width ~1/K
// stay resolved).
struct InteriorGrid {
  GaussRule line;  // s in [-L, L] (cylinder) or r in (0, 1) (disc)
  int ntheta = 0;
  double theta_weight() const { return 2.0 * M_PI / ntheta; }
};

InteriorGrid make_interior_grid(const DomainSpec& domain, int max_mode);

// Conformal-chart components of the stress-energy tensor
// k(u_g, g) = u_g^* g_eucl - (1/2) |d u_g|^2_g g sampled on an interior
// grid: k_ss = (|u_s|^2 - |u_theta|^2)/2, k_st = u_s . u_theta,
// k_tt = -k_ss (trace-free by construction).
struct StressEnergy {
  int ns = 0, ntheta = 0;
  std::vector<double> k_ss, k_st, k_tt;  // row-major [is][itheta]
  InteriorGrid grid;
  double at_ss(int is, int it) const { return k_ss[static_cast<size_t>(is) * ntheta + it]; }
};

StressEnergy stress_energy(const HarmonicExtension& ext, const CylinderMetric& g);
StressEnergy stress_energy(const HarmonicExtension& ext, const CylinderMetric& g,
                           const InteriorGrid& grid);

// L^2(Sigma, g_a) pairing of a sampled stress tensor with the horizontal
// direction ds^2 - dtheta^2 (= a^-2 dx^2 - dtheta^2 in the (x,theta)
// chart), via the conformal reduction
//   int <k,h>_g dv_g = int lambda^-2 <k,h>_delta ds dtheta.
double horizontal_pairing(const StressEnergy& k, const CylinderMetric& g);

// ||k||_{L^2(Sigma, g_a)} from the sampled components.
double stress_l2_norm(const StressEnergy& k, const CylinderMetric& g);

// Closed-form integral of |u_s|^2 - |u_theta|^2 over the conformal chart
// (equals the integral of Re of the Hopf differential, and of 2 k_ss);
// vanishes iff the extension pairs trivially with the horizontal
// direction. Production path for the three quantities below; the grid
// quadrature above stays as the independent test route.
double conformal_defect(const BoundaryField& u, const CylinderMetric& g);

// da/dt = (a^2/4) <k(u_g, g_a), d_a g_a>_{L^2(g_a)}, the scalar reduction
// of dg/dt = (1/2) P^H(k) along the family g_a (||d_a g_a||^2 = 2/a^2).
double metric_velocity(const BoundaryField& u, const CylinderMetric& g);

// d/da E_1/2(u, g_a), closed form per mode; equals
// -(1/2) <d_a g_a, k(u_g, g_a)>_{L^2(g_a)}.
double energy_metric_derivative(const BoundaryField& u, const CylinderMetric& g);

// ||P^H_{g_a}(k(u_g, g_a))||_{L^2(g_a)} = |<k, d_a g_a>| / ||d_a g_a||.
double horizontal_projection_norm(const BoundaryField& u, const CylinderMetric& g);

}  // namespace halfflow
