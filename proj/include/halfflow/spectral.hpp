#pragma once

#include <complex>
#include <span>
#include <vector>

#include "halfflow/kernels.hpp"
#include "halfflow/metric.hpp"

namespace halfflow {

using cplx = std::complex<double>;

inline int default_grid_size(int max_mode) { return 4 * max_mode; }

// Truncated Fourier representation of a map from the boundary circles
// into R^n. Coefficients are Hermitian (c_{-k} = conj c_k) so the field
// is real-valued; layout coeffs[circle][comp][k + K].
struct BoundaryField {
  int num_circles = 1;
  int ambient_dim = 1;
  int max_mode = 0;   // K
  int grid_size = 2;  // M >= 2K+1
  std::vector<cplx> coeffs;

  static BoundaryField zeros(int circles, int n, int K, int M = -1);

  int modes_per_comp() const { return 2 * max_mode + 1; }
  size_t index(int circle, int comp, int k) const {
    return (static_cast<size_t>(circle) * ambient_dim + comp) * modes_per_comp() +
           static_cast<size_t>(k + max_mode);
  }
  cplx& at(int circle, int comp, int k) { return coeffs[index(circle, comp, k)]; }
  const cplx& at(int circle, int comp, int k) const {
    return coeffs[index(circle, comp, k)];
  }
  // Contiguous [comp][mode] block for one circle.
  const cplx* circle_data(int circle) const {
    return coeffs.data() + static_cast<size_t>(circle) * ambient_dim * modes_per_comp();
  }
  cplx* circle_data(int circle) {
    return coeffs.data() + static_cast<size_t>(circle) * ambient_dim * modes_per_comp();
  }

  bool same_shape(const BoundaryField& o) const {
    return num_circles == o.num_circles && ambient_dim == o.ambient_dim &&
           max_mode == o.max_mode;
  }
  void axpy(double alpha, const BoundaryField& o);
  void scale(double alpha);
  // Re-imposes c_{-k} = conj(c_k) and a real mean; linear flow updates
  // preserve Hermitian symmetry, so this only clears rounding residue.
  void enforce_real();
  bool finite() const;
};

// Physical samples of one circle: values[comp*M + m], theta_m = 2 pi m / M.
using CircleSamples = std::vector<double>;

// Truncated Fourier analysis of per-circle physical grids; exact on
// band-limited input. Throws std::invalid_argument if a grid has fewer
// than 2K+1 points or the circles disagree in size.
BoundaryField analyze(const std::vector<CircleSamples>& samples, int ambient_dim,
                      int max_mode);

std::vector<CircleSamples> synthesize(const BoundaryField& u);

// Per-mode closed-form harmonic extension. Disc: c_k r^{|k|} e^{ik theta}.
// Cylinder: conformal chart [-L, L] x S^1 with L = pi/a, per-mode basis
// normalised to the boundary values:
//   f_k(s) = even_k * cosh(ks)/cosh(kL) + odd_k * sinh(ks)/sinh(kL)
// (affine 1, s for k = 0), which stays bounded for all kL and reproduces
// the traces at s = +-L exactly.
struct HarmonicExtension {
  DomainSpec domain;
  int ambient_dim = 0;
  int max_mode = 0;

  // Disc storage: trace coefficients per comp, k in [-K, K].
  std::vector<cplx> disc_modes;

  // Cylinder storage, k in [0, K]: even = (t+b)/2;
  // odd = (t-b)/2 for k >= 1, (t-b)/(2L) for k = 0.
  std::vector<cplx> even, odd;

  // Mode value/derivative at chart height s (cylinder) or radius r (disc,
  // radial derivative). k >= 0.
  cplx mode_value(int comp, int k, double srad) const;
  cplx mode_deriv(int comp, int k, double srad) const;

  // Pointwise evaluation (chart coordinates); out has ambient_dim entries.
  void eval(double srad, double theta, std::span<double> out) const;

  // Row evaluation on the uniform theta grid of `trig`:
  // values / d/ds (or d/dr) / d/dtheta, each comp-major of size n * M.
  void eval_row(double srad, const kernels::TrigTable& trig,
                std::span<double> values) const;
  void eval_gradient_row(double srad, const kernels::TrigTable& trig,
                         std::span<double> d_srad, std::span<double> d_theta) const;
};

HarmonicExtension harmonic_extend(const BoundaryField& u, const DomainSpec& domain);

// Dirichlet-to-Neumann map with respect to the actual domain metric:
// disc multiplier |k|; cylinder chart matrices scaled by 2 pi / sqrt(a).
BoundaryField dtn(const BoundaryField& u, const DomainSpec& domain);

// E_1/2(u, g): Dirichlet energy of the harmonic extension, closed form
// over modes.
double half_energy(const BoundaryField& u, const DomainSpec& domain);

// Integral of u . v over (boundary, ds_g) by spectral quadrature.
double boundary_inner(const BoundaryField& u, const BoundaryField& v,
                      const DomainSpec& domain);

inline double boundary_norm(const BoundaryField& u, const DomainSpec& domain) {
  double q = boundary_inner(u, u, domain);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

// d/d(arclength) along each boundary circle of (boundary, ds_g).
BoundaryField tangential_derivative(const BoundaryField& u, const DomainSpec& domain);

}  // namespace halfflow
