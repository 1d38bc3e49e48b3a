#include "halfflow/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace halfflow {

namespace {

// C^2 quintic falling from 1 to 0 as x runs over [0, 1].
double quintic_fade(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double cutoff(double dist, double radius) {
  return quintic_fade((dist - 0.5 * radius) / (0.5 * radius));
}

double wrap_angle(double x) {
  x = std::fmod(x, 2.0 * M_PI);
  if (x > M_PI) x -= 2.0 * M_PI;
  if (x < -M_PI) x += 2.0 * M_PI;
  return x;
}

double richardson_central(double f_p1, double f_m1, double h1, double f_p2,
                          double f_m2, double h2) {
  const double d1 = (f_p1 - f_m1) / (2.0 * h1);
  const double d2 = (f_p2 - f_m2) / (2.0 * h2);
  const double r1 = h1 * h1, r2 = h2 * h2;
  return (r1 * d2 - r2 * d1) / (r1 - r2);
}

double rel_err(double got, double want) {
  const double scale = std::max(std::abs(got), std::abs(want));
  if (scale < 1e-14) return std::abs(got - want);
  return std::abs(got - want) / scale;
}

// Disc conformality residual via the Hopf differential in polar
// coordinates: ||k||^2 = (1/2) int |phi|^2 dx dy with
// phi = sum_c (u_r^c - i u_theta^c / r)^2 (up to a unit phase).
double disc_conformality(const HarmonicExtension& ext, const InteriorGrid& grid) {
  const kernels::TrigTable trig(grid.ntheta);
  const int n = ext.ambient_dim;
  const double wt = grid.theta_weight();
  const double integral = kernels::ordered_sum(grid.line.size(), [&](int ir) {
    const double r = grid.line.nodes[static_cast<size_t>(ir)];
    std::vector<double> ur(static_cast<size_t>(n) * grid.ntheta);
    std::vector<double> ut(ur.size());
    ext.eval_gradient_row(r, trig, ur, ut);
    double row = 0.0;
    for (int it = 0; it < grid.ntheta; ++it) {
      cplx phi(0.0, 0.0);
      for (int c = 0; c < n; ++c) {
        const cplx z(ur[static_cast<size_t>(c) * grid.ntheta + it],
                     -ut[static_cast<size_t>(c) * grid.ntheta + it] / r);
        phi += z * z;
      }
      row += std::norm(phi);
    }
    return grid.line.weights[static_cast<size_t>(ir)] * wt * r * row;
  });
  const double q = 0.5 * integral;
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

}  // namespace

std::vector<CircleSamples> projected_neumann_samples(const BoundaryField& u,
                                                     const DomainSpec& domain,
                                                     const TargetManifold& target) {
  if (u.ambient_dim != target.ambient_dim())
    throw std::invalid_argument("projected_neumann: ambient dimension mismatch");
  const BoundaryField neumann = dtn(u, domain);
  const auto u_grid = synthesize(u);
  auto w_grid = synthesize(neumann);
  const int n = u.ambient_dim;
  const int M = u.grid_size;
  std::vector<double> p(static_cast<size_t>(n)), w(p.size()), out(p.size());
  for (int circle = 0; circle < u.num_circles; ++circle) {
    auto& wg = w_grid[static_cast<size_t>(circle)];
    const auto& ug = u_grid[static_cast<size_t>(circle)];
    for (int m = 0; m < M; ++m) {
      for (int c = 0; c < n; ++c) {
        p[static_cast<size_t>(c)] = ug[static_cast<size_t>(c) * M + m];
        w[static_cast<size_t>(c)] = wg[static_cast<size_t>(c) * M + m];
      }
      target.tangent_project(p, w, out);
      for (int c = 0; c < n; ++c)
        wg[static_cast<size_t>(c) * M + m] = out[static_cast<size_t>(c)];
    }
  }
  return w_grid;
}

BoundaryField projected_neumann(const BoundaryField& u, const DomainSpec& domain,
                                const TargetManifold& target) {
  return analyze(projected_neumann_samples(u, domain, target), u.ambient_dim,
                 u.max_mode);
}

double boundary_samples_norm(const std::vector<CircleSamples>& w, int ambient_dim,
                             const DomainSpec& domain) {
  const double len = domain.circle_length();
  double total = 0.0;
  for (const auto& circle : w) {
    const int M = static_cast<int>(circle.size()) / ambient_dim;
    double s = 0.0;
    for (double v : circle) s += v * v;
    total += len / M * s;
  }
  return total > 0.0 ? std::sqrt(total) : 0.0;
}

ResidualReport residuals(const BoundaryField& u, const DomainSpec& domain,
                         const TargetManifold& target) {
  ResidualReport rep;
  // Norm taken on the grid so no truncation enters.
  rep.half_harmonic = boundary_samples_norm(
      projected_neumann_samples(u, domain, target), u.ambient_dim, domain);

  const HarmonicExtension ext = harmonic_extend(u, domain);
  if (domain.kind == DomainKind::Disc) {
    rep.conformality = disc_conformality(ext, make_interior_grid(domain, u.max_mode));
    rep.horizontal = 0.0;
  } else {
    const CylinderMetric& g = domain.cylinder_metric();
    rep.conformality = stress_l2_norm(stress_energy(ext, g), g);
    rep.horizontal = horizontal_projection_norm(u, g);
  }
  return rep;
}

namespace {

// E_1/2 of the pointwise projection of (u + eps v) onto the target.
double projected_energy(const BoundaryField& u, const BoundaryField& v, double eps,
                        const DomainSpec& domain, const TargetManifold& target) {
  const auto ug = synthesize(u);
  const auto vg = synthesize(v);
  const int n = u.ambient_dim, M = u.grid_size;
  std::vector<CircleSamples> proj(ug.size());
  std::vector<double> p(static_cast<size_t>(n)), out(p.size());
  for (size_t circle = 0; circle < ug.size(); ++circle) {
    proj[circle].resize(ug[circle].size());
    for (int m = 0; m < M; ++m) {
      for (int c = 0; c < n; ++c)
        p[static_cast<size_t>(c)] = ug[circle][static_cast<size_t>(c) * M + m] +
                                    eps * vg[circle][static_cast<size_t>(c) * M + m];
      target.nearest_point(p, out);
      for (int c = 0; c < n; ++c)
        proj[circle][static_cast<size_t>(c) * M + m] = out[static_cast<size_t>(c)];
    }
  }
  return half_energy(analyze(proj, n, u.max_mode), domain);
}

}  // namespace

double fd_check_map_variation(const BoundaryField& u, const BoundaryField& v,
                              const DomainSpec& domain, const TargetManifold& target) {
  const double analytic = boundary_inner(v, projected_neumann(u, domain, target), domain);
  const double h1 = 1e-4, h2 = 1e-5;
  const double fd = richardson_central(
      projected_energy(u, v, h1, domain, target),
      projected_energy(u, v, -h1, domain, target), h1,
      projected_energy(u, v, h2, domain, target),
      projected_energy(u, v, -h2, domain, target), h2);
  return rel_err(fd, analytic);
}

double fd_check_metric_variation(const BoundaryField& u, const CylinderMetric& g) {
  const double h1 = 1e-4 * g.a, h2 = 1e-5 * g.a;
  auto energy_at = [&](double a) {
    return half_energy(u, DomainSpec::cylinder(a));
  };
  const double fd = richardson_central(energy_at(g.a + h1), energy_at(g.a - h1), h1,
                                       energy_at(g.a + h2), energy_at(g.a - h2), h2);
  const HarmonicExtension ext = harmonic_extend(u, DomainSpec::cylinder(g.a));
  // <d_a g_a, k> = -(2 pi)^-2 <ds^2 - dtheta^2, k>.
  const double pairing = horizontal_pairing(stress_energy(ext, g), g);
  const double analytic = 0.5 * pairing / (4.0 * M_PI * M_PI);
  return rel_err(fd, analytic);
}

LocalEnergyScan local_energy_scan(const BoundaryField& u, const DomainSpec& domain,
                                  double radius) {
  const double rmax = domain.kind == DomainKind::Disc
                          ? 1.0
                          : domain.cylinder_metric().injectivity_radius();
  if (!(radius > 0.0) || !(radius < rmax))
    throw std::invalid_argument("local_energy_scan: radius outside (0, inj)");

  const InteriorGrid grid = make_interior_grid(domain, u.max_mode);
  const kernels::TrigTable trig(grid.ntheta);
  const HarmonicExtension ext = harmonic_extend(u, domain);
  const int n = u.ambient_dim;
  const int ns = grid.line.size();

  // Weighted energy density on the interior grid (quadrature weights and
  // chart measure folded in).
  std::vector<double> density(static_cast<size_t>(ns) * grid.ntheta);
  const bool disc = domain.kind == DomainKind::Disc;
  kernels::parallel_for(ns, [&](int is) {
    const double srad = grid.line.nodes[static_cast<size_t>(is)];
    std::vector<double> dr(static_cast<size_t>(n) * grid.ntheta), dt(dr.size());
    ext.eval_gradient_row(srad, trig, dr, dt);
    const double w = grid.line.weights[static_cast<size_t>(is)] * grid.theta_weight();
    for (int it = 0; it < grid.ntheta; ++it) {
      double e = 0.0;
      for (int c = 0; c < n; ++c) {
        const double a = dr[static_cast<size_t>(c) * grid.ntheta + it];
        const double b = dt[static_cast<size_t>(c) * grid.ntheta + it];
        e += disc ? a * a + b * b / (srad * srad) : a * a + b * b;
      }
      density[static_cast<size_t>(is) * grid.ntheta + it] =
          0.5 * e * w * (disc ? srad : 1.0);
    }
  });

  // Candidate boundary points: 2K per circle is dense for a K-band field.
  const int candidates_per_circle = std::max(8, 2 * u.max_mode);
  const int total = u.num_circles * candidates_per_circle;
  const double lambda = disc ? 1.0 : std::sqrt(domain.cylinder_metric().a) / (2.0 * M_PI);
  const double L =
      disc ? 0.0 : domain.cylinder_metric().conformal_half_length();

  std::vector<double> windowed(static_cast<size_t>(total));
  kernels::parallel_for(total, [&](int cand) {
    const int circle = cand / candidates_per_circle;
    const double theta0 =
        2.0 * M_PI * (cand % candidates_per_circle) / candidates_per_circle;
    double acc = 0.0;
    for (int is = 0; is < ns; ++is) {
      const double srad = grid.line.nodes[static_cast<size_t>(is)];
      // Row-level prune: distance to the row alone already kills the cutoff.
      double row_dist;
      if (disc) {
        row_dist = 1.0 - srad;
      } else {
        const double sb = circle == 0 ? L : -L;
        row_dist = lambda * std::abs(srad - sb);
      }
      if (row_dist >= radius) continue;
      for (int it = 0; it < grid.ntheta; ++it) {
        const double theta = 2.0 * M_PI * it / grid.ntheta;
        double dist;
        if (disc) {
          dist = std::sqrt(std::max(
              0.0, srad * srad + 1.0 - 2.0 * srad * std::cos(theta - theta0)));
        } else {
          const double dth = wrap_angle(theta - theta0);
          dist = lambda * std::hypot(srad - (circle == 0 ? L : -L), dth);
        }
        if (dist >= radius) continue;
        acc += cutoff(dist, radius) * cutoff(dist, radius) *
               density[static_cast<size_t>(is) * grid.ntheta + it];
      }
    }
    windowed[static_cast<size_t>(cand)] = acc;
  });

  LocalEnergyScan best;
  best.value = -1.0;
  for (int cand = 0; cand < total; ++cand) {
    if (windowed[static_cast<size_t>(cand)] > best.value) {
      best.value = windowed[static_cast<size_t>(cand)];
      best.circle = cand / candidates_per_circle;
      best.theta = 2.0 * M_PI * (cand % candidates_per_circle) / candidates_per_circle;
    }
  }
  return best;
}

int winding_number(const BoundaryField& u, const CirclePairTarget& target, int circle) {
  if (u.ambient_dim != 3)
    throw std::invalid_argument("winding_number: ambient dimension 3 required");
  if (circle < 0 || circle >= u.num_circles)
    throw std::invalid_argument("winding_number: no such boundary circle");
  const auto grid = synthesize(u);
  const auto& vals = grid[static_cast<size_t>(circle)];
  const int M = u.grid_size;
  std::vector<double> p(3);
  double total = 0.0, prev = 0.0;
  for (int m = 0; m <= M; ++m) {
    const int mm = m % M;
    for (int c = 0; c < 3; ++c)
      p[static_cast<size_t>(c)] = vals[static_cast<size_t>(c) * M + mm];
    if (!(target.distance(p) < target.tubular_radius()))
      throw OutsideTubularNeighbourhood("winding_number: trace left the target tube");
    const double phase = std::atan2(p[1], p[0]);
    if (m > 0) {
      const double jump = wrap_angle(phase - prev);
      if (std::abs(jump) > M_PI - 1e-6)
        throw std::runtime_error("winding_number: phase jump exceeds pi (undersampled)");
      total += jump;
    }
    prev = phase;
  }
  return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

double catenoid_existence_ratio() {
  // max_L L/cosh L, attained where coth L = L.
  double lo = 1.0, hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (1.0 / std::tanh(mid) - mid > 0.0 ? lo : hi) = mid;
  }
  const double L = 0.5 * (lo + hi);
  return L / std::cosh(L);
}

std::optional<CatenoidReference> catenoid_reference(double half_gap, double radius,
                                                    int max_mode,
                                                    bool unstable_branch) {
  if (!(half_gap > 0.0) || !(radius > 0.0))
    throw std::invalid_argument("catenoid_reference: half_gap and radius must be positive");
  const double ratio = half_gap / radius;
  auto f = [](double L) { return L / std::cosh(L); };

  // Peak of L/cosh L separates the two roots.
  double lpeak_lo = 1.0, lpeak_hi = 1.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lpeak_lo + lpeak_hi);
    (1.0 / std::tanh(mid) - mid > 0.0 ? lpeak_lo : lpeak_hi) = mid;
  }
  const double lpeak = 0.5 * (lpeak_lo + lpeak_hi);
  if (ratio > f(lpeak)) return std::nullopt;

  double lo, hi;
  if (!unstable_branch) {
    lo = 0.0;
    hi = lpeak;
  } else {
    lo = lpeak;
    hi = lpeak;
    while (f(hi) > ratio) hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool below = unstable_branch ? f(mid) > ratio : f(mid) < ratio;
    (below ? lo : hi) = mid;
  }
  const double L = 0.5 * (lo + hi);

  CatenoidReference ref;
  ref.conformal_half_length = L;
  ref.a = M_PI / L;
  ref.boundary = BoundaryField::zeros(2, 3, max_mode);
  // (r cos, r sin, +-h) on the two circles.
  for (int circle = 0; circle < 2; ++circle) {
    ref.boundary.at(circle, 0, 1) = cplx(0.5 * radius, 0.0);
    ref.boundary.at(circle, 0, -1) = cplx(0.5 * radius, 0.0);
    ref.boundary.at(circle, 1, 1) = cplx(0.0, -0.5 * radius);
    ref.boundary.at(circle, 1, -1) = cplx(0.0, 0.5 * radius);
    ref.boundary.at(circle, 2, 0) = cplx(circle == 0 ? half_gap : -half_gap, 0.0);
  }
  return ref;
}

}  // namespace halfflow
