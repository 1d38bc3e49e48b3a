#include "halfflow/checks.hpp"

#include <cmath>
#include <random>

#include "halfflow/config.hpp"
#include "halfflow/quadrature.hpp"

namespace halfflow {

namespace {

double rel(double got, double want) {
  const double scale = std::max(std::abs(got), std::abs(want));
  return scale < 1e-14 ? std::abs(got - want) : std::abs(got - want) / scale;
}

void fold(CheckRow& row, double err) { row.max_err = std::max(row.max_err, err); }

}  // namespace

BoundaryField random_band_limited(int circles, int ambient_dim, int max_mode,
                                  int band, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  BoundaryField u = BoundaryField::zeros(circles, ambient_dim, max_mode);
  const int kmax = std::min(band, max_mode);
  for (int circle = 0; circle < circles; ++circle)
    for (int comp = 0; comp < ambient_dim; ++comp) {
      u.at(circle, comp, 0) = cplx(amplitude * unit(rng), 0.0);
      for (int k = 1; k <= kmax; ++k) {
        const double decay = 1.0 / ((1.0 + k) * (1.0 + k));
        const cplx c(unit(rng), unit(rng));
        u.at(circle, comp, k) = amplitude * decay * c;
        u.at(circle, comp, -k) = std::conj(u.at(circle, comp, k));
      }
    }
  return u;
}

BoundaryField random_on_target(const DomainSpec& domain, const TargetManifold& target,
                               int max_mode, double noise, std::uint64_t seed) {
  return initial_boundary_data(domain, target, max_mode, noise, 6, seed);
}

std::vector<CheckRow> check_variations() {
  std::vector<CheckRow> rows;
  CheckRow map_disc{"map variation, disc x sphere", 0.0, 1e-6};
  CheckRow map_cyl{"map variation, cylinder x sphere", 0.0, 1e-6};
  CheckRow met_cyl{"metric variation, cylinder", 0.0, 1e-6};

  const int K = 32;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    {
      const DomainSpec domain = DomainSpec::disc();
      const SphereTarget sphere(1.0, 3);
      const BoundaryField u = random_on_target(domain, sphere, K, 0.1, seed);
      const BoundaryField v = random_band_limited(1, 3, K, 6, 0.7, seed + 1000);
      fold(map_disc, fd_check_map_variation(u, v, domain, sphere));
    }
    {
      const double a = 0.8 + 0.15 * static_cast<double>(seed);
      const DomainSpec domain = DomainSpec::cylinder(a);
      const SphereTarget sphere(1.0, 3);
      const BoundaryField u = random_on_target(domain, sphere, K, 0.1, seed + 31);
      const BoundaryField v = random_band_limited(2, 3, K, 6, 0.7, seed + 2000);
      fold(map_cyl, fd_check_map_variation(u, v, domain, sphere));
    }
    {
      const double a = 0.6 + 0.21 * static_cast<double>(seed);
      const BoundaryField u = random_band_limited(2, 3, K, 8, 1.0, seed + 57);
      fold(met_cyl, fd_check_metric_variation(u, CylinderMetric(a)));
    }
  }
  rows.push_back(map_disc);
  rows.push_back(map_cyl);
  rows.push_back(met_cyl);
  return rows;
}

std::vector<CheckRow> check_identities() {
  std::vector<CheckRow> rows;
  const int K = 32;

  // DtN pairing <dtn u, u> = 2 E and symmetry, both domains.
  {
    CheckRow pairing{"dtn pairing = 2 energy", 0.0, 1e-10};
    CheckRow symmetry{"dtn symmetry", 0.0, 1e-10};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      for (int circles = 1; circles <= 2; ++circles) {
        const DomainSpec domain =
            circles == 1 ? DomainSpec::disc()
                         : DomainSpec::cylinder(0.4 + 0.11 * static_cast<double>(seed));
        const BoundaryField u = random_band_limited(circles, 3, K, K, 1.0, seed);
        const BoundaryField v = random_band_limited(circles, 3, K, K, 1.0, seed + 500);
        const BoundaryField du = dtn(u, domain), dv = dtn(v, domain);
        fold(pairing, rel(boundary_inner(du, u, domain),
                          2.0 * half_energy(u, domain)));
        fold(symmetry, rel(boundary_inner(du, v, domain),
                           boundary_inner(u, dv, domain)));
      }
    }
    rows.push_back(pairing);
    rows.push_back(symmetry);
  }

  // Disc mode-k eigenvalue and the constant kernel.
  {
    CheckRow eig{"disc dtn eigenvalue k", 0.0, 1e-12};
    CheckRow ker{"constants in dtn kernel", 0.0, 1e-13};
    const DomainSpec disc = DomainSpec::disc();
    for (int k = 1; k <= K; ++k) {
      BoundaryField u = BoundaryField::zeros(1, 2, K);
      u.at(0, 0, k) = cplx(0.5, 0.0);
      u.at(0, 0, -k) = cplx(0.5, 0.0);
      u.at(0, 1, k) = cplx(0.0, -0.5);
      u.at(0, 1, -k) = cplx(0.0, 0.5);
      BoundaryField expect = u;
      expect.scale(static_cast<double>(k));
      BoundaryField got = dtn(u, disc);
      got.axpy(-1.0, expect);
      fold(eig, boundary_norm(got, disc) / boundary_norm(expect, disc));
    }
    for (int circles = 1; circles <= 2; ++circles) {
      const DomainSpec domain =
          circles == 1 ? DomainSpec::disc() : DomainSpec::cylinder(1.7);
      BoundaryField c = BoundaryField::zeros(circles, 3, K);
      for (int circle = 0; circle < circles; ++circle)
        for (int comp = 0; comp < 3; ++comp)
          c.at(circle, comp, 0) = cplx(0.3 * (comp + 1), 0.0);
      fold(ker, boundary_norm(dtn(c, domain), domain));
    }
    rows.push_back(eig);
    rows.push_back(ker);
  }

  // Projector algebra at random points of the tube.
  {
    CheckRow alg{"projector algebra", 0.0, 1e-13};
    const SphereTarget sphere(1.0, 3);
    const CirclePairTarget pair(1.0, 0.5);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
      const TargetManifold& target =
          trial % 2 == 0 ? static_cast<const TargetManifold&>(sphere)
                         : static_cast<const TargetManifold&>(pair);
      std::vector<double> q(3), p(3), w1(3), w2(3);
      // Random point on N plus a normal-ish offset inside the tube.
      const double ang = M_PI * unit(rng);
      if (trial % 2 == 0) {
        const double z = 0.9 * unit(rng);
        const double r = std::sqrt(1.0 - z * z);
        q = {r * std::cos(ang), r * std::sin(ang), z};
      } else {
        q = {std::cos(ang), std::sin(ang), unit(rng) > 0 ? 0.5 : -0.5};
      }
      const double eta = target.tubular_radius();
      for (int c = 0; c < 3; ++c) p[static_cast<size_t>(c)] =
          q[static_cast<size_t>(c)] + 0.4 * eta * unit(rng);
      for (int c = 0; c < 3; ++c) {
        w1[static_cast<size_t>(c)] = unit(rng);
        w2[static_cast<size_t>(c)] = unit(rng);
      }
      std::vector<double> pw1(3), ppw1(3), nw1(3), pw2(3);
      target.tangent_project(p, w1, pw1);
      target.tangent_project(p, pw1, ppw1);
      target.normal_project(p, w1, nw1);
      target.tangent_project(p, w2, pw2);
      double idem = 0.0, sum_id = 0.0, symm = 0.0;
      double dot12 = 0.0, dot21 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const size_t i = static_cast<size_t>(c);
        idem = std::max(idem, std::abs(ppw1[i] - pw1[i]));
        sum_id = std::max(sum_id, std::abs(pw1[i] + nw1[i] - w1[i]));
        dot12 += pw1[i] * w2[i];
        dot21 += w1[i] * pw2[i];
      }
      symm = std::abs(dot12 - dot21);
      fold(alg, std::max({idem, sum_id, symm}));
    }
    rows.push_back(alg);
  }

  // Trace-free stress components.
  {
    CheckRow tf{"stress-energy trace-free", 0.0, 1e-12};
    const CylinderMetric g(1.3);
    const BoundaryField u = random_band_limited(2, 3, K, K / 2, 1.0, 11);
    const StressEnergy k =
        stress_energy(harmonic_extend(u, DomainSpec::cylinder(g.a)), g);
    double scale = 0.0, worst = 0.0;
    for (size_t i = 0; i < k.k_ss.size(); ++i) {
      scale = std::max(scale, std::abs(k.k_ss[i]));
      worst = std::max(worst, std::abs(k.k_ss[i] + k.k_tt[i]));
    }
    tf.max_err = worst / std::max(scale, 1e-30);
    rows.push_back(tf);
  }

  // Chart conventions: ||d_a g_a||^2_{L2(g_a)} = 2/a^2 by quadrature.
  {
    CheckRow norm_row{"|d_a g_a|^2 = 2/a^2", 0.0, 1e-12};
    for (const double a : {0.3, 1.0, 2.7, 5.33}) {
      const CylinderMetric g(a);
      const double L = g.conformal_half_length();
      const GaussRule rule = gauss_legendre(24, -L, L);
      const int ntheta = 16;
      // <h,h>_delta with h = d_a g_a = -(2pi)^-2 (ds^2 - dtheta^2).
      const double hh = 2.0 / std::pow(2.0 * M_PI, 4.0);
      double quad = 0.0;
      for (int i = 0; i < rule.size(); ++i)
        for (int j = 0; j < ntheta; ++j)
          quad += rule.weights[static_cast<size_t>(i)] * (2.0 * M_PI / ntheta) * hh /
                  g.conformal_factor_sq();
      fold(norm_row, rel(quad, 2.0 / (a * a)));
    }
    rows.push_back(norm_row);
  }

  // d/da E + (1/2)<d_a g_a, k> = 0 with the pairing by quadrature.
  {
    CheckRow var{"energy/pairing identity", 0.0, 1e-8};
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
      const double a = 0.5 + 0.37 * static_cast<double>(seed - 100);
      const CylinderMetric g(a);
      const BoundaryField u = random_band_limited(2, 3, K, 10, 1.0, seed);
      const double pairing =
          horizontal_pairing(stress_energy(harmonic_extend(u, DomainSpec::cylinder(a)), g), g);
      const double through_pairing = 0.5 * pairing / (4.0 * M_PI * M_PI);
      fold(var, rel(energy_metric_derivative(u, g), through_pairing));
    }
    rows.push_back(var);
  }

  // Frozen-map decay consistency: dE/da * da/dt = -(1/4)||P^H k||^2.
  {
    CheckRow dec{"metric decay rate identity", 0.0, 1e-6};
    for (std::uint64_t seed = 201; seed <= 210; ++seed) {
      const double a = 0.4 + 0.3 * static_cast<double>(seed - 200);
      const CylinderMetric g(a);
      const BoundaryField u = random_band_limited(2, 3, K, 10, 1.0, seed);
      const double lhs = energy_metric_derivative(u, g) * metric_velocity(u, g);
      const double h = horizontal_projection_norm(u, g);
      fold(dec, rel(lhs, -0.25 * h * h));
    }
    rows.push_back(dec);
  }

  // Collar closed forms.
  {
    CheckRow collar{"collar width/density", 0.0, 1e-12};
    fold(collar, rel(collar_width(2.0), 2.2149071522967361));
    fold(collar, rel(collar_density(2.0, 0.0), 2.0 / (2.0 * M_PI)));
    CheckRow limit{"collar width small-length limit", 0.0, 1e-5};
    limit.max_err = rel(collar_width(1e-6) * 1e-6, M_PI * M_PI);
    rows.push_back(collar);
    rows.push_back(limit);
  }

  return rows;
}

}  // namespace halfflow
