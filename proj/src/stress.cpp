#include "halfflow/stress.hpp"

#include <cmath>
#include <stdexcept>

namespace halfflow {

namespace {

constexpr double kOverflowGuard = 20.0;

// 1/cosh(kL), 1/sinh(kL) without overflow for any kL > 0.
std::pair<double, double> sech_csch(double kL) {
  if (kL <= kOverflowGuard) return {1.0 / std::cosh(kL), 1.0 / std::sinh(kL)};
  const double e = std::exp(-kL);
  return {2.0 * e / (1.0 + e * e), 2.0 * e / -std::expm1(-2.0 * kL)};
}

}  // namespace

InteriorGrid make_interior_grid(const DomainSpec& domain, int max_mode) {
  InteriorGrid g;
  g.ntheta = 4 * max_mode + 1;
  if (domain.kind == DomainKind::Disc) {
    g.line = gauss_legendre(2 * max_mode + 8, 0.0, 1.0);
  } else {
    const double L = domain.cylinder_metric().conformal_half_length();
    const double want = 2.0 * max_mode * std::max(1.0, L) + 16.0;
    const int ns = static_cast<int>(std::min(want, 4096.0));
    g.line = gauss_legendre(ns, -L, L);
  }
  return g;
}

StressEnergy stress_energy(const HarmonicExtension& ext, const CylinderMetric& g) {
  return stress_energy(ext, g, make_interior_grid(ext.domain, ext.max_mode));
}

StressEnergy stress_energy(const HarmonicExtension& ext, const CylinderMetric& g,
                           const InteriorGrid& grid) {
  if (ext.domain.kind != DomainKind::Cylinder)
    throw std::invalid_argument("stress_energy: cylinder domain required");
  (void)g;
  StressEnergy k;
  k.ns = grid.line.size();
  k.ntheta = grid.ntheta;
  k.grid = grid;
  const size_t total = static_cast<size_t>(k.ns) * k.ntheta;
  k.k_ss.resize(total);
  k.k_st.resize(total);
  k.k_tt.resize(total);

  const kernels::TrigTable trig(grid.ntheta);
  const int n = ext.ambient_dim;
  kernels::parallel_for(k.ns, [&](int is) {
    std::vector<double> us(static_cast<size_t>(n) * grid.ntheta);
    std::vector<double> ut(us.size());
    ext.eval_gradient_row(grid.line.nodes[static_cast<size_t>(is)], trig, us, ut);
    for (int it = 0; it < grid.ntheta; ++it) {
      double ss = 0.0, st = 0.0;
      for (int c = 0; c < n; ++c) {
        const double a = us[static_cast<size_t>(c) * grid.ntheta + it];
        const double b = ut[static_cast<size_t>(c) * grid.ntheta + it];
        ss += a * a - b * b;
        st += a * b;
      }
      const size_t idx = static_cast<size_t>(is) * grid.ntheta + it;
      k.k_ss[idx] = 0.5 * ss;
      k.k_st[idx] = st;
      k.k_tt[idx] = -k.k_ss[idx];
    }
  });
  return k;
}

double horizontal_pairing(const StressEnergy& k, const CylinderMetric& g) {
  if (k.ns != k.grid.line.size() || k.ntheta != k.grid.ntheta)
    throw std::invalid_argument("horizontal_pairing: grid mismatch");
  const double wt = k.grid.theta_weight();
  const double integral = kernels::ordered_sum(k.ns, [&](int is) {
    double row = 0.0;
    for (int it = 0; it < k.ntheta; ++it) {
      const size_t idx = static_cast<size_t>(is) * k.ntheta + it;
      row += k.k_ss[idx] - k.k_tt[idx];
    }
    return k.grid.line.weights[static_cast<size_t>(is)] * wt * row;
  });
  return integral / g.conformal_factor_sq();
}

double stress_l2_norm(const StressEnergy& k, const CylinderMetric& g) {
  const double wt = k.grid.theta_weight();
  const double integral = kernels::ordered_sum(k.ns, [&](int is) {
    double row = 0.0;
    for (int it = 0; it < k.ntheta; ++it) {
      const size_t idx = static_cast<size_t>(is) * k.ntheta + it;
      row += k.k_ss[idx] * k.k_ss[idx] + k.k_tt[idx] * k.k_tt[idx] +
             2.0 * k.k_st[idx] * k.k_st[idx];
    }
    return k.grid.line.weights[static_cast<size_t>(is)] * wt * row;
  });
  const double q = integral / g.conformal_factor_sq();
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

double conformal_defect(const BoundaryField& u, const CylinderMetric& g) {
  if (u.num_circles != 2)
    throw std::invalid_argument("conformal_defect: cylinder field required");
  const double L = g.conformal_half_length();
  double total = 0.0;
  for (int comp = 0; comp < u.ambient_dim; ++comp) {
    const cplx slope = (u.at(0, comp, 0) - u.at(1, comp, 0)) / (2.0 * L);
    double s = std::norm(slope);
    for (int k = 1; k <= u.max_mode; ++k) {
      const auto [sech, csch] = sech_csch(k * L);
      const cplx even = 0.5 * (u.at(0, comp, k) + u.at(1, comp, k));
      const cplx odd = 0.5 * (u.at(0, comp, k) - u.at(1, comp, k));
      const double kk = static_cast<double>(k);
      s += 2.0 * kk * kk *
           (std::norm(odd) * csch * csch - std::norm(even) * sech * sech);
    }
    total += s;
  }
  return 4.0 * M_PI * L * total;
}

double metric_velocity(const BoundaryField& u, const CylinderMetric& g) {
  return -0.25 * g.a * conformal_defect(u, g);
}

double energy_metric_derivative(const BoundaryField& u, const CylinderMetric& g) {
  return conformal_defect(u, g) / (2.0 * g.a);
}

double horizontal_projection_norm(const BoundaryField& u, const CylinderMetric& g) {
  return std::abs(conformal_defect(u, g)) / std::sqrt(2.0);
}

}  // namespace halfflow
