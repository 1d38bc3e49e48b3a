#include "halfflow/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace halfflow {

namespace {

// kL threshold beyond which tanh, coth and the normalised basis switch to
// their decoupled exponential forms; the switch is exact to ~1e-17.
constexpr double kOverflowGuard = 20.0;

struct ModeBasis {
  double even, even_d, odd, odd_d;  // E_k(s), E_k'(s), O_k(s), O_k'(s)
};

// E_k = cosh(ks)/cosh(kL), O_k = sinh(ks)/sinh(kL); bounded on |s| <= L.
ModeBasis eval_basis(int k, double s, double L) {
  const double kk = static_cast<double>(k);
  const double kL = kk * L;
  ModeBasis b;
  if (kL <= kOverflowGuard) {
    const double ch = std::cosh(kk * s), sh = std::sinh(kk * s);
    const double chL = std::cosh(kL), shL = std::sinh(kL);
    b.even = ch / chL;
    b.even_d = kk * sh / chL;
    b.odd = sh / shL;
    b.odd_d = kk * ch / shL;
  } else {
    const double ep = std::exp(kk * (s - L));   // <= 1
    const double em = std::exp(-kk * (s + L));  // <= 1
    const double den_e = 1.0 + std::exp(-2.0 * kL);
    const double den_o = -std::expm1(-2.0 * kL);
    b.even = (ep + em) / den_e;
    b.even_d = kk * (ep - em) / den_e;
    b.odd = (ep - em) / den_o;
    b.odd_d = kk * (ep + em) / den_o;
  }
  return b;
}

// (tanh(kL), coth(kL)) with the large-argument guard.
std::pair<double, double> dtn_tc(double kL) {
  if (kL > kOverflowGuard) return {1.0, 1.0};
  const double t = std::tanh(kL);
  return {t, 1.0 / t};
}

void check_finite(const BoundaryField& u, const char* where) {
  if (!u.finite())
    throw std::invalid_argument(std::string(where) + ": non-finite coefficients");
}

void check_domain_shape(const BoundaryField& u, const DomainSpec& domain,
                        const char* where) {
  if (u.num_circles != domain.circles())
    throw std::invalid_argument(std::string(where) +
                                ": boundary circle count does not match domain");
}

}  // namespace

BoundaryField BoundaryField::zeros(int circles, int n, int K, int M) {
  if (circles < 1 || circles > 2 || n < 1 || K < 0)
    throw std::invalid_argument("BoundaryField: invalid shape");
  BoundaryField u;
  u.num_circles = circles;
  u.ambient_dim = n;
  u.max_mode = K;
  u.grid_size = M > 0 ? M : default_grid_size(K);
  if (u.grid_size < 2 * K + 1)
    throw std::invalid_argument("BoundaryField: grid too small for requested modes");
  u.coeffs.assign(static_cast<size_t>(circles) * n * (2 * K + 1), cplx(0.0, 0.0));
  return u;
}

void BoundaryField::axpy(double alpha, const BoundaryField& o) {
  if (!same_shape(o)) throw std::invalid_argument("BoundaryField::axpy: shape mismatch");
  for (size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += alpha * o.coeffs[i];
}

void BoundaryField::scale(double alpha) {
  for (auto& c : coeffs) c *= alpha;
}

void BoundaryField::enforce_real() {
  for (int circle = 0; circle < num_circles; ++circle)
    for (int comp = 0; comp < ambient_dim; ++comp) {
      at(circle, comp, 0) = cplx(at(circle, comp, 0).real(), 0.0);
      for (int k = 1; k <= max_mode; ++k)
        at(circle, comp, -k) = std::conj(at(circle, comp, k));
    }
}

bool BoundaryField::finite() const {
  for (const auto& c : coeffs)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

BoundaryField analyze(const std::vector<CircleSamples>& samples, int ambient_dim,
                      int max_mode) {
  if (samples.empty() || samples.size() > 2)
    throw std::invalid_argument("analyze: expected 1 or 2 boundary circles");
  const size_t per_circle = samples[0].size();
  if (per_circle == 0 || per_circle % static_cast<size_t>(ambient_dim) != 0)
    throw std::invalid_argument("analyze: samples not divisible into components");
  const int M = static_cast<int>(per_circle) / ambient_dim;
  for (const auto& s : samples)
    if (s.size() != per_circle)
      throw std::invalid_argument("analyze: circle grids differ in size");
  if (M < 2 * max_mode + 1)
    throw std::invalid_argument("analyze: grid too small for requested modes");

  BoundaryField u = BoundaryField::zeros(static_cast<int>(samples.size()),
                                         ambient_dim, max_mode, M);
  kernels::TrigTable trig(M);
  for (int circle = 0; circle < u.num_circles; ++circle)
    kernels::analyze(samples[static_cast<size_t>(circle)].data(), M, max_mode,
                     ambient_dim, trig, u.circle_data(circle));
  return u;
}

std::vector<CircleSamples> synthesize(const BoundaryField& u) {
  const int M = u.grid_size;
  kernels::TrigTable trig(M);
  std::vector<CircleSamples> out(static_cast<size_t>(u.num_circles));
  for (int circle = 0; circle < u.num_circles; ++circle) {
    out[static_cast<size_t>(circle)].resize(static_cast<size_t>(u.ambient_dim) * M);
    kernels::synthesize(u.circle_data(circle), u.max_mode, u.ambient_dim, trig,
                        out[static_cast<size_t>(circle)].data());
  }
  return out;
}

cplx HarmonicExtension::mode_value(int comp, int k, double srad) const {
  const size_t i = static_cast<size_t>(comp) * (max_mode + 1) + k;
  if (domain.kind == DomainKind::Disc) {
    const size_t j =
        static_cast<size_t>(comp) * (2 * max_mode + 1) + static_cast<size_t>(k + max_mode);
    return disc_modes[j] * std::pow(srad, k);
  }
  const double L = domain.cylinder_metric().conformal_half_length();
  if (k == 0) return even[i] + odd[i] * srad;
  const ModeBasis b = eval_basis(k, srad, L);
  return even[i] * b.even + odd[i] * b.odd;
}

cplx HarmonicExtension::mode_deriv(int comp, int k, double srad) const {
  const size_t i = static_cast<size_t>(comp) * (max_mode + 1) + k;
  if (domain.kind == DomainKind::Disc) {
    if (k == 0) return cplx(0.0, 0.0);
    const size_t j =
        static_cast<size_t>(comp) * (2 * max_mode + 1) + static_cast<size_t>(k + max_mode);
    return disc_modes[j] * (static_cast<double>(k) * std::pow(srad, k - 1));
  }
  const double L = domain.cylinder_metric().conformal_half_length();
  if (k == 0) return odd[i];
  const ModeBasis b = eval_basis(k, srad, L);
  return even[i] * b.even_d + odd[i] * b.odd_d;
}

void HarmonicExtension::eval(double srad, double theta, std::span<double> out) const {
  for (int comp = 0; comp < ambient_dim; ++comp) {
    double v = mode_value(comp, 0, srad).real();
    for (int k = 1; k <= max_mode; ++k) {
      const cplx f = mode_value(comp, k, srad);
      const double c = std::cos(k * theta), s = std::sin(k * theta);
      v += 2.0 * (f.real() * c - f.imag() * s);
    }
    out[static_cast<size_t>(comp)] = v;
  }
}

namespace {

// Assemble per-mode coefficient rows then synthesize over theta.
void synth_modes_row(const std::vector<cplx>& row_modes, int max_mode, int ncomp,
                     const kernels::TrigTable& trig, std::span<double> out) {
  kernels::synthesize(row_modes.data(), max_mode, ncomp, trig, out.data());
}

}  // namespace

void HarmonicExtension::eval_row(double srad, const kernels::TrigTable& trig,
                                 std::span<double> values) const {
  const int nm = 2 * max_mode + 1;
  std::vector<cplx> row(static_cast<size_t>(ambient_dim) * nm, cplx(0.0, 0.0));
  for (int comp = 0; comp < ambient_dim; ++comp)
    for (int k = 0; k <= max_mode; ++k)
      row[static_cast<size_t>(comp) * nm + static_cast<size_t>(k + max_mode)] =
          mode_value(comp, k, srad);
  synth_modes_row(row, max_mode, ambient_dim, trig, values);
}

void HarmonicExtension::eval_gradient_row(double srad, const kernels::TrigTable& trig,
                                          std::span<double> d_srad,
                                          std::span<double> d_theta) const {
  const int nm = 2 * max_mode + 1;
  std::vector<cplx> row_s(static_cast<size_t>(ambient_dim) * nm, cplx(0.0, 0.0));
  std::vector<cplx> row_t(row_s.size(), cplx(0.0, 0.0));
  for (int comp = 0; comp < ambient_dim; ++comp)
    for (int k = 0; k <= max_mode; ++k) {
      const size_t i = static_cast<size_t>(comp) * nm + static_cast<size_t>(k + max_mode);
      row_s[i] = mode_deriv(comp, k, srad);
      row_t[i] = cplx(0.0, static_cast<double>(k)) * mode_value(comp, k, srad);
    }
  synth_modes_row(row_s, max_mode, ambient_dim, trig, d_srad);
  synth_modes_row(row_t, max_mode, ambient_dim, trig, d_theta);
}

HarmonicExtension harmonic_extend(const BoundaryField& u, const DomainSpec& domain) {
  check_finite(u, "harmonic_extend");
  check_domain_shape(u, domain, "harmonic_extend");

  HarmonicExtension ext;
  ext.domain = domain;
  ext.ambient_dim = u.ambient_dim;
  ext.max_mode = u.max_mode;

  if (domain.kind == DomainKind::Disc) {
    ext.disc_modes.assign(u.coeffs.begin(), u.coeffs.end());
    return ext;
  }

  const double L = domain.cylinder_metric().conformal_half_length();
  const size_t n = static_cast<size_t>(u.ambient_dim) * (u.max_mode + 1);
  ext.even.assign(n, cplx(0.0, 0.0));
  ext.odd.assign(n, cplx(0.0, 0.0));
  for (int comp = 0; comp < u.ambient_dim; ++comp)
    for (int k = 0; k <= u.max_mode; ++k) {
      const cplx top = u.at(0, comp, k), bot = u.at(1, comp, k);
      const size_t i = static_cast<size_t>(comp) * (u.max_mode + 1) + k;
      ext.even[i] = 0.5 * (top + bot);
      ext.odd[i] = (k == 0) ? (top - bot) / (2.0 * L) : 0.5 * (top - bot);
    }
  return ext;
}

BoundaryField dtn(const BoundaryField& u, const DomainSpec& domain) {
  check_finite(u, "dtn");
  check_domain_shape(u, domain, "dtn");
  BoundaryField out = BoundaryField::zeros(u.num_circles, u.ambient_dim, u.max_mode,
                                           u.grid_size);
  if (domain.kind == DomainKind::Disc) {
    for (int comp = 0; comp < u.ambient_dim; ++comp)
      for (int k = -u.max_mode; k <= u.max_mode; ++k)
        out.at(0, comp, k) = static_cast<double>(std::abs(k)) * u.at(0, comp, k);
    return out;
  }

  const CylinderMetric& g = domain.cylinder_metric();
  const double L = g.conformal_half_length();
  const double metric_scale = 2.0 * M_PI / std::sqrt(g.a);
  for (int comp = 0; comp < u.ambient_dim; ++comp) {
    // Mode 0: affine extension, slope (t-b)/(2L).
    {
      const cplx top = u.at(0, comp, 0), bot = u.at(1, comp, 0);
      const cplx slope = (top - bot) / (2.0 * L);
      out.at(0, comp, 0) = metric_scale * slope;
      out.at(1, comp, 0) = -metric_scale * slope;
    }
    for (int k = 1; k <= u.max_mode; ++k) {
      const auto [tanhkl, cothkl] = dtn_tc(k * L);
      const double alpha = 0.5 * k * (tanhkl + cothkl);
      const double beta = 0.5 * k * (tanhkl - cothkl);
      const cplx top = u.at(0, comp, k), bot = u.at(1, comp, k);
      const cplx dtop = metric_scale * (alpha * top + beta * bot);
      const cplx dbot = metric_scale * (beta * top + alpha * bot);
      out.at(0, comp, k) = dtop;
      out.at(0, comp, -k) = std::conj(dtop);
      out.at(1, comp, k) = dbot;
      out.at(1, comp, -k) = std::conj(dbot);
    }
  }
  return out;
}

double half_energy(const BoundaryField& u, const DomainSpec& domain) {
  check_finite(u, "half_energy");
  check_domain_shape(u, domain, "half_energy");

  if (domain.kind == DomainKind::Disc) {
    double e = 0.0;
    for (int comp = 0; comp < u.ambient_dim; ++comp) {
      double ec = 0.0;
      for (int k = 1; k <= u.max_mode; ++k)
        ec += static_cast<double>(k) * std::norm(u.at(0, comp, k));
      e += ec;
    }
    return 2.0 * M_PI * e;
  }

  const CylinderMetric& g = domain.cylinder_metric();
  const double L = g.conformal_half_length();
  double e = 0.0;
  for (int comp = 0; comp < u.ambient_dim; ++comp) {
    double ec = 0.5 * g.a * std::norm(u.at(0, comp, 0) - u.at(1, comp, 0));
    for (int k = 1; k <= u.max_mode; ++k) {
      const auto [tanhkl, cothkl] = dtn_tc(k * L);
      const cplx top = u.at(0, comp, k), bot = u.at(1, comp, k);
      ec += M_PI * k *
            (std::norm(top + bot) * tanhkl + std::norm(top - bot) * cothkl);
    }
    e += ec;
  }
  return e;
}

double boundary_inner(const BoundaryField& u, const BoundaryField& v,
                      const DomainSpec& domain) {
  if (!u.same_shape(v))
    throw std::invalid_argument("boundary_inner: shape mismatch");
  check_domain_shape(u, domain, "boundary_inner");
  const double len = domain.circle_length();
  double total = 0.0;
  for (int circle = 0; circle < u.num_circles; ++circle)
    for (int comp = 0; comp < u.ambient_dim; ++comp) {
      double s = u.at(circle, comp, 0).real() * v.at(circle, comp, 0).real();
      for (int k = 1; k <= u.max_mode; ++k) {
        const cplx p = u.at(circle, comp, k) * std::conj(v.at(circle, comp, k));
        s += 2.0 * p.real();
      }
      total += len * s;
    }
  return total;
}

BoundaryField tangential_derivative(const BoundaryField& u, const DomainSpec& domain) {
  check_finite(u, "tangential_derivative");
  check_domain_shape(u, domain, "tangential_derivative");
  const double rate = 2.0 * M_PI / domain.circle_length();  // dtheta/darclength
  BoundaryField out = BoundaryField::zeros(u.num_circles, u.ambient_dim, u.max_mode,
                                           u.grid_size);
  for (int circle = 0; circle < u.num_circles; ++circle)
    for (int comp = 0; comp < u.ambient_dim; ++comp)
      for (int k = -u.max_mode; k <= u.max_mode; ++k)
        out.at(circle, comp, k) =
            cplx(0.0, rate * static_cast<double>(k)) * u.at(circle, comp, k);
  return out;
}

}  // namespace halfflow
