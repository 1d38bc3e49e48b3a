#include "halfflow/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace halfflow::kernels {

int thread_limit() {
  static const int limit = [] {
#ifdef _OPENMP
    int nt = omp_get_max_threads();
    if (const char* env = std::getenv("FLOW_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) nt = static_cast<int>(v);
    }
    return nt;
#else
    return 1;
#endif
  }();
  return limit;
}

TrigTable::TrigTable(int grid_size) : size(grid_size) {
  roots.resize(static_cast<size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    const double ang = 2.0 * M_PI * static_cast<double>(j) / grid_size;
    roots[static_cast<size_t>(j)] = cplx(std::cos(ang), std::sin(ang));
  }
}

namespace detail {

double synth_point(const cplx* modes, int max_mode, int m,
                   const TrigTable& trig) {
  // Hermitian symmetry: u = c0 + 2*sum_{k>=1} Re(c_k e^{ik theta}).
  const cplx* c = modes + max_mode;  // c[0]
  double v = c[0].real();
  for (int k = 1; k <= max_mode; ++k) {
    const cplx w = trig.mode(k, m);
    v += 2.0 * (c[k].real() * w.real() - c[k].imag() * w.imag());
  }
  return v;
}

cplx analyze_mode(const double* values, int grid_size, int k,
                  const TrigTable& trig) {
  double re = 0.0, im = 0.0;
  for (int m = 0; m < grid_size; ++m) {
    const cplx w = trig.mode(-k, m);
    re += values[m] * w.real();
    im += values[m] * w.imag();
  }
  const double inv = 1.0 / static_cast<double>(grid_size);
  return cplx(re * inv, im * inv);
}

}  // namespace detail

void synthesize(const cplx* modes, int max_mode, int ncomp,
                const TrigTable& trig, double* values) {
  const int M = trig.size;
  const int nmodes = 2 * max_mode + 1;
  parallel_for(ncomp * M, [&](int idx) {
    const int comp = idx / M, m = idx % M;
    values[static_cast<size_t>(comp) * M + m] =
        detail::synth_point(modes + static_cast<size_t>(comp) * nmodes,
                            max_mode, m, trig);
  });
}

void analyze(const double* values, int grid_size, int max_mode, int ncomp,
             const TrigTable& trig, cplx* modes) {
  const int nmodes = 2 * max_mode + 1;
  // Parallel over (component, non-negative mode); c_{-k} mirrors c_k.
  parallel_for(ncomp * (max_mode + 1), [&](int idx) {
    const int comp = idx / (max_mode + 1), k = idx % (max_mode + 1);
    cplx* c = modes + static_cast<size_t>(comp) * nmodes + max_mode;
    const cplx ck = detail::analyze_mode(
        values + static_cast<size_t>(comp) * grid_size, grid_size, k, trig);
    if (k == 0) {
      c[0] = cplx(ck.real(), 0.0);
    } else {
      c[k] = ck;
      c[-k] = std::conj(ck);
    }
  });
}

namespace serial {

void synthesize(const cplx* modes, int max_mode, int ncomp,
                const TrigTable& trig, double* values) {
  const int M = trig.size;
  const int nmodes = 2 * max_mode + 1;
  for (int comp = 0; comp < ncomp; ++comp)
    for (int m = 0; m < M; ++m)
      values[static_cast<size_t>(comp) * M + m] =
          detail::synth_point(modes + static_cast<size_t>(comp) * nmodes,
                              max_mode, m, trig);
}

void analyze(const double* values, int grid_size, int max_mode, int ncomp,
             const TrigTable& trig, cplx* modes) {
  const int nmodes = 2 * max_mode + 1;
  for (int comp = 0; comp < ncomp; ++comp) {
    cplx* c = modes + static_cast<size_t>(comp) * nmodes + max_mode;
    for (int k = 0; k <= max_mode; ++k) {
      const cplx ck = detail::analyze_mode(
          values + static_cast<size_t>(comp) * grid_size, grid_size, k, trig);
      if (k == 0) {
        c[0] = cplx(ck.real(), 0.0);
      } else {
        c[k] = ck;
        c[-k] = std::conj(ck);
      }
    }
  }
}

}  // namespace serial

}  // namespace halfflow::kernels
