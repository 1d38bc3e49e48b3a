#pragma once

#include <complex>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

// Low-level data-parallel kernels. Every kernel parallelises over
// independent output elements only; reductions accumulate in a fixed
// serial order, so results are bit-identical for any thread count.
// The halfflow::kernels::serial namespace holds plain-loop reference
// implementations used by the unit tests and the benchmark.
namespace halfflow::kernels {

using cplx = std::complex<double>;

// Intra-step parallelism cap. Reads FLOW_THREADS once; unset or invalid
// values fall back to the OpenMP default.
int thread_limit();

template <class F>
void parallel_for(int n, F&& f) {
#ifdef _OPENMP
  const int nt = thread_limit();
#pragma omp parallel for schedule(static) num_threads(nt)
  for (int i = 0; i < n; ++i) f(i);
#else
  for (int i = 0; i < n; ++i) f(i);
#endif
}

// Unit roots w[j] = exp(2*pi*i*j/size); index arithmetic keeps mode
// evaluation exact instead of accumulating a phase recurrence.
struct TrigTable {
  int size = 0;
  std::vector<cplx> roots;
  explicit TrigTable(int grid_size);
  // exp(i * k * theta_m) for theta_m = 2*pi*m/size, any integer k.
  cplx mode(long long k, int m) const {
    long long j = (k * m) % size;
    if (j < 0) j += size;
    return roots[static_cast<size_t>(j)];
  }
};

namespace detail {
// noinline so the serial and OpenMP drivers share one compiled body and
// stay bit-identical under different surrounding optimisation.
[[gnu::noinline]] double synth_point(const cplx* modes, int max_mode, int m,
                                     const TrigTable& trig);
[[gnu::noinline]] cplx analyze_mode(const double* values, int grid_size, int k,
                                    const TrigTable& trig);
}  // namespace detail

// Real synthesis of one boundary circle: ncomp independent coordinate
// functions, each with Hermitian coefficients c[-K..K] stored as
// modes[comp*(2K+1) + (k+K)]. Output values[comp*M + m].
void synthesize(const cplx* modes, int max_mode, int ncomp,
                const TrigTable& trig, double* values);

// Inverse: truncated Fourier analysis of real samples, exact on input
// band-limited to max_mode when grid_size >= 2*max_mode+1.
void analyze(const double* values, int grid_size, int max_mode, int ncomp,
             const TrigTable& trig, cplx* modes);

// Deterministic reduction: evaluates row(i) for i in [0,rows) in parallel,
// then accumulates the row values in ascending order.
template <class F>
double ordered_sum(int rows, F&& row) {
  std::vector<double> partial(static_cast<size_t>(rows > 0 ? rows : 0));
  parallel_for(rows, [&](int i) { partial[static_cast<size_t>(i)] = row(i); });
  double total = 0.0;
  for (int i = 0; i < rows; ++i) total += partial[static_cast<size_t>(i)];
  return total;
}

namespace serial {

void synthesize(const cplx* modes, int max_mode, int ncomp,
                const TrigTable& trig, double* values);
void analyze(const double* values, int grid_size, int max_mode, int ncomp,
             const TrigTable& trig, cplx* modes);

template <class F>
double ordered_sum(int rows, F&& row) {
  double total = 0.0;
  for (int i = 0; i < rows; ++i) total += row(i);
  return total;
}

}  // namespace serial

}  // namespace halfflow::kernels
