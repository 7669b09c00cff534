#include "fft_plan.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace amhd::detail {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(const Grid& grid) {
  const auto [n1, n2, n3] = grid.dims();
  const std::size_t nr = grid.physical_size();
  const std::size_t nc = grid.spectral_size();

  std::lock_guard lock(planner_mutex());
  double* r = fftw_alloc_real(nr);
  fftw_complex* c = fftw_alloc_complex(nc);
  // FFTW_ESTIMATE keeps the plan choice (and therefore the rounding) identical
  // from run to run.
  forward_ = fftw_plan_dft_r2c_3d(n1, n2, n3, r, c, FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_3d(n1, n2, n3, c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
}

FftPlan::~FftPlan() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

void FftPlan::forward(double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), in,
                       reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_), reinterpret_cast<fftw_complex*>(in),
                       out);
}

const FftPlan& plan_for(const Grid& grid) {
  thread_local std::map<std::array<int, 3>, std::unique_ptr<FftPlan>> cache;
  auto& slot = cache[grid.dims()];
  if (!slot) slot = std::make_unique<FftPlan>(grid);
  return *slot;
}

double oversampled_max_abs_1d(std::span<const double> f, int factor) {
  const int n = static_cast<int>(f.size());
  const int m = n * factor;
  const int nc = n / 2 + 1;
  const int mc = m / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* spec = fftw_alloc_complex(mc);
  double* out = fftw_alloc_real(m);
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(planner_mutex());
    fwd = fftw_plan_dft_r2c_1d(n, in, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(m, spec, out, FFTW_ESTIMATE);
  }
  std::copy(f.begin(), f.end(), in);
  fftw_execute(fwd);
  for (int k = nc; k < mc; ++k) spec[k][0] = spec[k][1] = 0.0;
  if (n % 2 == 0) {
    // Split the Nyquist term between +n/2 and -n/2.
    spec[n / 2][0] *= 0.5;
    spec[n / 2][1] *= 0.5;
  }
  fftw_execute(inv);
  double mx = 0.0;
  for (int i = 0; i < m; ++i) mx = std::max(mx, std::abs(out[i]));
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(in);
  fftw_free(spec);
  fftw_free(out);
  return mx / n;
}

}  // namespace amhd::detail
