#pragma once

#include <complex>
#include <span>

#include "amhd/grid.hpp"

namespace amhd::detail {

/// Real-to-complex / complex-to-real 3D transforms for one grid.
///
/// Instances are owned per thread (see plan_for); execution reuses the plans
/// on caller buffers, which must be 64-byte aligned. Transforms are
/// unnormalized.
class FftPlan {
 public:
  explicit FftPlan(const Grid& grid);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void forward(double* in, std::complex<double>* out) const;
  /// Destroys `in`.
  void inverse(std::complex<double>* in, double* out) const;

 private:
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

/// Per-thread cache of plans keyed by grid dimensions.
const FftPlan& plan_for(const Grid& grid);

/// Largest |f| of a 1D sample sequence after `factor`-times zero-padded
/// trigonometric interpolation (the sequence is treated as periodic).
double oversampled_max_abs_1d(std::span<const double> f, int factor);

}  // namespace amhd::detail
