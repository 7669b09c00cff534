#include "amhd/norms.hpp"

#include <cmath>

#include "amhd/errors.hpp"

namespace amhd {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

double norm_squared(const SpectralField& f, const NormSpec& spec) {
  if (!f.is_spectral()) throw ContractViolation("norm expects a spectral field");
  if (spec.order < 0 || spec.order > 4) throw ArgumentError("norm order must be in [0, 4]");
  for (int a : spec.filter.multi_index) {
    if (a < 0) throw ArgumentError("negative multi-index entry");
  }
  const Grid& g = f.grid();
  const bool any_gradient = spec.filter.gradient_axes[0] || spec.filter.gradient_axes[1] ||
                            spec.filter.gradient_axes[2];
  auto c = f.coeffs();
  const auto [s1, s2, s3] = g.spectral_dims();
  double sum = 0.0;
  std::size_t idx = 0;
  for (int i1 = 0; i1 < s1; ++i1) {
    const double k1 = g.wavenumber(Axis::x1, i1);
    for (int i2 = 0; i2 < s2; ++i2) {
      const double k2 = g.wavenumber(Axis::x2, i2);
      for (int i3 = 0; i3 < s3; ++i3, ++idx) {
        const double k3 = g.wavenumber(Axis::x3, i3);
        const std::array<double, 3> ksq{k1 * k1, k2 * k2, k3 * k3};
        double w = 1.0;
        if (any_gradient) {
          double gsum = 0.0;
          for (int j = 0; j < 3; ++j) {
            if (spec.filter.gradient_axes[j]) gsum += ksq[j];
          }
          w = gsum;
        }
        for (int j = 0; j < 3; ++j) w *= ipow(ksq[j], spec.filter.multi_index[j]);
        const double kk = ksq[0] + ksq[1] + ksq[2];
        switch (spec.flavor) {
          case NormFlavor::l2: break;
          case NormFlavor::inhomogeneous: w *= ipow(1.0 + kk, spec.order); break;
          case NormFlavor::homogeneous: w *= ipow(kk, spec.order); break;
        }
        sum += g.half_spectrum_weight(i3) * w * std::norm(c[idx]);
      }
    }
  }
  return g.volume() * sum;
}

double norm_squared(const VectorField& v, const NormSpec& spec) {
  return norm_squared(v[0], spec) + norm_squared(v[1], spec) + norm_squared(v[2], spec);
}

}  // namespace amhd
