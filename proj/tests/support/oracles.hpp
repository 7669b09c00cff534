#pragma once

// Test-only reference computations. Nothing here calls into the transform
// or spectral-operator code paths being checked; fields are evaluated as
// explicit trigonometric sums.

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "amhd/field.hpp"

namespace amhd::testing {

using cplx = std::complex<double>;

/// Real vector field sum_m 2 Re(a_m exp(i m.x)) over a list of modes with
/// unique representatives (no m and -m both present).
struct ModeSum {
  struct Mode {
    std::array<int, 3> m;
    std::array<cplx, 3> a;
  };
  std::vector<Mode> modes;

  std::array<double, 3> value(double x1, double x2, double x3) const {
    std::array<double, 3> v{0, 0, 0};
    for (const auto& md : modes) {
      const double ph = md.m[0] * x1 + md.m[1] * x2 + md.m[2] * x3;
      const cplx e(std::cos(ph), std::sin(ph));
      for (int c = 0; c < 3; ++c) v[c] += 2.0 * (md.a[c] * e).real();
    }
    return v;
  }

  /// Exact partial derivative d^order / dx_axis^order of component c.
  double derivative(int c, int axis, int order, double x1, double x2, double x3) const {
    double s = 0.0;
    for (const auto& md : modes) {
      const double ph = md.m[0] * x1 + md.m[1] * x2 + md.m[2] * x3;
      cplx f = md.a[c] * cplx(std::cos(ph), std::sin(ph));
      for (int p = 0; p < order; ++p) f *= cplx(0.0, md.m[axis]);
      s += 2.0 * f.real();
    }
    return s;
  }

  /// Exact mixed derivative d1^o1 d2^o2 d3^o3 of component c.
  double mixed(int c, std::array<int, 3> o, double x1, double x2, double x3) const {
    double s = 0.0;
    for (const auto& md : modes) {
      const double ph = md.m[0] * x1 + md.m[1] * x2 + md.m[2] * x3;
      cplx f = md.a[c] * cplx(std::cos(ph), std::sin(ph));
      for (int ax = 0; ax < 3; ++ax)
        for (int p = 0; p < o[ax]; ++p) f *= cplx(0.0, md.m[ax]);
      s += 2.0 * f.real();
    }
    return s;
  }

  VectorField to_field(const Grid& g) const {
    VectorField v(g, Space::spectral);
    for (const auto& md : modes) {
      for (int c = 0; c < 3; ++c) {
        v[c].set_mode(md.m[0], md.m[1], md.m[2], v[c].mode(md.m[0], md.m[1], md.m[2]) + md.a[c]);
      }
    }
    return v;
  }
};

/// Random modes with |m_j| <= band, m3 > 0 (so no mode is its own mirror).
/// With `solenoidal` the amplitude is made orthogonal to m.
inline ModeSum random_mode_sum(std::mt19937_64& rng, int count, int band, bool solenoidal,
                               double amplitude = 1.0) {
  std::uniform_int_distribution<int> pick(-band, band);
  std::uniform_int_distribution<int> pick3(1, band);
  std::normal_distribution<double> gauss(0.0, amplitude);
  ModeSum s;
  for (int n = 0; n < count; ++n) {
    ModeSum::Mode md{{pick(rng), pick(rng), pick3(rng)}, {}};
    for (auto& a : md.a) a = cplx(gauss(rng), gauss(rng));
    if (solenoidal) {
      const double mm = md.m[0] * md.m[0] + md.m[1] * md.m[1] + md.m[2] * md.m[2];
      const cplx dot = (double(md.m[0]) * md.a[0] + double(md.m[1]) * md.a[1] + double(md.m[2]) * md.a[2]) / mm;
      for (int c = 0; c < 3; ++c) md.a[c] -= dot * static_cast<double>(md.m[c]);
    }
    s.modes.push_back(md);
  }
  return s;
}

/// Finite-difference weights for the `order`-th derivative at 0 on the
/// stencil points x (Fornberg's recursion).
inline std::vector<double> fd_weights(const std::vector<double>& x, int order) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][order];
  return w;
}

/// Central stencil offsets -half..half (in units of h).
inline std::vector<double> central_offsets(int half) {
  std::vector<double> x;
  for (int j = -half; j <= half; ++j) x.push_back(j);
  return x;
}

/// Full-spectrum coefficient table for a spectral field (index by wrapped
/// mode numbers), read through SpectralField::mode.
inline std::vector<cplx> full_spectrum(const SpectralField& f) {
  const auto [n1, n2, n3] = f.grid().dims();
  std::vector<cplx> out(static_cast<std::size_t>(n1) * n2 * n3);
  for (int m1 = -n1 / 2 + 1; m1 <= n1 / 2 - 1; ++m1)
    for (int m2 = -n2 / 2 + 1; m2 <= n2 / 2 - 1; ++m2)
      for (int m3 = -n3 / 2 + 1; m3 <= n3 / 2 - 1; ++m3) {
        const std::size_t idx = (static_cast<std::size_t>((m1 + n1) % n1) * n2 + (m2 + n2) % n2) * n3 +
                                (m3 + n3) % n3;
        out[idx] = f.mode(m1, m2, m3);
      }
  return out;
}

/// Riemann-sum quadrature of the pointwise product of two physical fields.
inline double grid_integral(const SpectralField& a, const SpectralField& b) {
  auto x = a.values();
  auto y = b.values();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s * a.grid().volume() / static_cast<double>(x.size());
}

}  // namespace amhd::testing
