#include "amhd/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "amhd/errors.hpp"
#include "fft_plan.hpp"

namespace amhd {

namespace {

void require_spectral(const SpectralField& f, const char* op) {
  if (!f.is_spectral()) throw ContractViolation(std::string(op) + " expects a spectral field");
}

void require_spectral(const VectorField& v, const char* op) {
  if (v.space() != Space::spectral) {
    throw ContractViolation(std::string(op) + " expects a spectral field");
  }
}

// Calls fn(index, i1, i2, i3) for every stored half-spectrum entry.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const auto [s1, s2, s3] = g.spectral_dims();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < s1; ++i1) {
    for (int i2 = 0; i2 < s2; ++i2) {
      for (int i3 = 0; i3 < s3; ++i3, ++idx) fn(idx, i1, i2, i3);
    }
  }
}

int axis_index(int i1, int i2, int i3, Axis a) {
  switch (a) {
    case Axis::x1: return i1;
    case Axis::x2: return i2;
    default: return i3;
  }
}

}  // namespace

SpectralField derivative(const SpectralField& f, Axis axis, int order) {
  require_spectral(f, "derivative");
  if (order < 1) throw ArgumentError("derivative order must be positive");
  const Grid& g = f.grid();
  SpectralField out(g, Space::spectral);
  auto in = f.coeffs();
  auto o = out.coeffs();
  const bool odd = order % 2 == 1;
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const int ia = axis_index(i1, i2, i3, axis);
    if (odd && g.is_nyquist(axis, ia)) return;
    // (ik)^order = k^order * i^order
    double kp = 1.0;
    const double k = g.wavenumber(axis, ia);
    for (int p = 0; p < order; ++p) kp *= k;
    const std::complex<double> z = kp * in[idx];
    switch (order % 4) {
      case 0: o[idx] = z; break;
      case 1: o[idx] = {-z.imag(), z.real()}; break;
      case 2: o[idx] = -z; break;
      default: o[idx] = {z.imag(), -z.real()}; break;
    }
  });
  return out;
}

SpectralField horizontal_laplacian(const SpectralField& f) {
  require_spectral(f, "horizontal_laplacian");
  const Grid& g = f.grid();
  SpectralField out(g, Space::spectral);
  auto in = f.coeffs();
  auto o = out.coeffs();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int) {
    const double k1 = g.wavenumber(Axis::x1, i1);
    const double k2 = g.wavenumber(Axis::x2, i2);
    o[idx] = -(k1 * k1 + k2 * k2) * in[idx];
  });
  return out;
}

SpectralField laplacian(const SpectralField& f) {
  require_spectral(f, "laplacian");
  const Grid& g = f.grid();
  SpectralField out(g, Space::spectral);
  auto in = f.coeffs();
  auto o = out.coeffs();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const double k1 = g.wavenumber(Axis::x1, i1);
    const double k2 = g.wavenumber(Axis::x2, i2);
    const double k3 = g.wavenumber(Axis::x3, i3);
    o[idx] = -(k1 * k1 + k2 * k2 + k3 * k3) * in[idx];
  });
  return out;
}

void dealias_in_place(SpectralField& f) {
  require_spectral(f, "dealias");
  const Grid& g = f.grid();
  auto c = f.coeffs();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    if (g.is_dealiased_out(Axis::x1, i1) || g.is_dealiased_out(Axis::x2, i2) ||
        g.is_dealiased_out(Axis::x3, i3)) {
      c[idx] = 0.0;
    }
  });
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  dealias_in_place(out);
  return out;
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
  require_spectral(f, "dealiased_product");
  require_spectral(g, "dealiased_product");
  if (!(f.grid() == g.grid())) throw ArgumentError("dealiased_product: grid mismatch");
  SpectralField pf = to_physical(dealias(f));
  const SpectralField pg = to_physical(dealias(g));
  auto a = pf.values();
  auto b = pg.values();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  SpectralField out = to_spectral(pf);
  dealias_in_place(out);
  return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  require_spectral(f, "inner_product");
  require_spectral(g, "inner_product");
  if (!(f.grid() == g.grid())) throw ArgumentError("inner_product: grid mismatch");
  const Grid& grid = f.grid();
  auto a = f.coeffs();
  auto b = g.coeffs();
  double sum = 0.0;
  for_each_mode(grid, [&](std::size_t idx, int, int, int i3) {
    sum += grid.half_spectrum_weight(i3) *
           (a[idx].real() * b[idx].real() + a[idx].imag() * b[idx].imag());
  });
  return grid.volume() * sum;
}

double inner_product(const VectorField& v, const VectorField& w) {
  return inner_product(v[0], w[0]) + inner_product(v[1], w[1]) + inner_product(v[2], w[2]);
}

double max_abs(const SpectralField& f) {
  if (f.is_spectral()) return max_abs(to_physical(f));
  double m = 0.0;
  for (double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

double max_magnitude(const VectorField& v) {
  const VectorField p = v.space() == Space::physical ? v : to_physical(v);
  auto a = p[0].values();
  auto b = p[1].values();
  auto c = p[2].values();
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
  }
  return m;
}

double oversampled_max_abs(const SpectralField& f, int factor) {
  if (factor < 1) throw ArgumentError("oversampling factor must be >= 1");
  const SpectralField s = f.is_spectral() ? f : to_spectral(f);
  const Grid& g = s.grid();
  const Grid fine(g.n(Axis::x1) * factor, g.n(Axis::x2) * factor, g.n(Axis::x3) * factor,
                  g.length());
  SpectralField padded(fine, Space::spectral);
  auto src = s.coeffs();
  auto dst = padded.coeffs();
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    // Nyquist entries have no unambiguous home on the finer grid.
    if (g.is_nyquist(Axis::x1, i1) || g.is_nyquist(Axis::x2, i2) ||
        g.is_nyquist(Axis::x3, i3)) {
      return;
    }
    const int m1 = g.mode(Axis::x1, i1);
    const int m2 = g.mode(Axis::x2, i2);
    const int j1 = m1 < 0 ? m1 + fine.n(Axis::x1) : m1;
    const int j2 = m2 < 0 ? m2 + fine.n(Axis::x2) : m2;
    dst[fine.spectral_index(j1, j2, i3)] = src[idx];
  });
  return max_abs(to_physical(padded));
}

VectorField dealias(const VectorField& v) { return {dealias(v[0]), dealias(v[1]), dealias(v[2])}; }

VectorField gradient(const SpectralField& f) {
  return {derivative(f, Axis::x1), derivative(f, Axis::x2), derivative(f, Axis::x3)};
}

SpectralField divergence(const VectorField& v) {
  require_spectral(v, "divergence");
  SpectralField out = derivative(v[0], Axis::x1);
  out += derivative(v[1], Axis::x2);
  out += derivative(v[2], Axis::x3);
  return out;
}

VectorField curl(const VectorField& v) {
  require_spectral(v, "curl");
  return {derivative(v[2], Axis::x2) - derivative(v[1], Axis::x3),
          derivative(v[0], Axis::x3) - derivative(v[2], Axis::x1),
          derivative(v[1], Axis::x1) - derivative(v[0], Axis::x2)};
}

double max_divergence(const VectorField& v) {
  return max_abs(divergence(v.space() == Space::spectral ? v : to_spectral(v)));
}

VectorField leray_project(const VectorField& v) {
  require_spectral(v, "leray_project");
  const Grid& g = v.grid();
  VectorField out = v;
  auto a = out[0].coeffs();
  auto b = out[1].coeffs();
  auto c = out[2].coeffs();
  // Same wavenumbers as the first derivative, so the projected field has
  // exactly zero spectral divergence.
  for_each_mode(g, [&](std::size_t idx, int i1, int i2, int i3) {
    const double k1 = g.odd_wavenumber(Axis::x1, i1);
    const double k2 = g.odd_wavenumber(Axis::x2, i2);
    const double k3 = g.odd_wavenumber(Axis::x3, i3);
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    if (kk == 0.0) return;
    const std::complex<double> kv = (k1 * a[idx] + k2 * b[idx] + k3 * c[idx]) / kk;
    a[idx] -= k1 * kv;
    b[idx] -= k2 * kv;
    c[idx] -= k3 * kv;
  });
  return out;
}

VectorField leray_complement(const VectorField& v) { return v - leray_project(v); }

VectorField advect(const VectorField& a, const VectorField& w) {
  require_spectral(a, "advect");
  require_spectral(w, "advect");
  const Grid& g = a.grid();
  const VectorField pa = to_physical(dealias(a));
  VectorField out(g, Space::spectral);
  for (int i = 0; i < 3; ++i) {
    SpectralField acc(g, Space::physical);
    auto s = acc.values();
    for (Axis ax : kAxes) {
      const SpectralField dw = to_physical(derivative(dealias(w[i]), ax));
      auto d = dw.values();
      auto aj = pa[index_of(ax)].values();
      for (std::size_t p = 0; p < s.size(); ++p) s[p] += aj[p] * d[p];
    }
    out[i] = to_spectral(acc);
    dealias_in_place(out[i]);
  }
  return out;
}

}  // namespace amhd
