#include "amhd/field.hpp"

#include <algorithm>
#include <cmath>

#include "amhd/errors.hpp"
#include "fft_plan.hpp"

namespace amhd {

SpectralField::SpectralField(const Grid& grid, Space space) : grid_(grid), space_(space) {
  if (space == Space::physical) {
    real_.assign(grid.physical_size(), 0.0);
  } else {
    complex_.assign(grid.spectral_size(), {0.0, 0.0});
  }
}

SpectralField SpectralField::from_function(
    const Grid& grid, const std::function<double(double, double, double)>& f) {
  SpectralField out(grid, Space::physical);
  auto v = out.values();
  const auto [n1, n2, n3] = grid.dims();
  for (int i1 = 0; i1 < n1; ++i1) {
    const double x1 = grid.coordinate(Axis::x1, i1);
    for (int i2 = 0; i2 < n2; ++i2) {
      const double x2 = grid.coordinate(Axis::x2, i2);
      for (int i3 = 0; i3 < n3; ++i3) {
        v[grid.physical_index(i1, i2, i3)] = f(x1, x2, grid.coordinate(Axis::x3, i3));
      }
    }
  }
  return out;
}

std::span<double> SpectralField::values() {
  if (space_ != Space::physical) throw ContractViolation("values() requires a physical field");
  return real_;
}

std::span<const double> SpectralField::values() const {
  if (space_ != Space::physical) throw ContractViolation("values() requires a physical field");
  return real_;
}

std::span<std::complex<double>> SpectralField::coeffs() {
  if (space_ != Space::spectral) throw ContractViolation("coeffs() requires a spectral field");
  return complex_;
}

std::span<const std::complex<double>> SpectralField::coeffs() const {
  if (space_ != Space::spectral) throw ContractViolation("coeffs() requires a spectral field");
  return complex_;
}

namespace {

// Storage index along an axis for a signed mode number.
int wrap(int m, int n) {
  if (m < -n / 2 || m > n / 2) throw ArgumentError("mode number outside the grid");
  return m < 0 ? m + n : m;
}

}  // namespace

std::complex<double> SpectralField::mode(int m1, int m2, int m3) const {
  if (m3 < 0) return std::conj(mode(-m1, -m2, -m3));
  const auto [n1, n2, n3] = grid_.dims();
  if (m3 > n3 / 2) throw ArgumentError("mode number outside the grid");
  return coeffs()[grid_.spectral_index(wrap(m1, n1), wrap(m2, n2), m3)];
}

void SpectralField::set_mode(int m1, int m2, int m3, std::complex<double> value) {
  if (m3 < 0) {
    set_mode(-m1, -m2, -m3, std::conj(value));
    return;
  }
  auto c = coeffs();
  const auto [n1, n2, n3] = grid_.dims();
  if (m3 > n3 / 2) throw ArgumentError("mode number outside the grid");
  const std::size_t self = grid_.spectral_index(wrap(m1, n1), wrap(m2, n2), m3);
  c[self] = value;
  if (m3 == 0 || m3 == n3 / 2) {
    const std::size_t partner = grid_.spectral_index(wrap(-m1, n1), wrap(-m2, n2), m3);
    if (partner == self) {
      c[self] = {value.real(), 0.0};
    } else {
      c[partner] = std::conj(value);
    }
  }
}

void SpectralField::require_same_layout(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) throw ArgumentError("fields live on different grids");
  if (space_ != other.space_) throw ContractViolation("fields are in different spaces");
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }
SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double s) {
  for (auto& x : real_) x *= s;
  for (auto& x : complex_) x *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& x) {
  require_same_layout(x);
  for (std::size_t i = 0; i < real_.size(); ++i) real_[i] += s * x.real_[i];
  for (std::size_t i = 0; i < complex_.size(); ++i) complex_[i] += s * x.complex_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

VectorField::VectorField(const Grid& grid, Space space)
    : components_{SpectralField(grid, space), SpectralField(grid, space),
                  SpectralField(grid, space)} {}

VectorField::VectorField(SpectralField c1, SpectralField c2, SpectralField c3)
    : components_{std::move(c1), std::move(c2), std::move(c3)} {
  for (const auto& c : components_) {
    if (!(c.grid() == components_[0].grid())) throw ArgumentError("components on different grids");
    if (c.space() != components_[0].space()) throw ContractViolation("components in different spaces");
  }
}

VectorField& VectorField::operator+=(const VectorField& o) { return axpy(1.0, o); }
VectorField& VectorField::operator-=(const VectorField& o) { return axpy(-1.0, o); }

VectorField& VectorField::operator*=(double s) {
  for (auto& c : components_) c *= s;
  return *this;
}

VectorField& VectorField::axpy(double s, const VectorField& x) {
  for (int i = 0; i < 3; ++i) components_[i].axpy(s, x.components_[i]);
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(double s, VectorField a) { return a *= s; }

SpectralField to_spectral(const SpectralField& f) {
  if (f.space() != Space::physical) {
    throw ContractViolation("to_spectral expects a physical field");
  }
  const Grid& g = f.grid();
  SpectralField out(g, Space::spectral);
  RealBuffer scratch(f.values().begin(), f.values().end());
  detail::plan_for(g).forward(scratch.data(), out.coeffs().data());
  out *= 1.0 / static_cast<double>(g.physical_size());
  return out;
}

SpectralField to_physical(const SpectralField& f) {
  if (f.space() != Space::spectral) {
    throw ContractViolation("to_physical expects a spectral field");
  }
  const Grid& g = f.grid();
  SpectralField out(g, Space::physical);
  ComplexBuffer scratch(f.coeffs().begin(), f.coeffs().end());
  detail::plan_for(g).inverse(scratch.data(), out.values().data());
  return out;
}

VectorField to_spectral(const VectorField& v) {
  return {to_spectral(v[0]), to_spectral(v[1]), to_spectral(v[2])};
}

VectorField to_physical(const VectorField& v) {
  return {to_physical(v[0]), to_physical(v[1]), to_physical(v[2])};
}

void enforce_hermitian(SpectralField& f) {
  const Grid& g = f.grid();
  auto c = f.coeffs();
  const auto [n1, n2, n3] = g.dims();
  for (int i3 : {0, n3 / 2}) {
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i2 = 0; i2 < n2; ++i2) {
        const int j1 = (n1 - i1) % n1;
        const int j2 = (n2 - i2) % n2;
        auto& a = c[g.spectral_index(i1, i2, i3)];
        auto& b = c[g.spectral_index(j1, j2, i3)];
        if (i1 == j1 && i2 == j2) {
          a = {a.real(), 0.0};
        } else if (std::make_pair(i1, i2) < std::make_pair(j1, j2)) {
          const auto avg = 0.5 * (a + std::conj(b));
          a = avg;
          b = std::conj(avg);
        }
      }
    }
  }
}

}  // namespace amhd
