#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>

#include "amhd/aligned_buffer.hpp"
#include "amhd/grid.hpp"

namespace amhd {

enum class Space { physical, spectral };

/// One real scalar field on the periodic box, held either as grid samples or
/// as Fourier mode amplitudes (forward transform divided by n1*n2*n3).
class SpectralField {
 public:
  /// Zero field in the requested space.
  SpectralField(const Grid& grid, Space space);

  /// Samples f(x1, x2, x3) at the collocation points.
  static SpectralField from_function(const Grid& grid,
                                     const std::function<double(double, double, double)>& f);

  const Grid& grid() const { return grid_; }
  Space space() const { return space_; }
  bool is_spectral() const { return space_ == Space::spectral; }

  std::span<double> values();
  std::span<const double> values() const;
  std::span<std::complex<double>> coeffs();
  std::span<const std::complex<double>> coeffs() const;

  /// Amplitude of the mode with signed mode numbers (m1, m2, m3); negative m3
  /// is served through Hermitian symmetry.
  std::complex<double> mode(int m1, int m2, int m3) const;

  /// Sets a mode and its Hermitian partner so the field stays real.
  void set_mode(int m1, int m2, int m3, std::complex<double> value);

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  /// this += s * x
  SpectralField& axpy(double s, const SpectralField& x);

 private:
  void require_same_layout(const SpectralField& other) const;

  Grid grid_;
  Space space_;
  RealBuffer real_;
  ComplexBuffer complex_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Three components on a shared grid and in a shared space.
class VectorField {
 public:
  VectorField(const Grid& grid, Space space);
  VectorField(SpectralField c1, SpectralField c2, SpectralField c3);

  const Grid& grid() const { return components_[0].grid(); }
  Space space() const { return components_[0].space(); }

  SpectralField& operator[](int i) { return components_[i]; }
  const SpectralField& operator[](int i) const { return components_[i]; }
  SpectralField& operator[](Axis a) { return components_[index_of(a)]; }
  const SpectralField& operator[](Axis a) const { return components_[index_of(a)]; }

  auto begin() { return components_.begin(); }
  auto end() { return components_.end(); }
  auto begin() const { return components_.begin(); }
  auto end() const { return components_.end(); }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double s);
  VectorField& axpy(double s, const VectorField& x);

 private:
  std::array<SpectralField, 3> components_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

/// Forward transform; requires a physical field.
SpectralField to_spectral(const SpectralField& f);
/// Inverse transform; requires a spectral field.
SpectralField to_physical(const SpectralField& f);
VectorField to_spectral(const VectorField& v);
VectorField to_physical(const VectorField& v);

/// Restores exact Hermitian symmetry on the self-conjugate x3 planes
/// (m3 = 0 and the x3 Nyquist plane) of a spectral field.
void enforce_hermitian(SpectralField& f);

}  // namespace amhd
