#pragma once

#include <array>
#include <cstddef>
#include <numbers>

namespace amhd {

enum class Axis : int { x1 = 0, x2 = 1, x3 = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x1, Axis::x2, Axis::x3};

constexpr int index_of(Axis a) { return static_cast<int>(a); }

/// Uniform periodic grid on the cube [0, L)^3.
///
/// Physical samples are stored row-major with x3 fastest. The spectral
/// representation keeps the half spectrum along x3 (n3/2 + 1 entries); the
/// negative-x3 half is implied by Hermitian symmetry.
class Grid {
 public:
  Grid(int n1, int n2, int n3, double length = 2.0 * std::numbers::pi);
  explicit Grid(int n, double length = 2.0 * std::numbers::pi)
      : Grid(n, n, n, length) {}

  int n(Axis a) const { return dims_[index_of(a)]; }
  const std::array<int, 3>& dims() const { return dims_; }
  double length() const { return length_; }
  double volume() const { return length_ * length_ * length_; }
  double spacing(Axis a) const { return length_ / n(a); }
  double min_spacing() const;
  double wavenumber_unit() const { return 2.0 * std::numbers::pi / length_; }

  std::size_t physical_size() const;
  std::array<int, 3> spectral_dims() const { return {dims_[0], dims_[1], dims_[2] / 2 + 1}; }
  std::size_t spectral_size() const;

  /// Signed mode number for storage index `idx` along an axis. The Nyquist
  /// index n/2 maps to -n/2. Along x3 the index runs over the half spectrum.
  int mode(Axis a, int idx) const {
    const int na = n(a);
    return idx < na / 2 ? idx : idx - na;
  }
  double wavenumber(Axis a, int idx) const { return mode(a, idx) * wavenumber_unit(); }
  bool is_nyquist(Axis a, int idx) const { return idx == n(a) / 2; }

  /// Wavenumber used by odd-order derivatives: the Nyquist entry has no real
  /// odd derivative and is mapped to zero.
  double odd_wavenumber(Axis a, int idx) const {
    return is_nyquist(a, idx) ? 0.0 : wavenumber(a, idx);
  }

  /// 2/3 rule: modes with |m_j| > n_j / 3 on any axis are removed.
  bool is_dealiased_out(Axis a, int idx) const {
    const int m = mode(a, idx);
    return 3 * (m < 0 ? -m : m) > n(a);
  }

  /// Largest mode number kept by the 2/3 rule along an axis.
  int dealias_cutoff(Axis a) const { return n(a) / 3; }

  /// Weight of a half-spectrum x3 index in full-spectrum sums: planes 0 and
  /// n3/2 appear once, every other plane stands for itself and its mirror.
  double half_spectrum_weight(int i3) const {
    return (i3 == 0 || i3 == dims_[2] / 2) ? 1.0 : 2.0;
  }

  std::size_t physical_index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * dims_[1] + i2) * dims_[2] + i3;
  }
  std::size_t spectral_index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * dims_[1] + i2) * (dims_[2] / 2 + 1) + i3;
  }

  double coordinate(Axis a, int idx) const { return idx * spacing(a); }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::array<int, 3> dims_;
  double length_;
};

}  // namespace amhd
