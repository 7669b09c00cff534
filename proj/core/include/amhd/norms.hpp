#pragma once

#include <array>
#include <cmath>

#include "amhd/field.hpp"

namespace amhd {

enum class NormFlavor { l2, inhomogeneous, homogeneous };

/// Which derivatives a norm counts before its Sobolev weight is applied.
///
/// `gradient_axes` selects a partial gradient (weight sum of k_j^2 over the
/// selected axes, e.g. grad_h -> {1,1,0}); `multi_index` applies a mixed
/// derivative d^alpha (weight prod k_j^(2 alpha_j)). Both may be combined.
struct DirectionFilter {
  std::array<bool, 3> gradient_axes{false, false, false};
  std::array<int, 3> multi_index{0, 0, 0};

  static DirectionFilter none() { return {}; }
  static DirectionFilter partial(Axis a) {
    DirectionFilter f;
    f.gradient_axes[index_of(a)] = true;
    return f;
  }
  static DirectionFilter horizontal_gradient() { return {{true, true, false}, {0, 0, 0}}; }
  static DirectionFilter full_gradient() { return {{true, true, true}, {0, 0, 0}}; }
  static DirectionFilter mixed(int a1, int a2, int a3) { return {{false, false, false}, {a1, a2, a3}}; }
};

struct NormSpec {
  NormFlavor flavor = NormFlavor::l2;
  int order = 0;
  DirectionFilter filter{};

  static NormSpec l2(DirectionFilter f = {}) { return {NormFlavor::l2, 0, f}; }
  static NormSpec h(int s, DirectionFilter f = {}) { return {NormFlavor::inhomogeneous, s, f}; }
  static NormSpec hdot(int s, DirectionFilter f = {}) { return {NormFlavor::homogeneous, s, f}; }
};

/// Squared norm: L^3 * sum_k w(k) |f(k)|^2 with w = filter(k) * (1+|k|^2)^s
/// (H^s), |k|^(2s) (homogeneous) or 1 (L^2). Requires a spectral field.
double norm_squared(const SpectralField& f, const NormSpec& spec);
double norm_squared(const VectorField& v, const NormSpec& spec);

inline double norm(const SpectralField& f, const NormSpec& spec) {
  return std::sqrt(norm_squared(f, spec));
}
inline double norm(const VectorField& v, const NormSpec& spec) {
  return std::sqrt(norm_squared(v, spec));
}

}  // namespace amhd
