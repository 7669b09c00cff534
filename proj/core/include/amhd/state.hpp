#pragma once

#include "amhd/field.hpp"

namespace amhd {

/// Velocity and magnetic perturbations (both divergence-free, spectral) at
/// simulation time t. The background field e1 is never stored.
struct MHDState {
  VectorField u;
  VectorField b;
  double t = 0.0;

  explicit MHDState(const Grid& grid, double time = 0.0)
      : u(grid, Space::spectral), b(grid, Space::spectral), t(time) {}
  MHDState(VectorField velocity, VectorField magnetic, double time)
      : u(std::move(velocity)), b(std::move(magnetic)), t(time) {}

  const Grid& grid() const { return u.grid(); }
};

}  // namespace amhd
