#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "amhd/state.hpp"

namespace amhd {

enum class DissipationMode { full_aniso, inviscid, ns_horizontal };

std::string_view to_string(DissipationMode mode);
/// Accepts "full_aniso" (alias "mhd"), "inviscid", "ns_horizontal".
DissipationMode parse_dissipation_mode(std::string_view name);

/// Running check of the L^2 balance
///
///   ||u(t)||^2 + ||b(t)||^2 + 2 int_0^t ||grad_h u||^2 + ||d3 b||^2 = ||u(0)||^2 + ||b(0)||^2
///
/// with trapezoidal time quadrature over the pushed states. With dissipation
/// switched off the integral is dropped and the residual is the energy drift.
class L2Balance {
 public:
  explicit L2Balance(DissipationMode mode = DissipationMode::full_aniso) : mode_(mode) {}

  void push(const MHDState& state);

  /// LHS - RHS of the balance at the latest state.
  double residual() const;
  double initial_energy() const { return initial_energy_; }
  std::size_t count() const { return count_; }

 private:
  DissipationMode mode_;
  std::size_t count_ = 0;
  double t_ = 0.0;
  double initial_energy_ = 0.0;
  double energy_ = 0.0;
  double dissipation_ = 0.0;
  double integral_ = 0.0;
};

/// Balance residual over a stored history (at least two states, increasing t).
double l2_balance_residual(std::span<const MHDState> history,
                           DissipationMode mode = DissipationMode::full_aniso);

/// I1 = sum_i int d_i^3 d1 b . d_i^3 u + d_i^3 d1 u . d_i^3 b dx, evaluated
/// through Parseval. Vanishes identically by integration by parts.
double i1_value(const MHDState& state);

struct SubstitutionOptions {
  bool magnetic_diffusion = true;
  /// Explicit forcing of the b equation at the midpoint time, if any.
  std::optional<VectorField> forcing_b{};
};

/// L^2 norm of d1 u - [ (b_next - b_prev)/dt + u.grad b - d3^2 b - b.grad u - f_b ]
/// at the midpoint state (average of the two states). Second order in dt for
/// a smooth trajectory.
double substitution_residual(const MHDState& prev, const MHDState& next, double dt,
                             const SubstitutionOptions& options = {});

struct DiagnosticsRecord {
  double t = 0.0;
  double l2_balance_residual = 0.0;
  double i1 = 0.0;
  double substitution_residual = 0.0;
  double divergence_max_u = 0.0;
  double divergence_max_b = 0.0;
};

}  // namespace amhd
