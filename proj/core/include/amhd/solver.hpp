#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>

#include "amhd/energy_ledger.hpp"
#include "amhd/identities.hpp"
#include "amhd/state.hpp"

namespace amhd {

/// Explicit body forces (f_u, f_b) at time t, added to the right-hand sides.
/// Used by manufactured-solution runs; f_u must be divergence-free.
using Forcing = std::function<std::pair<VectorField, VectorField>(double t)>;

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  DissipationMode dissipation_mode = DissipationMode::full_aniso;
  bool dealias = true;
  /// Diagnostics records are emitted every this many steps; the energy
  /// ledger is sampled at every step.
  int diagnostics_stride = 1;
  double cfl_safety = 0.5;
  double dt_max = 0.1;
  /// Skip the dt <= cfl_suggest check made at the start of a run.
  bool allow_cfl_violation = false;
  Forcing forcing{};

  void validate() const;
};

struct StepReport {
  double t = 0.0;
  /// Upper bound on max_x |div| over u and b (sum of |coefficients|).
  double max_divergence = 0.0;
  /// ||u||^2 + ||b||^2 after the step.
  double energy = 0.0;
  bool dealias_applied = true;
  bool finite = true;
};

/// Non-finite coefficients appeared. Carries the last finite state.
class SolverFault : public std::runtime_error {
 public:
  SolverFault(const std::string& what, MHDState last_good, double fault_time)
      : std::runtime_error(what), last_good_(std::move(last_good)), fault_time_(fault_time) {}

  const MHDState& last_good_state() const { return last_good_; }
  double fault_time() const { return fault_time_; }

 private:
  MHDState last_good_;
  double fault_time_;
};

/// Leray-projected -u.grad u + b.grad b + d1 b (horizontal viscosity excluded).
VectorField rhs_velocity(const MHDState& state, bool dealias = true);
/// -u.grad b + b.grad u + d1 u (vertical diffusion excluded).
VectorField rhs_magnetic(const MHDState& state, bool dealias = true);

/// Zero-mean P solving -Lap P = div(u.grad u - b.grad b - d1 b).
SpectralField recover_pressure(const MHDState& state);

/// dt = min(dt_max, cfl_safety * min(dx / max|u,b|, 2 sqrt(2) / k1_max)),
/// where 2 sqrt(2) / k1_max keeps the Alfven coupling inside the RK4
/// stability interval on the imaginary axis. Zero fields give dt_max.
double cfl_suggest(const MHDState& state, const SolverConfig& config);

/// Owns the transform workspace for repeated steps on one grid.
class Integrator {
 public:
  Integrator(const Grid& grid, SolverConfig config);
  ~Integrator();
  Integrator(Integrator&&) noexcept;
  Integrator& operator=(Integrator&&) noexcept;

  /// Advances `state` by h (defaults to config.dt) with integrating-factor
  /// RK4, then re-projects u and b. Throws SolverFault on non-finite data.
  StepReport step(MHDState& state, double h = 0.0);

  /// Nonlinear and coupling tendencies (no dissipation, no forcing).
  void tendencies(const MHDState& state, VectorField& du, VectorField& db);

  const SolverConfig& config() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::pair<MHDState, StepReport> step(const MHDState& state, const SolverConfig& config);

using DiagnosticsSink = std::function<void(const DiagnosticsRecord&)>;

/// Integrates from state0.t to config.t_end. The ledger (if given) is pushed
/// at the start and after every step; diagnostics go to `sink` at the start
/// and every diagnostics_stride steps. On a fault the partial ledger and
/// diagnostics stay in place and the SolverFault propagates.
MHDState run(MHDState state0, const SolverConfig& config, EnergyLedger* ledger = nullptr,
             const DiagnosticsSink& sink = {});

}  // namespace amhd
