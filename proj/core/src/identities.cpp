#include "amhd/identities.hpp"

#include "amhd/errors.hpp"
#include "amhd/norms.hpp"
#include "amhd/spectral_ops.hpp"

namespace amhd {

std::string_view to_string(DissipationMode mode) {
  switch (mode) {
    case DissipationMode::full_aniso: return "full_aniso";
    case DissipationMode::inviscid: return "inviscid";
    case DissipationMode::ns_horizontal: return "ns_horizontal";
  }
  return "full_aniso";
}

DissipationMode parse_dissipation_mode(std::string_view name) {
  if (name == "full_aniso" || name == "mhd") return DissipationMode::full_aniso;
  if (name == "inviscid") return DissipationMode::inviscid;
  if (name == "ns_horizontal") return DissipationMode::ns_horizontal;
  throw ArgumentError("unknown dissipation mode '" + std::string(name) + "'");
}

void L2Balance::push(const MHDState& state) {
  const double energy =
      norm_squared(state.u, NormSpec::l2()) + norm_squared(state.b, NormSpec::l2());
  double dissipation = 0.0;
  if (mode_ != DissipationMode::inviscid) {
    dissipation = norm_squared(state.u, NormSpec::l2(DirectionFilter::horizontal_gradient()));
    if (mode_ == DissipationMode::full_aniso) {
      dissipation += norm_squared(state.b, NormSpec::l2(DirectionFilter::partial(Axis::x3)));
    }
  }
  if (count_ == 0) {
    initial_energy_ = energy;
  } else {
    if (!(state.t > t_)) throw ContractViolation("L2Balance: time must increase");
    integral_ += 0.5 * (state.t - t_) * (dissipation_ + dissipation);
  }
  t_ = state.t;
  energy_ = energy;
  dissipation_ = dissipation;
  ++count_;
}

double L2Balance::residual() const {
  if (count_ == 0) throw ContractViolation("L2Balance: no states pushed");
  return energy_ + 2.0 * integral_ - initial_energy_;
}

double l2_balance_residual(std::span<const MHDState> history, DissipationMode mode) {
  if (history.empty()) throw ArgumentError("l2_balance_residual: empty history");
  L2Balance balance(mode);
  for (const auto& s : history) balance.push(s);
  return balance.residual();
}

double i1_value(const MHDState& state) {
  double sum = 0.0;
  for (Axis ax : kAxes) {
    for (int c = 0; c < 3; ++c) {
      const SpectralField du = derivative(state.u[c], ax, 3);
      const SpectralField db = derivative(state.b[c], ax, 3);
      sum += inner_product(derivative(db, Axis::x1), du);
      sum += inner_product(derivative(du, Axis::x1), db);
    }
  }
  return sum;
}

double substitution_residual(const MHDState& prev, const MHDState& next, double dt,
                             const SubstitutionOptions& options) {
  if (!(dt > 0.0)) throw ArgumentError("substitution_residual: dt must be positive");
  const VectorField u = 0.5 * (prev.u + next.u);
  const VectorField b = 0.5 * (prev.b + next.b);

  VectorField bracket = (1.0 / dt) * (next.b - prev.b);
  bracket += advect(u, b);
  bracket -= advect(b, u);
  if (options.magnetic_diffusion) {
    for (int c = 0; c < 3; ++c) bracket[c] -= derivative(b[c], Axis::x3, 2);
  }
  if (options.forcing_b) bracket -= *options.forcing_b;

  VectorField r(u.grid(), Space::spectral);
  for (int c = 0; c < 3; ++c) r[c] = derivative(u[c], Axis::x1) - bracket[c];
  return norm(r, NormSpec::l2());
}

}  // namespace amhd
