#include "amhd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "amhd/errors.hpp"
#include "amhd/norms.hpp"
#include "amhd/spectral_ops.hpp"
#include "fft_plan.hpp"

namespace amhd {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ArgumentError("dt must be positive");
  if (!std::isfinite(t_end)) throw ArgumentError("t_end must be finite");
  if (diagnostics_stride < 1) throw ArgumentError("diagnostics_stride must be >= 1");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw ArgumentError("cfl_safety must lie in (0, 1]");
  }
  if (!(dt_max > 0.0)) throw ArgumentError("dt_max must be positive");
}

namespace {

using cplx = std::complex<double>;

// i * z without the library complex multiply (which handles inf/nan cases
// through a slow path).
inline cplx times_i(cplx z) { return {-z.imag(), z.real()}; }

void check_solenoidal(const VectorField& v, const char* name) {
  if (v.space() != Space::spectral) {
    throw ContractViolation(std::string(name) + " must be spectral");
  }
  const double div = norm(divergence(v), NormSpec::l2());
  const double grad = std::sqrt(norm_squared(v, NormSpec::l2(DirectionFilter::full_gradient())));
  if (div > 1e-8 * grad + 1e-300) {
    throw ContractViolation(std::string(name) + " is not divergence-free");
  }
}

bool all_finite(std::span<const cplx> c) {
  for (const auto& z : c) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

}  // namespace

struct Integrator::Impl {
  Grid grid;
  SolverConfig cfg;
  const detail::FftPlan* plan;
  std::size_t nr;
  std::size_t nc;
  bool magnetic;

  // Per-axis tables indexed by storage index.
  std::vector<double> kodd[3];
  std::vector<double> ksq[3];
  std::vector<unsigned char> keep[3];

  std::array<RealBuffer, 3> pu, pb;
  std::array<RealBuffer, 9> prod;
  std::array<ComplexBuffer, 9> spec;
  ComplexBuffer scratch;

  // Lawson RK4 storage.
  MHDState stage;
  MHDState k;
  MHDState acc;
  double cached_h = -1.0;
  RealBuffer eu_half, eu_full, eb_half, eb_full;

  Impl(const Grid& g, SolverConfig c)
      : grid(g),
        cfg(std::move(c)),
        plan(&detail::plan_for(g)),
        nr(g.physical_size()),
        nc(g.spectral_size()),
        magnetic(cfg.dissipation_mode != DissipationMode::ns_horizontal),
        stage(g),
        k(g),
        acc(g) {
    const auto sd = g.spectral_dims();
    for (Axis a : kAxes) {
      const int ia = index_of(a);
      for (int i = 0; i < sd[ia]; ++i) {
        kodd[ia].push_back(g.odd_wavenumber(a, i));
        const double kw = g.wavenumber(a, i);
        ksq[ia].push_back(kw * kw);
        keep[ia].push_back(cfg.dealias && g.is_dealiased_out(a, i) ? 0 : 1);
      }
    }
    for (auto& b : pu) b.resize(nr);
    for (auto& b : pb) b.resize(nr);
    for (auto& b : prod) b.resize(nr);
    for (auto& b : spec) b.resize(nc);
    scratch.resize(nc);
    eu_half.resize(nc);
    eu_full.resize(nc);
    eb_half.resize(nc);
    eb_full.resize(nc);
  }

  void to_grid(const SpectralField& f, RealBuffer& out) {
    auto c = f.coeffs();
    const auto [s1, s2, s3] = grid.spectral_dims();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < s1; ++i1) {
      for (int i2 = 0; i2 < s2; ++i2) {
        const bool k12 = keep[0][i1] && keep[1][i2];
        for (int i3 = 0; i3 < s3; ++i3, ++idx) {
          scratch[idx] = (k12 && keep[2][i3]) ? c[idx] : cplx{};
        }
      }
    }
    plan->inverse(scratch.data(), out.data());
  }

  // du = P[div(b b - u u) + d1 b], db = -div(b u - u b) + d1 u.
  void tendencies(const VectorField& u, const VectorField& b, VectorField& du, VectorField& db) {
    for (int c = 0; c < 3; ++c) to_grid(u[c], pu[c]);
    if (magnetic) {
      for (int c = 0; c < 3; ++c) to_grid(b[c], pb[c]);
    }
    static constexpr int sym[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int p = 0; p < 6; ++p) {
      const double* ui = pu[sym[p][0]].data();
      const double* uj = pu[sym[p][1]].data();
      double* out = prod[p].data();
      if (magnetic) {
        const double* bi = pb[sym[p][0]].data();
        const double* bj = pb[sym[p][1]].data();
        for (std::size_t i = 0; i < nr; ++i) out[i] = bi[i] * bj[i] - ui[i] * uj[i];
      } else {
        for (std::size_t i = 0; i < nr; ++i) out[i] = -ui[i] * uj[i];
      }
      plan->forward(out, spec[p].data());
    }
    if (magnetic) {
      for (int p = 0; p < 3; ++p) {
        const int i = sym[p + 3][0];
        const int j = sym[p + 3][1];
        const double* ui = pu[i].data();
        const double* uj = pu[j].data();
        const double* bi = pb[i].data();
        const double* bj = pb[j].data();
        double* out = prod[6 + p].data();
        for (std::size_t q = 0; q < nr; ++q) out[q] = bi[q] * uj[q] - ui[q] * bj[q];
        plan->forward(out, spec[6 + p].data());
      }
    }

    const double scale = 1.0 / static_cast<double>(nr);
    const auto [s1, s2, s3] = grid.spectral_dims();
    auto u1 = u[0].coeffs(), u2 = u[1].coeffs(), u3 = u[2].coeffs();
    auto du1 = du[0].coeffs(), du2 = du[1].coeffs(), du3 = du[2].coeffs();
    std::span<const cplx> b1, b2, b3;
    std::span<cplx> db1, db2, db3;
    if (magnetic) {
      b1 = b[0].coeffs(), b2 = b[1].coeffs(), b3 = b[2].coeffs();
      db1 = db[0].coeffs(), db2 = db[1].coeffs(), db3 = db[2].coeffs();
    }
    std::size_t idx = 0;
    for (int i1 = 0; i1 < s1; ++i1) {
      const double k1 = kodd[0][i1];
      for (int i2 = 0; i2 < s2; ++i2) {
        const double k2 = kodd[1][i2];
        for (int i3 = 0; i3 < s3; ++i3, ++idx) {
          const double k3 = kodd[2][i3];
          const bool kept = keep[0][i1] && keep[1][i2] && keep[2][i3];
          cplx n1{}, n2{}, n3{};
          if (kept) {
            const cplx t11 = spec[0][idx] * scale, t22 = spec[1][idx] * scale,
                       t33 = spec[2][idx] * scale, t12 = spec[3][idx] * scale,
                       t13 = spec[4][idx] * scale, t23 = spec[5][idx] * scale;
            n1 = times_i(k1 * t11 + k2 * t12 + k3 * t13);
            n2 = times_i(k1 * t12 + k2 * t22 + k3 * t23);
            n3 = times_i(k1 * t13 + k2 * t23 + k3 * t33);
          }
          if (magnetic) {
            n1 += times_i(k1 * b1[idx]);
            n2 += times_i(k1 * b2[idx]);
            n3 += times_i(k1 * b3[idx]);
          }
          const double kk = k1 * k1 + k2 * k2 + k3 * k3;
          if (kk > 0.0) {
            const cplx kn = (k1 * n1 + k2 * n2 + k3 * n3) / kk;
            n1 -= k1 * kn;
            n2 -= k2 * kn;
            n3 -= k3 * kn;
          }
          du1[idx] = n1;
          du2[idx] = n2;
          du3[idx] = n3;

          if (magnetic) {
            cplx m1{}, m2{}, m3{};
            if (kept) {
              const cplx a12 = spec[6][idx] * scale, a13 = spec[7][idx] * scale,
                         a23 = spec[8][idx] * scale;
              m1 = -times_i(k2 * a12 + k3 * a13);
              m2 = -times_i(-k1 * a12 + k3 * a23);
              m3 = -times_i(-k1 * a13 - k2 * a23);
            }
            db1[idx] = m1 + times_i(k1 * u1[idx]);
            db2[idx] = m2 + times_i(k1 * u2[idx]);
            db3[idx] = m3 + times_i(k1 * u3[idx]);
          }
        }
      }
    }
  }

  void add_forcing(double t) {
    if (!cfg.forcing) return;
    auto [fu, fb] = cfg.forcing(t);
    k.u += fu;
    if (magnetic) k.b += fb;
  }

  void evaluate(const MHDState& y, double t) {
    tendencies(y.u, y.b, k.u, k.b);
    add_forcing(t);
  }

  void prepare_factors(double h) {
    if (h == cached_h) return;
    const bool viscous = cfg.dissipation_mode != DissipationMode::inviscid;
    const auto [s1, s2, s3] = grid.spectral_dims();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < s1; ++i1) {
      for (int i2 = 0; i2 < s2; ++i2) {
        for (int i3 = 0; i3 < s3; ++i3, ++idx) {
          const double lu = viscous ? ksq[0][i1] + ksq[1][i2] : 0.0;
          const double lb = viscous ? ksq[2][i3] : 0.0;
          eu_half[idx] = std::exp(-0.5 * h * lu);
          eu_full[idx] = std::exp(-h * lu);
          eb_half[idx] = std::exp(-0.5 * h * lb);
          eb_full[idx] = std::exp(-h * lb);
        }
      }
    }
    cached_h = h;
  }

  // Applies fn(y, k, stage, acc, e_half, e_full) component by component.
  template <class Fn>
  void each_component(MHDState& y, Fn&& fn) {
    for (int c = 0; c < 3; ++c) {
      fn(y.u[c].coeffs(), k.u[c].coeffs(), stage.u[c].coeffs(), acc.u[c].coeffs(), eu_half,
         eu_full);
      if (magnetic) {
        fn(y.b[c].coeffs(), k.b[c].coeffs(), stage.b[c].coeffs(), acc.b[c].coeffs(), eb_half,
           eb_full);
      }
    }
  }

  void project_in_place(VectorField& v) {
    auto a = v[0].coeffs(), b = v[1].coeffs(), c = v[2].coeffs();
    const auto [s1, s2, s3] = grid.spectral_dims();
    std::size_t idx = 0;
    for (int i1 = 0; i1 < s1; ++i1) {
      for (int i2 = 0; i2 < s2; ++i2) {
        for (int i3 = 0; i3 < s3; ++i3, ++idx) {
          const double k1 = kodd[0][i1], k2 = kodd[1][i2], k3 = kodd[2][i3];
          const double kk = k1 * k1 + k2 * k2 + k3 * k3;
          if (kk == 0.0) continue;
          const cplx kv = (k1 * a[idx] + k2 * b[idx] + k3 * c[idx]) / kk;
          a[idx] -= k1 * kv;
          b[idx] -= k2 * kv;
          c[idx] -= k3 * kv;
        }
      }
    }
  }

  double divergence_bound(const VectorField& v) const {
    auto a = v[0].coeffs(), b = v[1].coeffs(), c = v[2].coeffs();
    const auto [s1, s2, s3] = grid.spectral_dims();
    double sum = 0.0;
    std::size_t idx = 0;
    for (int i1 = 0; i1 < s1; ++i1) {
      for (int i2 = 0; i2 < s2; ++i2) {
        for (int i3 = 0; i3 < s3; ++i3, ++idx) {
          const cplx d = kodd[0][i1] * a[idx] + kodd[1][i2] * b[idx] + kodd[2][i3] * c[idx];
          sum += grid.half_spectrum_weight(i3) * std::abs(d);
        }
      }
    }
    return sum;
  }

  StepReport step(MHDState& y, double h) {
    if (h <= 0.0) h = cfg.dt;
    prepare_factors(h);
    const double t = y.t;
    const double hh = 0.5 * h;

    evaluate(y, t);
    each_component(y, [&](auto yn, auto kk, auto st, auto ac, const RealBuffer& eh,
                          const RealBuffer& ef) {
      for (std::size_t i = 0; i < nc; ++i) {
        ac[i] = ef[i] * kk[i];
        st[i] = eh[i] * (yn[i] + hh * kk[i]);
      }
    });
    evaluate(stage, t + hh);
    each_component(y, [&](auto yn, auto kk, auto st, auto ac, const RealBuffer& eh,
                          const RealBuffer&) {
      for (std::size_t i = 0; i < nc; ++i) {
        ac[i] += 2.0 * eh[i] * kk[i];
        st[i] = eh[i] * yn[i] + hh * kk[i];
      }
    });
    evaluate(stage, t + hh);
    each_component(y, [&](auto yn, auto kk, auto st, auto ac, const RealBuffer& eh,
                          const RealBuffer& ef) {
      for (std::size_t i = 0; i < nc; ++i) {
        ac[i] += 2.0 * eh[i] * kk[i];
        st[i] = ef[i] * yn[i] + h * eh[i] * kk[i];
      }
    });
    evaluate(stage, t + h);
    // New values go to `acc` first so `y` stays the last good state.
    each_component(y, [&](auto yn, auto kk, auto, auto ac, const RealBuffer&,
                          const RealBuffer& ef) {
      for (std::size_t i = 0; i < nc; ++i) ac[i] = ef[i] * yn[i] + (h / 6.0) * (ac[i] + kk[i]);
    });

    project_in_place(acc.u);
    if (magnetic) project_in_place(acc.b);

    bool finite = true;
    for (int c = 0; c < 3; ++c) {
      finite = finite && all_finite(acc.u[c].coeffs());
      if (magnetic) finite = finite && all_finite(acc.b[c].coeffs());
    }
    if (!finite) {
      throw SolverFault("non-finite coefficients at t = " + std::to_string(t + h), y, t + h);
    }
    std::swap(y.u, acc.u);
    if (magnetic) std::swap(y.b, acc.b);
    y.t = t + h;

    StepReport r;
    r.t = y.t;
    r.max_divergence = divergence_bound(y.u);
    if (magnetic) r.max_divergence = std::max(r.max_divergence, divergence_bound(y.b));
    r.energy = norm_squared(y.u, NormSpec::l2()) + norm_squared(y.b, NormSpec::l2());
    r.dealias_applied = cfg.dealias;
    r.finite = true;
    return r;
  }
};

Integrator::Integrator(const Grid& grid, SolverConfig config)
    : impl_(std::make_unique<Impl>(grid, std::move(config))) {
  impl_->cfg.validate();
}

Integrator::~Integrator() = default;
Integrator::Integrator(Integrator&&) noexcept = default;
Integrator& Integrator::operator=(Integrator&&) noexcept = default;

StepReport Integrator::step(MHDState& state, double h) {
  if (!(state.grid() == impl_->grid)) throw ArgumentError("state grid differs from integrator grid");
  return impl_->step(state, h);
}

void Integrator::tendencies(const MHDState& state, VectorField& du, VectorField& db) {
  impl_->tendencies(state.u, state.b, du, db);
}

const SolverConfig& Integrator::config() const { return impl_->cfg; }

VectorField rhs_velocity(const MHDState& state, bool dealias) {
  check_solenoidal(state.u, "u");
  check_solenoidal(state.b, "b");
  SolverConfig cfg;
  cfg.dealias = dealias;
  Integrator integ(state.grid(), cfg);
  VectorField du(state.grid(), Space::spectral), db(state.grid(), Space::spectral);
  integ.tendencies(state, du, db);
  return du;
}

VectorField rhs_magnetic(const MHDState& state, bool dealias) {
  check_solenoidal(state.u, "u");
  check_solenoidal(state.b, "b");
  SolverConfig cfg;
  cfg.dealias = dealias;
  Integrator integ(state.grid(), cfg);
  VectorField du(state.grid(), Space::spectral), db(state.grid(), Space::spectral);
  integ.tendencies(state, du, db);
  return db;
}

SpectralField recover_pressure(const MHDState& state) {
  const Grid& g = state.grid();
  VectorField n = advect(state.u, state.u);
  n -= advect(state.b, state.b);
  for (int c = 0; c < 3; ++c) n[c] -= derivative(state.b[c], Axis::x1);
  SpectralField p = divergence(n);
  auto c = p.coeffs();
  const auto [s1, s2, s3] = g.spectral_dims();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < s1; ++i1) {
    const double k1 = g.wavenumber(Axis::x1, i1);
    for (int i2 = 0; i2 < s2; ++i2) {
      const double k2 = g.wavenumber(Axis::x2, i2);
      for (int i3 = 0; i3 < s3; ++i3, ++idx) {
        const double k3 = g.wavenumber(Axis::x3, i3);
        const double kk = k1 * k1 + k2 * k2 + k3 * k3;
        c[idx] = kk > 0.0 ? c[idx] / kk : std::complex<double>{};
      }
    }
  }
  return p;
}

double cfl_suggest(const MHDState& state, const SolverConfig& config) {
  const double speed = std::max(max_magnitude(state.u), max_magnitude(state.b));
  if (speed == 0.0) return config.dt_max;
  const Grid& g = state.grid();
  double limit = g.min_spacing() / speed;
  if (config.dissipation_mode != DissipationMode::ns_horizontal) {
    const int k1_modes = config.dealias ? g.dealias_cutoff(Axis::x1) : g.n(Axis::x1) / 2 - 1;
    const double k1_max = k1_modes * g.wavenumber_unit();
    limit = std::min(limit, 2.0 * std::numbers::sqrt2 / k1_max);
  }
  return std::min(config.dt_max, config.cfl_safety * limit);
}

std::pair<MHDState, StepReport> step(const MHDState& state, const SolverConfig& config) {
  Integrator integ(state.grid(), config);
  MHDState next = state;
  StepReport r = integ.step(next);
  return {std::move(next), r};
}

namespace {

bool is_zero(const VectorField& v) {
  for (const auto& c : v) {
    for (const auto& z : c.coeffs()) {
      if (z != std::complex<double>{}) return false;
    }
  }
  return true;
}

}  // namespace

MHDState run(MHDState state, const SolverConfig& config, EnergyLedger* ledger,
             const DiagnosticsSink& sink) {
  config.validate();
  if (config.dissipation_mode == DissipationMode::ns_horizontal && !is_zero(state.b)) {
    throw ContractViolation("ns_horizontal mode integrates u only; b must be zero");
  }
  if (!config.allow_cfl_violation) {
    const double bound = cfl_suggest(state, config);
    if (config.dt > bound) {
      throw ArgumentError("dt = " + std::to_string(config.dt) + " exceeds the CFL bound " +
                          std::to_string(bound));
    }
  }

  Integrator integ(state.grid(), config);
  L2Balance balance(config.dissipation_mode);
  balance.push(state);
  if (ledger && (ledger->empty() || ledger->rows().back().sample.t < state.t)) {
    ledger->push(state);
  }

  SubstitutionOptions subst;
  subst.magnetic_diffusion = config.dissipation_mode == DissipationMode::full_aniso;
  const bool with_b = config.dissipation_mode != DissipationMode::ns_horizontal;

  auto record = [&](const MHDState& s, const MHDState* prev, double h) {
    DiagnosticsRecord d;
    d.t = s.t;
    d.l2_balance_residual = balance.residual();
    d.i1 = i1_value(s);
    if (prev && with_b) {
      if (config.forcing) subst.forcing_b = config.forcing(s.t - 0.5 * h).second;
      d.substitution_residual = substitution_residual(*prev, s, h, subst);
    }
    d.divergence_max_u = max_divergence(s.u);
    d.divergence_max_b = max_divergence(s.b);
    sink(d);
  };
  if (sink) record(state, nullptr, 0.0);

  const double span = config.t_end - state.t;
  const long steps = span > 0.0 ? static_cast<long>(std::ceil(span / config.dt - 1e-9)) : 0;
  std::optional<MHDState> prev;
  for (long n = 1; n <= steps; ++n) {
    const double h = n == steps ? config.t_end - state.t : config.dt;
    const bool emit = sink && (n % config.diagnostics_stride == 0 || n == steps);
    if (emit) prev = state;
    integ.step(state, h);
    balance.push(state);
    if (ledger) ledger->push(state);
    if (emit) record(state, &*prev, h);
  }
  return state;
}

}  // namespace amhd
