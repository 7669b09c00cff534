#include "amhd/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include <json.hpp>

#include "amhd/errors.hpp"
#include "amhd/norms.hpp"
#include "amhd/spectral_ops.hpp"
#include "fft_plan.hpp"

namespace amhd {

using std::numbers::pi;

std::string_view to_string(InequalityId id) {
  switch (id) {
    case InequalityId::L1a: return "L1a";
    case InequalityId::L1b: return "L1b";
    case InequalityId::L1c: return "L1c";
    case InequalityId::L1d: return "L1d";
    case InequalityId::agmon_1d: return "AGMON1D";
    case InequalityId::minkowski: return "MINKOWSKI";
  }
  return "L1a";
}

InequalityId parse_inequality_id(std::string_view name) {
  for (auto id : {InequalityId::L1a, InequalityId::L1b, InequalityId::L1c, InequalityId::L1d,
                  InequalityId::agmon_1d, InequalityId::minkowski}) {
    if (name == to_string(id)) return id;
  }
  throw ArgumentError("unknown inequality id '" + std::string(name) + "'");
}

std::string_view to_string(TrialKind kind) {
  switch (kind) {
    case TrialKind::gaussian_bump: return "gaussian_bump";
    case TrialKind::anisotropic_bump: return "anisotropic_bump";
    case TrialKind::random_band_limited: return "random_band_limited";
    case TrialKind::mode_sum: return "mode_sum";
  }
  return "gaussian_bump";
}

TrialFunction TrialFunction::gaussian(std::array<double, 3> center, double sigma, double amplitude) {
  return {TrialKind::gaussian_bump, center, {sigma, sigma, sigma}, amplitude, 0};
}

TrialFunction TrialFunction::anisotropic(std::array<double, 3> center, std::array<double, 3> widths,
                                         double amplitude) {
  return {TrialKind::anisotropic_bump, center, widths, amplitude, 0};
}

TrialFunction TrialFunction::random_band_limited(std::array<double, 3> center,
                                                 std::array<double, 3> widths, std::uint64_t seed,
                                                 double amplitude) {
  return {TrialKind::random_band_limited, center, widths, amplitude, seed};
}

TrialFunction TrialFunction::mode_sum(std::uint64_t seed, double amplitude) {
  TrialFunction t;
  t.kind = TrialKind::mode_sum;
  t.amplitude = amplitude;
  t.seed = seed;
  return t;
}

namespace {

using cplx = std::complex<double>;

constexpr int kPolyTerms = 5;

// Per-axis periodic-image offsets x - c in [-L/2, L/2).
std::vector<double> offsets(const Grid& g, Axis a, double c) {
  std::vector<double> d(g.n(a));
  const double L = g.length();
  for (int i = 0; i < g.n(a); ++i) d[i] = std::remainder(g.coordinate(a, i) - c, L);
  return d;
}

}  // namespace

SpectralField TrialFunction::sample(const Grid& g) const {
  for (double w : widths) {
    if (!(w > 0.0)) throw ArgumentError("trial widths must be positive");
  }
  SpectralField out(g, Space::physical);
  auto v = out.values();
  const auto [n1, n2, n3] = g.dims();

  if (kind == TrialKind::mode_sum) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(-3, 3);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
    std::normal_distribution<double> gauss;
    std::array<std::array<int, 3>, 4> m{};
    std::array<double, 4> a{}, ph{};
    for (int t = 0; t < 4; ++t) {
      m[t] = {pick(rng), pick(rng), pick(rng)};
      a[t] = gauss(rng);
      ph[t] = phase(rng);
    }
    const double k0 = g.wavenumber_unit();
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2)
        for (int i3 = 0; i3 < n3; ++i3) {
          const double x1 = g.coordinate(Axis::x1, i1), x2 = g.coordinate(Axis::x2, i2),
                       x3 = g.coordinate(Axis::x3, i3);
          double s = 0.0;
          for (int t = 0; t < 4; ++t) {
            s += a[t] * std::cos(k0 * (m[t][0] * x1 + m[t][1] * x2 + m[t][2] * x3) + ph[t]);
          }
          v[g.physical_index(i1, i2, i3)] = amplitude * s;
        }
    return out;
  }

  std::array<std::vector<double>, 3> env;
  std::array<std::vector<double>, 3> d;
  for (Axis a : kAxes) {
    const int j = index_of(a);
    d[j] = offsets(g, a, center[j]);
    env[j].resize(d[j].size());
    for (std::size_t i = 0; i < d[j].size(); ++i) {
      const double r = d[j][i] / widths[j];
      env[j][i] = std::exp(-r * r);
    }
  }

  if (kind != TrialKind::random_band_limited) {
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 < n2; ++i2) {
        const double e12 = amplitude * env[0][i1] * env[1][i2];
        double* row = &v[g.physical_index(i1, i2, 0)];
        for (int i3 = 0; i3 < n3; ++i3) row[i3] = e12 * env[2][i3];
      }
    return out;
  }

  // Envelope times sum_t a_t cos(kappa_t . d + phi_t), kappa_t,j ~ U(-2, 2) / sigma_j.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(-2.0, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  std::array<cplx, kPolyTerms> coef;
  std::array<std::array<std::vector<cplx>, 3>, kPolyTerms> wave;
  for (int t = 0; t < kPolyTerms; ++t) {
    coef[t] = gauss(rng) * std::polar(1.0, phase(rng));
    for (int j = 0; j < 3; ++j) {
      const double kappa = unit(rng) / widths[j];
      wave[t][j].resize(d[j].size());
      for (std::size_t i = 0; i < d[j].size(); ++i) wave[t][j][i] = std::polar(1.0, kappa * d[j][i]);
    }
  }
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2) {
      const double e12 = amplitude * env[0][i1] * env[1][i2];
      std::array<cplx, kPolyTerms> w12;
      for (int t = 0; t < kPolyTerms; ++t) w12[t] = coef[t] * wave[t][0][i1] * wave[t][1][i2];
      double* row = &v[g.physical_index(i1, i2, 0)];
      for (int i3 = 0; i3 < n3; ++i3) {
        double p = 0.0;
        for (int t = 0; t < kPolyTerms; ++t) p += (w12[t] * wave[t][2][i3]).real();
        row[i3] = e12 * env[2][i3] * p;
      }
    }
  return out;
}

double boundary_decay(const SpectralField& f, const std::array<double, 3>& center) {
  if (f.is_spectral()) throw ContractViolation("boundary_decay expects physical samples");
  const Grid& g = f.grid();
  std::array<int, 3> far{};
  for (Axis a : kAxes) {
    const int j = index_of(a);
    const double pos = (center[j] + 0.5 * g.length()) / g.spacing(a);
    far[j] = ((static_cast<int>(std::lround(pos)) % g.n(a)) + g.n(a)) % g.n(a);
  }
  auto v = f.values();
  double peak = 0.0, edge = 0.0;
  const auto [n1, n2, n3] = g.dims();
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 < n2; ++i2)
      for (int i3 = 0; i3 < n3; ++i3) {
        const double a = std::abs(v[g.physical_index(i1, i2, i3)]);
        peak = std::max(peak, a);
        if (i1 == far[0] || i2 == far[1] || i3 == far[2]) edge = std::max(edge, a);
      }
  return peak > 0.0 ? edge / peak : 0.0;
}

namespace {

double safe_ratio(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  return rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
}

struct Factors {
  double l2, d1, d2, d3, d12, h2;
};

Factors factors(const SpectralField& physical) {
  const SpectralField s = to_spectral(physical);
  return {norm(s, NormSpec::l2()),
          norm(s, NormSpec::l2(DirectionFilter::partial(Axis::x1))),
          norm(s, NormSpec::l2(DirectionFilter::partial(Axis::x2))),
          norm(s, NormSpec::l2(DirectionFilter::partial(Axis::x3))),
          norm(s, NormSpec::l2(DirectionFilter::mixed(1, 1, 0))),
          norm(s, NormSpec::h(2))};
}

double quarter(const Factors& f) { return std::pow(f.l2 * f.d1 * f.d2 * f.d12, 0.25); }

}  // namespace

InequalityReport lemma12_from_samples(InequalityId id, const SpectralField& f,
                                      const SpectralField& g, const SpectralField& h,
                                      const SpectralField* v) {
  if (id == InequalityId::agmon_1d || id == InequalityId::minkowski) {
    throw ArgumentError("expected one of L1a-L1d, got " + std::string(to_string(id)));
  }
  if ((id == InequalityId::L1b) != (v != nullptr)) {
    throw ArgumentError("the fourth function is required for L1b and only for L1b");
  }
  for (const SpectralField* x : {&f, &g, &h, v}) {
    if (!x) continue;
    if (x->is_spectral()) throw ContractViolation("inequality check expects physical samples");
    if (!(x->grid() == f.grid())) throw ArgumentError("trial functions on different grids");
  }
  const Grid& grid = f.grid();
  const double dv = grid.volume() / static_cast<double>(grid.physical_size());
  auto a = f.values(), b = g.values(), c = h.values();
  double lhs = 0.0;
  if (id == InequalityId::L1b) {
    auto w = v->values();
    for (std::size_t i = 0; i < a.size(); ++i) lhs += std::abs(a[i] * b[i] * c[i] * w[i]);
    lhs *= dv;
  } else if (id == InequalityId::L1c) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double p = a[i] * b[i] * c[i];
      lhs += p * p;
    }
    lhs = std::sqrt(lhs * dv);
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) lhs += std::abs(a[i] * b[i] * c[i]);
    lhs *= dv;
  }

  const Factors F = factors(f), G = factors(g), H = factors(h);
  double rhs = 0.0;
  switch (id) {
    case InequalityId::L1a:
      rhs = std::sqrt(F.l2 * F.d1 * G.l2 * G.d2 * H.l2 * H.d3);
      break;
    case InequalityId::L1b: {
      const Factors V = factors(*v);
      rhs = quarter(F) * quarter(G) * std::sqrt(H.l2 * H.d3 * V.l2 * V.d3);
      break;
    }
    case InequalityId::L1c:
      rhs = quarter(F) * std::sqrt(G.l2 * G.d3) * H.h2;
      break;
    case InequalityId::L1d:
      rhs = quarter(F) * std::sqrt(G.l2 * G.d3) * H.l2;
      break;
    default:
      break;
  }

  InequalityReport r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.grid = grid.dims();
  r.length = grid.length();
  return r;
}

InequalityReport check_lemma12(InequalityId id, const Grid& grid, const TrialFunction& f,
                               const TrialFunction& g, const TrialFunction& h,
                               const std::optional<TrialFunction>& v) {
  if ((id == InequalityId::L1b) != v.has_value()) {
    throw ArgumentError("the fourth function is required for L1b and only for L1b");
  }
  std::vector<TrialFunction> trials{f, g, h};
  if (v) trials.push_back(*v);
  std::vector<SpectralField> samples;
  samples.reserve(trials.size());
  for (const auto& t : trials) {
    samples.push_back(t.sample(grid));
    const double decay = boundary_decay(samples.back(), t.center);
    if (decay > kDecayTolerance) {
      throw PreconditionError("trial function (" + std::string(to_string(t.kind)) +
                              ") does not decay at the box boundary: edge/peak = " +
                              std::to_string(decay));
    }
  }
  InequalityReport r =
      lemma12_from_samples(id, samples[0], samples[1], samples[2], v ? &samples[3] : nullptr);
  r.trials = std::move(trials);
  r.seed = f.seed;
  return r;
}

InequalityReport agmon_1d(std::span<const double> f, double dx) {
  const std::size_t n = f.size();
  if (n < 5 || n % 2 == 0) throw ArgumentError("agmon_1d needs an odd number (>= 5) of samples");
  if (!(dx > 0.0)) throw ArgumentError("agmon_1d: dx must be positive");
  double peak = 0.0;
  for (double x : f) peak = std::max(peak, std::abs(x));
  if (peak == 0.0) throw PreconditionError("agmon_1d: zero function");
  if (std::abs(f[0]) > 1e-10 * peak || std::abs(f[n - 1]) > 1e-10 * peak) {
    throw PreconditionError("agmon_1d: samples do not decay at the interval ends");
  }

  std::vector<double> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  d[1] = (f[2] - f[0]) / (2.0 * dx);
  d[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * dx);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * dx);
  }

  auto simpson_sq = [&](const std::vector<double>& y) {
    double s = y[0] * y[0] + y[n - 1] * y[n - 1];
    for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 ? 4.0 : 2.0) * y[i] * y[i];
    return s * dx / 3.0;
  };
  const std::vector<double> fv(f.begin(), f.end());
  const double nf2 = simpson_sq(fv);
  const double nd2 = simpson_sq(d);
  const double mx = std::max(peak, detail::oversampled_max_abs_1d(f, 2));

  InequalityReport r;
  r.id = InequalityId::agmon_1d;
  r.lhs = mx;
  r.rhs = std::pow(nf2 * nd2, 0.25);
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.params = {{"samples", static_cast<double>(n)}, {"dx", dx}};
  return r;
}

std::vector<double> random_decaying_profile(std::span<const double> x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> width(0.5, 3.0);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * pi);
  std::uniform_real_distribution<double> freq(0.0, 3.0);
  std::normal_distribution<double> gauss;
  const double sigma = width(rng);
  const double c = shift(rng);
  std::array<double, 4> a{}, k{}, ph{};
  for (int t = 0; t < 4; ++t) {
    a[t] = gauss(rng);
    k[t] = freq(rng) / sigma;
    ph[t] = phase(rng);
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = (x[i] - c) / sigma;
    double p = 0.0;
    for (int t = 0; t < 4; ++t) p += a[t] * std::cos(k[t] * (x[i] - c) + ph[t]);
    out[i] = std::exp(-s * s) * p;
  }
  return out;
}

namespace {

double lp_norm(const std::vector<double>& v, double w, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s * w, 1.0 / p);
}

}  // namespace

InequalityReport minkowski_check(std::span<const double> f, int nx, int ny, double dx, double dy,
                                 double p, double q) {
  if (nx < 1 || ny < 1 || f.size() != static_cast<std::size_t>(nx) * ny) {
    throw ArgumentError("minkowski_check: sample count does not match nx * ny");
  }
  if (!(dx > 0.0) || !(dy > 0.0)) throw ArgumentError("minkowski_check: spacings must be positive");
  if (!(p >= 1.0) || !(q >= 1.0)) throw ArgumentError("minkowski_check: exponents must be >= 1");
  if (q > p) throw PreconditionError("minkowski_check requires q <= p");

  std::vector<double> inner(ny), outer(nx);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) inner[j] = f[static_cast<std::size_t>(i) * ny + j];
    outer[i] = lp_norm(inner, dy, q);
  }
  const double lhs = lp_norm(outer, dx, p);
  inner.assign(nx, 0.0);
  outer.assign(ny, 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) inner[i] = f[static_cast<std::size_t>(i) * ny + j];
    outer[j] = lp_norm(inner, dx, p);
  }
  const double rhs = lp_norm(outer, dy, q);

  InequalityReport r;
  r.id = InequalityId::minkowski;
  r.lhs = lhs;
  r.rhs = rhs;
  r.ratio = safe_ratio(lhs, rhs);
  r.params = {{"p", p}, {"q", q}, {"nx", double(nx)}, {"ny", double(ny)}};
  return r;
}

namespace {

struct Box {
  std::vector<double> lo, hi;
};

// Coordinate search inside `box`; `eval` returns the ratio (or -1 when the
// point is inadmissible).
template <class Eval>
double coordinate_search(std::vector<double> x, const Box& box, int budget, int& used,
                         Eval&& eval, std::vector<double>& best_x) {
  double best = eval(x);
  ++used;
  best_x = x;
  std::vector<double> step(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) step[i] = 0.25 * (box.hi[i] - box.lo[i]);
  int spent = 1;
  while (spent < budget) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size() && spent < budget; ++i) {
      for (double dir : {1.0, -1.0}) {
        if (spent >= budget) break;
        std::vector<double> y = x;
        y[i] = std::clamp(y[i] + dir * step[i], box.lo[i], box.hi[i]);
        if (y[i] == x[i]) continue;
        const double val = eval(y);
        ++spent;
        ++used;
        if (val > best) {
          best = val;
          x = y;
          best_x = y;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double largest = 0.0;
      for (std::size_t i = 0; i < step.size(); ++i) {
        step[i] *= 0.5;
        largest = std::max(largest, step[i] / (box.hi[i] - box.lo[i]));
      }
      if (largest < 1e-4) break;
    }
  }
  return best;
}

std::vector<double> agmon_grid() {
  constexpr int n = 8001;
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -40.0 + 80.0 * i / (n - 1);
  return x;
}

// exp(-((x^2 + delta^2)^{p/2} - delta^p) * (x < 0 ? a : 1))
std::vector<double> kink_profile(const std::vector<double>& x, double delta, double p, double a) {
  std::vector<double> f(x.size());
  const double base = std::pow(delta, p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = std::pow(x[i] * x[i] + delta * delta, 0.5 * p) - base;
    f[i] = std::exp(-s * (x[i] < 0.0 ? a : 1.0));
  }
  return f;
}

}  // namespace

ConstantEstimate estimate_constant(InequalityId id, int budget, std::uint64_t seed,
                                   const Grid& grid) {
  if (budget < 1) throw ArgumentError("estimate_constant: budget must be >= 1");
  if (id == InequalityId::minkowski) {
    throw ArgumentError("Minkowski's inequality has constant 1; nothing to estimate");
  }
  std::mt19937_64 rng(seed);
  ConstantEstimate out;
  out.best.id = id;
  out.best.seed = seed;

  Box box;
  std::function<InequalityReport(const std::vector<double>&)> build;
  if (id == InequalityId::agmon_1d) {
    const auto xs = agmon_grid();
    const double dx = xs[1] - xs[0];
    box.lo = {std::log(1e-3), 1.0, std::log(0.6)};
    box.hi = {std::log(3.0), 2.0, std::log(1.0 / 0.6)};
    build = [xs, dx](const std::vector<double>& t) {
      InequalityReport r = agmon_1d(kink_profile(xs, std::exp(t[0]), t[1], std::exp(t[2])), dx);
      r.params.push_back({"delta", std::exp(t[0])});
      r.params.push_back({"shape", t[1]});
      r.params.push_back({"asymmetry", std::exp(t[2])});
      return r;
    };
  } else {
    const int count = id == InequalityId::L1b ? 4 : 3;
    const double L = grid.length();
    double hmax = 0.0;
    for (Axis a : kAxes) hmax = std::max(hmax, grid.spacing(a));
    const double sig_lo = std::log(1.5 * hmax), sig_hi = std::log(L / 12.0);
    for (int k = 0; k < count; ++k) {
      for (int j = 0; j < 3; ++j) {
        box.lo.push_back(sig_lo);
        box.hi.push_back(sig_hi);
      }
      for (int j = 0; j < 3; ++j) {
        box.lo.push_back(-L / 8.0);
        box.hi.push_back(L / 8.0);
      }
    }
    build = [id, count, grid, L](const std::vector<double>& t) {
      std::vector<TrialFunction> tr;
      for (int k = 0; k < count; ++k) {
        const double* p = &t[6 * k];
        tr.push_back(TrialFunction::anisotropic(
            {0.5 * L + p[3], 0.5 * L + p[4], 0.5 * L + p[5]},
            {std::exp(p[0]), std::exp(p[1]), std::exp(p[2])}));
      }
      std::optional<TrialFunction> v;
      if (count == 4) v = tr[3];
      return check_lemma12(id, grid, tr[0], tr[1], tr[2], v);
    };
  }

  double best = -1.0;
  auto eval = [&](const std::vector<double>& t) {
    InequalityReport r;
    try {
      r = build(t);
    } catch (const PreconditionError&) {
      return -1.0;
    }
    if (r.ratio > best && std::isfinite(r.ratio)) {
      best = r.ratio;
      out.best = r;
    }
    return r.ratio;
  };

  const int restarts = std::max(1, budget / 60);
  int used = 0;
  for (int rs = 0; rs < restarts && used < budget; ++rs) {
    const int share = rs + 1 == restarts ? budget - used : budget / restarts;
    std::vector<double> x0(box.lo.size());
    for (std::size_t i = 0; i < x0.size(); ++i) {
      x0[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
    }
    std::vector<double> bx;
    coordinate_search(x0, box, share, used, eval, bx);
  }
  out.value = std::max(best, 0.0);
  out.evaluations = used;
  out.best.seed = seed;
  out.best.params.push_back({"budget", static_cast<double>(budget)});
  return out;
}

std::string to_json(const InequalityReport& r) {
  using nlohmann::json;
  auto num = [](double x) -> json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"kind", std::string(to_string(t.kind))},
                      {"center", t.center},
                      {"widths", t.widths},
                      {"amplitude", t.amplitude},
                      {"seed", t.seed}});
  }
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = num(v);
  json j = {{"inequality_id", std::string(to_string(r.id))},
            {"ratio", num(r.ratio)},
            {"lhs", num(r.lhs)},
            {"rhs", num(r.rhs)},
            {"trials", trials},
            {"grid", r.grid},
            {"length", r.length},
            {"seed", r.seed},
            {"params", params}};
  return j.dump();
}

const double kL1cEmpirical = 0.06472;
const double kL1dEmpirical = 0.4579;

double inequality_bound(InequalityId id) {
  switch (id) {
    case InequalityId::L1a: return kL1aBound * 1.01;
    case InequalityId::L1b: return kL1bBound * 1.01;
    case InequalityId::L1c: return kL1cEmpirical;
    case InequalityId::L1d: return kL1dEmpirical;
    case InequalityId::agmon_1d: return kAgmonBound * 1.001;
    case InequalityId::minkowski: return 1.0 + 1e-10;
  }
  return 0.0;
}

std::vector<TrialSet> trial_corpus(std::uint64_t seed, int random_count, int bump_count,
                                   double length) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rwidth(length / 24.0, length / 14.0);
  std::uniform_real_distribution<double> bwidth(length / 32.0, length / 12.0);
  std::uniform_real_distribution<double> shift(-length / 16.0, length / 16.0);
  std::bernoulli_distribution iso(0.5);
  auto centre = [&] {
    return std::array<double, 3>{0.5 * length + shift(rng), 0.5 * length + shift(rng),
                                 0.5 * length + shift(rng)};
  };
  std::vector<TrialSet> out;
  for (int s = 0; s < random_count; ++s) {
    TrialSet set;
    for (auto& t : set) {
      const std::array<double, 3> c = centre();
      t = TrialFunction::random_band_limited(c, {rwidth(rng), rwidth(rng), rwidth(rng)}, rng());
    }
    out.push_back(set);
  }
  for (int s = 0; s < bump_count; ++s) {
    TrialSet set;
    for (auto& t : set) {
      const std::array<double, 3> c = centre();
      if (iso(rng)) {
        t = TrialFunction::gaussian(c, bwidth(rng));
      } else {
        t = TrialFunction::anisotropic(c, {bwidth(rng), bwidth(rng), bwidth(rng)});
      }
    }
    out.push_back(set);
  }
  return out;
}

std::vector<InequalityReport> verify_lemma12(const std::vector<TrialSet>& corpus,
                                             const Grid& grid) {
  std::vector<InequalityReport> out;
  for (const auto& set : corpus) {
    std::vector<SpectralField> s;
    for (const auto& t : set) {
      s.push_back(t.sample(grid));
      if (boundary_decay(s.back(), t.center) > kDecayTolerance) {
        throw PreconditionError("corpus trial (" + std::string(to_string(t.kind)) +
                                ") does not decay at the box boundary");
      }
    }
    for (auto id : {InequalityId::L1a, InequalityId::L1b, InequalityId::L1c, InequalityId::L1d}) {
      InequalityReport r = lemma12_from_samples(id, s[0], s[1], s[2],
                                                id == InequalityId::L1b ? &s[3] : nullptr);
      r.trials.assign(set.begin(), set.begin() + (id == InequalityId::L1b ? 4 : 3));
      r.seed = set[0].seed;
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace amhd
