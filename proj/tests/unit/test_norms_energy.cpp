#include <doctest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>

#include "amhd/energy_ledger.hpp"
#include "amhd/errors.hpp"
#include "amhd/identities.hpp"
#include "amhd/norms.hpp"
#include "amhd/spectral_ops.hpp"
#include "oracles.hpp"

using namespace amhd;
using amhd::testing::cplx;
using amhd::testing::ModeSum;
using std::numbers::pi;

namespace {

SpectralField spectral_of(const Grid& g, const std::function<double(double, double, double)>& f) {
  return to_spectral(SpectralField::from_function(g, f));
}

SpectralField random_band_limited(const Grid& g, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  SpectralField f(g, Space::spectral);
  for (int m1 = -band; m1 <= band; ++m1)
    for (int m2 = -band; m2 <= band; ++m2)
      for (int m3 = 0; m3 <= band; ++m3) f.set_mode(m1, m2, m3, cplx(gauss(rng), gauss(rng)));
  return f;
}

EnergySample sample_at(double t, double d) {
  EnergySample s;
  s.t = t;
  s.u_h3_sq = 1.0;
  s.b_h3_sq = 2.0;
  s.diss_u = d;
  s.diss_b = 0.0;
  s.d1b_h2_sq = t;
  return s;
}

// Fresh solenoidal amplitudes on the wavevectors of `f`, so products with
// `f` have non-vanishing integrals.
ModeSum same_modes(const ModeSum& f, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ModeSum out = f;
  for (auto& md : out.modes) {
    for (auto& a : md.a) a = cplx(gauss(rng), gauss(rng));
    const double mm = md.m[0] * md.m[0] + md.m[1] * md.m[1] + md.m[2] * md.m[2];
    cplx dot{};
    for (int c = 0; c < 3; ++c) dot += static_cast<double>(md.m[c]) * md.a[c];
    for (int c = 0; c < 3; ++c) md.a[c] -= dot * static_cast<double>(md.m[c]) / mm;
  }
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof(double)) == 0; }

}  // namespace

TEST_CASE("closed-form norms of sin x1") {
  const Grid g(16);
  const auto f = spectral_of(g, [](double x1, double, double) { return std::sin(x1); });
  CHECK(norm_squared(f, NormSpec::l2()) == doctest::Approx(4.0 * pi * pi * pi).epsilon(1e-13));
  CHECK(norm_squared(f, NormSpec::h(3)) == doctest::Approx(32.0 * pi * pi * pi).epsilon(1e-13));
  CHECK(norm_squared(f, NormSpec::hdot(3)) == doctest::Approx(4.0 * pi * pi * pi).epsilon(1e-13));
  CHECK(norm_squared(f, NormSpec::h(2, DirectionFilter::partial(Axis::x1))) ==
        doctest::Approx(16.0 * pi * pi * pi).epsilon(1e-13));
}

TEST_CASE("constants and direction filters") {
  const Grid g(16);
  const auto c = spectral_of(g, [](double, double, double) { return 3.0; });
  CHECK(norm(c, NormSpec::hdot(3)) == 0.0);
  CHECK(norm(c, NormSpec::h(2, DirectionFilter::partial(Axis::x1))) == 0.0);
  const auto s3 = spectral_of(g, [](double, double, double x3) { return std::sin(x3); });
  CHECK(norm(s3, NormSpec::h(3, DirectionFilter::horizontal_gradient())) < 1e-14);
  CHECK(norm(s3, NormSpec::h(3, DirectionFilter::partial(Axis::x3))) > 1.0);
}

TEST_CASE("direction filters agree with explicit derivatives") {
  const Grid g(16);
  std::mt19937_64 rng(21);
  const auto f = random_band_limited(g, 5, rng);
  const double filtered = norm_squared(f, NormSpec::h(2, DirectionFilter::partial(Axis::x2)));
  const double direct = norm_squared(derivative(f, Axis::x2), NormSpec::h(2));
  CHECK(filtered == doctest::Approx(direct).epsilon(1e-13));
  const double mixed = norm_squared(f, NormSpec::l2(DirectionFilter::mixed(1, 2, 0)));
  const double explicit_mixed =
      norm_squared(derivative(derivative(f, Axis::x1), Axis::x2, 2), NormSpec::l2());
  CHECK(mixed == doctest::Approx(explicit_mixed).epsilon(1e-13));
}

TEST_CASE("partial norms add up to the gradient norm") {
  const Grid g(16, 20, 24);
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_band_limited(g, 5, rng);
    double sum = 0.0;
    for (Axis a : kAxes) sum += norm_squared(f, NormSpec::h(2, DirectionFilter::partial(a)));
    const double grad = norm_squared(f, NormSpec::h(2, DirectionFilter::full_gradient()));
    CHECK(std::abs(sum - grad) <= 1e-12 * grad);
  }
}

TEST_CASE("equivalence of H3 with L2 + homogeneous H3") {
  const Grid g(16);
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> band(1, 7);
  double lo = 1e300, hi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_band_limited(g, band(rng), rng);
    const double r = (norm(f, NormSpec::l2()) + norm(f, NormSpec::hdot(3))) / norm(f, NormSpec::h(3));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  MESSAGE("measured equivalence constants c = " << lo << ", C = " << hi);
  CHECK(lo >= 0.7);
  CHECK(hi <= 2.0);
  // A single |k| = 1 shell attains the lower constant 1/sqrt(2).
  const auto s = spectral_of(g, [](double x1, double, double) { return std::sin(x1); });
  const double r = (norm(s, NormSpec::l2()) + norm(s, NormSpec::hdot(3))) / norm(s, NormSpec::h(3));
  CHECK(r == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-13));
}

TEST_CASE("norm argument checks") {
  const Grid g(8);
  SpectralField f(g, Space::spectral);
  CHECK_THROWS_AS(norm_squared(f, NormSpec::h(5)), ArgumentError);
  CHECK_THROWS_AS(norm_squared(f, NormSpec::h(-1)), ArgumentError);
  CHECK_THROWS_AS(norm_squared(SpectralField(g, Space::physical), NormSpec::l2()), ContractViolation);
}

TEST_CASE("ledger: single sample and constant integrand") {
  EnergyLedger one;
  one.push(sample_at(0.0, 5.0));
  CHECK(one.e0() == 3.0);
  CHECK(one.e1() == 0.0);

  EnergyLedger two;
  two.push(sample_at(0.0, 5.0));
  two.push(sample_at(0.25, 5.0));
  CHECK(two.dissipation_integral() == 5.0 * 0.25);
  CHECK(two.e0() == 3.0 + 2.0 * 5.0 * 0.25);
}

TEST_CASE("ledger: E1 of a linear integrand") {
  EnergyLedger l;
  for (int i = 0; i < 1000; ++i) l.push(sample_at(i / 999.0, 0.0));
  CHECK(std::abs(l.e1() - 0.5) <= 1e-5);
}

TEST_CASE("ledger: sup, monotonicity and time order") {
  EnergyLedger l;
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  double sup = 0.0;
  for (int i = 0; i < 50; ++i) {
    EnergySample s;
    s.t = 0.1 * i;
    s.u_h3_sq = pos(rng);
    s.b_h3_sq = pos(rng);
    s.diss_u = pos(rng);
    s.diss_b = pos(rng);
    s.d1b_h2_sq = pos(rng);
    sup = std::max(sup, s.u_h3_sq + s.b_h3_sq);
    l.push(s);
  }
  CHECK(l.sup_energy() == sup);
  const auto& rows = l.rows();
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].e0 >= rows[i - 1].e0);
    CHECK(rows[i].e1 >= rows[i - 1].e1);
  }
  CHECK(l.e0() == doctest::Approx(l.sup_energy() + 2.0 * l.dissipation_integral()).epsilon(1e-15));
  CHECK_THROWS_AS(l.push(sample_at(1.0, 0.0)), ContractViolation);
  CHECK_THROWS_AS(l.push(sample_at(4.9, 0.0)), ContractViolation);
}

TEST_CASE("ledger samples agree with direct norm evaluation") {
  const Grid g(16);
  std::mt19937_64 rng(25);
  MHDState s(testing::random_mode_sum(rng, 6, 4, true).to_field(g),
             testing::random_mode_sum(rng, 6, 4, true).to_field(g), 0.5);
  const EnergySample e = measure_energies(s);
  CHECK(e.t == 0.5);
  CHECK(e.u_h3_sq == doctest::Approx(norm_squared(s.u, NormSpec::h(3))));
  CHECK(e.b_h3_sq == doctest::Approx(norm_squared(s.b, NormSpec::h(3))));
  CHECK(e.diss_u == doctest::Approx(norm_squared(s.u, NormSpec::h(3, DirectionFilter::horizontal_gradient()))));
  CHECK(e.diss_b == doctest::Approx(norm_squared(s.b, NormSpec::h(3, DirectionFilter::partial(Axis::x3)))));
  CHECK(e.d1b_h2_sq == doctest::Approx(norm_squared(s.b, NormSpec::h(2, DirectionFilter::partial(Axis::x1)))));
}

TEST_CASE("ledger CSV round trip is bit-exact") {
  EnergyLedger l;
  std::mt19937_64 rng(26);
  std::uniform_real_distribution<double> pos(1e-9, 3.0);
  for (int i = 0; i < 200; ++i) {
    EnergySample s;
    s.t = std::ldexp(i, -7) + 1e-3 * pos(rng);
    s.u_h3_sq = pos(rng) / 3.0;
    s.b_h3_sq = pos(rng) / 7.0;
    s.diss_u = pos(rng) * 1e-17;
    s.diss_b = pos(rng);
    s.d1b_h2_sq = pos(rng) * 1e11;
    l.push(s);
  }
  std::stringstream ss;
  l.write_csv(ss);
  const std::string text = ss.str();
  CHECK(text.substr(0, text.find('\n')) == EnergyLedger::kCsvHeader);
  const EnergyLedger back = EnergyLedger::read_csv(ss);
  REQUIRE(back.size() == l.size());
  for (std::size_t i = 0; i < l.size(); ++i) {
    const auto& a = l.rows()[i];
    const auto& b = back.rows()[i];
    CHECK(same_bits(a.sample.t, b.sample.t));
    CHECK(same_bits(a.sample.u_h3_sq, b.sample.u_h3_sq));
    CHECK(same_bits(a.sample.b_h3_sq, b.sample.b_h3_sq));
    CHECK(same_bits(a.sample.diss_u, b.sample.diss_u));
    CHECK(same_bits(a.sample.diss_b, b.sample.diss_b));
    CHECK(same_bits(a.sample.d1b_h2_sq, b.sample.d1b_h2_sq));
    CHECK(same_bits(a.e0, b.e0));
    CHECK(same_bits(a.e1, b.e1));
  }
  std::stringstream bad("t,x\n1,2\n");
  CHECK_THROWS_AS(EnergyLedger::read_csv(bad), IoError);
}

TEST_CASE("I1 vanishes and matches real-space quadrature") {
  const Grid g(16);
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 5; ++trial) {
    // Band 3: the 4th-derivative products stay below the grid's alias limit,
    // so the Riemann sum is exact.
    const ModeSum u = testing::random_mode_sum(rng, 8, 3, true);
    const ModeSum b = same_modes(u, rng);
    const MHDState s(u.to_field(g), b.to_field(g), 0.0);
    const double scale = norm(s.u, NormSpec::h(4)) * norm(s.b, NormSpec::h(4));

    double first = 0.0, second = 0.0;
    for (int i1 = 0; i1 < 16; ++i1)
      for (int i2 = 0; i2 < 16; ++i2)
        for (int i3 = 0; i3 < 16; ++i3) {
          const double x1 = g.coordinate(Axis::x1, i1), x2 = g.coordinate(Axis::x2, i2),
                       x3 = g.coordinate(Axis::x3, i3);
          for (int ax = 0; ax < 3; ++ax) {
            std::array<int, 3> o{0, 0, 0};
            o[ax] = 3;
            std::array<int, 3> o1 = o;
            o1[0] += 1;
            for (int c = 0; c < 3; ++c) {
              first += b.mixed(c, o1, x1, x2, x3) * u.mixed(c, o, x1, x2, x3);
              second += u.mixed(c, o1, x1, x2, x3) * b.mixed(c, o, x1, x2, x3);
            }
          }
        }
    const double dv = g.volume() / 4096.0;
    first *= dv;
    second *= dv;
    const double i1 = i1_value(s);
    CHECK(std::abs(first) > 1e-6 * scale);
    CHECK(std::abs(i1 - (first + second)) <= 1e-10 * scale);
    CHECK(std::abs(i1) <= 1e-10 * scale);
  }
  const MHDState same(testing::random_mode_sum(rng, 8, 5, true).to_field(g),
                      testing::random_mode_sum(rng, 8, 5, true).to_field(g), 0.0);
  MHDState twin(same.u, same.u, 0.0);
  CHECK(std::abs(i1_value(twin)) <= 1e-10 * norm_squared(same.u, NormSpec::h(4)));
}

TEST_CASE("L2 balance bookkeeping") {
  const Grid g(8);
  std::vector<MHDState> zero{MHDState(g, 0.0), MHDState(g, 0.5), MHDState(g, 1.0)};
  CHECK(l2_balance_residual(zero) == 0.0);
  CHECK_THROWS_AS(l2_balance_residual(std::span<const MHDState>{}), ArgumentError);
  std::vector<MHDState> backwards{MHDState(g, 1.0), MHDState(g, 0.5)};
  CHECK_THROWS_AS(l2_balance_residual(backwards), ContractViolation);

  // sin(x3) e1 feels no horizontal viscosity, so it stays put.
  MHDState s0(g, 0.0), s1(g, 1.0);
  s0.u[0].set_mode(0, 0, 1, cplx(0.0, -0.5));
  s1.u[0].set_mode(0, 0, 1, cplx(0.0, -0.5));
  std::vector<MHDState> flat{s0, s1};
  CHECK(std::abs(l2_balance_residual(flat)) < 1e-13);
}
