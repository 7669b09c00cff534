#include <benchmark/benchmark.h>

#include "amhd/energy_ledger.hpp"
#include "amhd/experiment.hpp"
#include "amhd/identities.hpp"
#include "amhd/inequality_lab.hpp"
#include "amhd/solver.hpp"

using namespace amhd;

namespace {

MHDState sample_state(int n) {
  ExperimentConfig c;
  c.grid = {n, n, n};
  c.epsilon = 1e-3;
  return generate_initial_data(c);
}

void BM_RoundTripTransform(benchmark::State& st) {
  const Grid g(static_cast<int>(st.range(0)));
  auto f = SpectralField::from_function(g, [](double x, double y, double z) { return std::sin(x) * std::cos(y + z); });
  for (auto _ : st) {
    auto s = to_spectral(f);
    benchmark::DoNotOptimize(to_physical(s).values().data());
  }
}
BENCHMARK(BM_RoundTripTransform)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  auto s = sample_state(static_cast<int>(st.range(0)));
  SolverConfig cfg;
  Integrator integ(s.grid(), cfg);
  for (auto _ : st) benchmark::DoNotOptimize(integ.step(s).energy);
}
BENCHMARK(BM_Step)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_MeasureEnergies(benchmark::State& st) {
  const auto s = sample_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(measure_energies(s).u_h3_sq);
}
BENCHMARK(BM_MeasureEnergies)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_I1(benchmark::State& st) {
  const auto s = sample_state(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(i1_value(s));
}
BENCHMARK(BM_I1)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ProductEstimate(benchmark::State& st) {
  const Grid g(static_cast<int>(st.range(0)));
  const std::array<double, 3> c{3.1, 3.2, 3.0};
  const auto f = TrialFunction::anisotropic(c, {0.4, 0.3, 0.35});
  const auto h = TrialFunction::random_band_limited(c, {0.35, 0.4, 0.3}, 3);
  for (auto _ : st) benchmark::DoNotOptimize(check_lemma12(InequalityId::L1d, g, f, h, f).ratio);
}
BENCHMARK(BM_ProductEstimate)->Arg(48)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
