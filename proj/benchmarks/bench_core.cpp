#include <benchmark/benchmark.h>

#include <complex>

#include "memkern/closed_dynamics.hpp"
#include "memkern/kernel.hpp"
#include "memkern/open_dynamics.hpp"
#include "memkern/reference.hpp"
#include "memkern/spectral_model.hpp"

using namespace memkern;

namespace {

EthEnsembleConfig config_for(std::size_t n) {
  EthEnsembleConfig cfg;
  cfg.dimension = n;
  cfg.half_width = n >= 1000 ? 30.0 : 5.0;
  cfg.reference.kind = ReferenceKind::Oscillation;
  cfg.seed = 1;
  return cfg;
}

void bm_build_observable(benchmark::State& state) {
  const auto cfg = config_for(static_cast<std::size_t>(state.range(0)));
  const Spectrum spectrum = sample_spectrum(cfg);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_observable(spectrum, cfg));
  }
}
BENCHMARK(bm_build_observable)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_closed_signal(benchmark::State& state) {
  const auto cfg = config_for(static_cast<std::size_t>(state.range(0)));
  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable obs = build_observable(spectrum, cfg);
  const auto levels = select_initial_levels(obs, {0.25, 0.5, 0.75, 0.9});
  const TimeGrid grid{0.05, 600};
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation_closed_pure(spectrum, obs, levels, grid));
  }
}
BENCHMARK(bm_closed_signal)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_autocorrelation(benchmark::State& state) {
  const auto cfg = config_for(static_cast<std::size_t>(state.range(0)));
  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable obs = build_observable(spectrum, cfg);
  const TimeGrid grid{0.05, 600};
  for (auto _ : state) {
    benchmark::DoNotOptimize(autocorrelation(spectrum, obs, grid));
  }
}
BENCHMARK(bm_autocorrelation)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void bm_rk4_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto cfg = config_for(n);
  const Spectrum spectrum = sample_spectrum(cfg);
  const EthObservable obs = build_observable(spectrum, cfg);
  const auto levels = select_initial_levels(obs, {0.9});
  const DiagonalState init = DiagonalState::pure(n, levels[0]);
  const TimeGrid step_grid{0.01, 1};
  LindbladConfig config{0.2, step_grid, Stepper::RungeKutta4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_decohered(spectrum, obs, init, config, nullptr));
  }
}
BENCHMARK(bm_rk4_step)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

void bm_extract_kernel(benchmark::State& state) {
  ReferenceFunction ref;
  ref.kind = ReferenceKind::Oscillation;
  const TimeGrid grid{30.0 / static_cast<double>(state.range(0)),
                      static_cast<std::size_t>(state.range(0))};
  const Signal g = sample_reference(ref, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_kernel(g));
  }
}
BENCHMARK(bm_extract_kernel)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

void bm_solve_volterra(benchmark::State& state) {
  ReferenceFunction ref;
  ref.kind = ReferenceKind::Oscillation;
  const TimeGrid grid{30.0 / static_cast<double>(state.range(0)),
                      static_cast<std::size_t>(state.range(0))};
  const Signal g = sample_reference(ref, grid);
  const KernelModel kernel = extract_kernel(g);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_volterra(kernel, 1.0, grid));
  }
}
BENCHMARK(bm_solve_volterra)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
