#include <benchmark/benchmark.h>

#include "fdim/measure.hpp"
#include "fdim/oscillatory.hpp"

using namespace fdm;

namespace {

OscillatorySpec quadratic_1d(double lambda) {
  const BumpProfile b(0.25);
  OscillatorySpec s;
  s.box = Box({{-0.5, 0.5}});
  s.breakpoints = {{-0.5, -0.25, 0.25, 0.5}};
  s.phase = [](const Vec& z) { return z[0] * z[0] + 0.3 * z[0]; };
  s.amplitude_factors = {[b](double x) { return b(x); }};
  s.lambda = lambda;
  return s;
}

}  // namespace

static void BM_Integrate1D(benchmark::State& state) {
  const OscillatorySpec s = quadratic_1d(static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, 1e-10));
}
BENCHMARK(BM_Integrate1D)->RangeMultiplier(8)->Range(16, 4096)->Unit(benchmark::kMicrosecond);

static void BM_Integrate2D(benchmark::State& state) {
  const BumpProfile b(0.25);
  OscillatorySpec s;
  s.box = Box({{-0.5, 0.5}, {-0.5, 0.5}});
  s.phase = [](const Vec& z) { return z[0] * z[0] - z[1] * z[1] + 0.2 * z[0] * z[1]; };
  s.amplitude_factors = {b, b};
  s.lambda = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrate(s, 1e-10));
}
BENCHMARK(BM_Integrate2D)->RangeMultiplier(4)->Range(16, 1024)->Unit(benchmark::kMillisecond);

static void BM_CriticalPoints(benchmark::State& state) {
  const OscillatorySpec s = quadratic_1d(100.0);
  for (auto _ : state) benchmark::DoNotOptimize(find_critical_points(s));
}
BENCHMARK(BM_CriticalPoints)->Unit(benchmark::kMicrosecond);

static void BM_BumpSpectrum(benchmark::State& state) {
  const auto g = BumpSpectrum::of(BumpProfile(0.25));
  double w = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize((*g)(w));
    w = w > 5000.0 ? 0.0 : w + 0.37;
  }
}
BENCHMARK(BM_BumpSpectrum);

BENCHMARK_MAIN();
