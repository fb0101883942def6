#include <benchmark/benchmark.h>

#include "fdim/catalog.hpp"
#include "fdim/measure.hpp"

using namespace fdm;

namespace {

SurfaceMeasure measure_of(const char* name) {
  const SurfaceEntry e = find_surface(name);
  return SurfaceMeasure::with_default_density(e.chart, e.density_inner, e.density_outer);
}

}  // namespace

static void BM_HelixTransformNormal(benchmark::State& state) {
  const SurfaceMeasure mu = measure_of("helix_tangent");
  Vec xi = Vec::Zero(3);
  xi[2] = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mu.fourier(xi));
}
BENCHMARK(BM_HelixTransformNormal)->RangeMultiplier(8)->Range(16, 4096)->Unit(benchmark::kMicrosecond);

static void BM_SphereTransformNormal(benchmark::State& state) {
  const SurfaceMeasure mu = measure_of("sphere_patch");
  Vec xi = Vec::Zero(3);
  xi[2] = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mu.fourier(xi));
}
BENCHMARK(BM_SphereTransformNormal)->RangeMultiplier(8)->Range(16, 1024)->Unit(benchmark::kMillisecond);

static void BM_HelixAveraged(benchmark::State& state) {
  const SurfaceEntry e = find_surface("helix_tangent");
  const AveragedMeasure nu = AveragedMeasure::with_default_psi(measure_of("helix_tangent"),
                                                               e.density_inner, e.density_outer);
  for (auto _ : state) benchmark::DoNotOptimize(averaged_fourier(nu, static_cast<double>(state.range(0))));
}
BENCHMARK(BM_HelixAveraged)->RangeMultiplier(8)->Range(16, 1024)->Unit(benchmark::kMillisecond);

static void BM_ShapeReport(benchmark::State& state) {
  const Chart chart = find_surface("moment_curve_tangent").chart.chart();
  Vec p(3);
  p << 0.02, 0.1, 1.5;
  for (auto _ : state) benchmark::DoNotOptimize(shape_report(chart, p));
}
BENCHMARK(BM_ShapeReport);
