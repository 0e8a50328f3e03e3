#include <benchmark/benchmark.h>

#include "e2rc/exit_engine.hpp"
#include "e2rc/infotheory.hpp"

namespace {

void JFunction(benchmark::State& state) {
  double sigma = 0.0;
  for (auto _ : state) {
    sigma += 1e-4;
    if (sigma > 10.0) sigma = 1e-4;
    benchmark::DoNotOptimize(e2rc::j_function(sigma));
  }
}
BENCHMARK(JFunction);

void JInverse(benchmark::State& state) {
  double i = 0.0;
  for (auto _ : state) {
    i += 1e-5;
    if (i > 0.999) i = 1e-5;
    benchmark::DoNotOptimize(e2rc::j_inverse(i));
  }
}
BENCHMARK(JInverse);

void StructuredExitPoint(benchmark::State& state) {
  auto comp = e2rc::make_e2rc_component(int(state.range(0)),
                                        e2rc::DegreeDistribution::single(8), 0.95775);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e2rc::structured_exit_point(comp, 0.5));
  }
}
BENCHMARK(StructuredExitPoint)->Arg(32)->Arg(128);

void StructuredExitCurve1000(benchmark::State& state) {
  auto comp = e2rc::make_e2rc_component(int(state.range(0)),
                                        e2rc::DegreeDistribution::single(8), 0.95775);
  for (auto _ : state) {
    benchmark::DoNotOptimize(e2rc::structured_exit_curve(comp, 1000));
  }
}
BENCHMARK(StructuredExitCurve1000)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
