#include <benchmark/benchmark.h>

#include "hrtlab/extension.hpp"
#include "hrtlab/search.hpp"

namespace {

using namespace hrtlab;

const QuadratureSpec q{};

ExtensionEvaluator gauss3() {
  const Window g = make_window(WindowSpec::gaussian(), 1e-12);
  return build_extension(g, validate({{0, 0}, {0, 1}, {1, 0}}, 1e-9), q);
}

void BM_EvalF(benchmark::State& state) {
  const auto e = gauss3();
  double a = 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval_F(e, a, 1.22, q).F);
    a = -a;
  }
}
BENCHMARK(BM_EvalF);

void BM_ScanRow(benchmark::State& state) {
  const auto e = gauss3();
  for (auto _ : state) {
    benchmark::DoNotOptimize(scan(e, {-4.0, 4.0, 0.0, 0.05}, 0.05, q));
  }
}
BENCHMARK(BM_ScanRow);

void BM_Fhat(benchmark::State& state) {
  const auto e = gauss3();
  for (auto _ : state) benchmark::DoNotOptimize(fhat(e, 0.5, -0.5, q));
}
BENCHMARK(BM_Fhat);

}  // namespace

BENCHMARK_MAIN();
