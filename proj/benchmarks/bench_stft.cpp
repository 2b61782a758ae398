#include <benchmark/benchmark.h>

#include "hrtlab/stft.hpp"
#include "hrtlab/window.hpp"

namespace {

using namespace hrtlab;

const QuadratureSpec q{};

void BM_StftGaussianClosed(benchmark::State& state) {
  const Window g = make_window(WindowSpec::gaussian(), 1e-12);
  double x = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft(g, g, x, -0.7, q));
    x = -x;
  }
}
BENCHMARK(BM_StftGaussianClosed);

void BM_StftTwoSidedExp(benchmark::State& state) {
  const Window w = make_window(WindowSpec::two_sided_exp(), 1e-12);
  const double y = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(stft(w, w, 0.4, y, q));
}
BENCHMARK(BM_StftTwoSidedExp)->Arg(0)->Arg(1)->Arg(4);

void BM_StftRationalTails(benchmark::State& state) {
  const Window w = make_window(WindowSpec::rational_decay(), 1e-12);
  const double y = static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(stft(w, w, 0.4, y, q));
}
BENCHMARK(BM_StftRationalTails)->Arg(0)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
