#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "vexlp/exponents.hpp"
#include "vexlp/norms.hpp"
#include "vexlp/operators.hpp"

namespace {

using namespace vexlp;

SampledFunction noise(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  auto f = make_function(g);
  for (auto& v : f.values) v = dist(rng);
  return f;
}

void BM_luxemburg_norm(benchmark::State& state) {
  Grid g = make_grid(1, 4.0, int(state.range(0)));
  auto p = smooth_bump_exponent(g, 2.0, 1.0, 1.0);
  auto f = noise(g, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(luxemburg_norm(f, p).value);
}
BENCHMARK(BM_luxemburg_norm)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_hl_maximal(benchmark::State& state) {
  Grid g = make_grid(1, 4.0, int(state.range(0)));
  auto f = noise(g, 2);
  auto radii = RadiiSet::dyadic(g);
  for (auto _ : state) benchmark::DoNotOptimize(hl_maximal(f, radii));
}
BENCHMARK(BM_hl_maximal)->Arg(256)->Arg(1024);

void BM_convolve(benchmark::State& state) {
  Grid g = make_grid(1, 4.0, int(state.range(0)));
  auto f = noise(g, 3);
  auto k = eta_kernel(g, 2, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(convolve(k.samples, f));
}
BENCHMARK(BM_convolve)->Arg(1024)->Arg(16384);

void BM_dft(benchmark::State& state) {
  Grid g = make_grid(1, 4.0, int(state.range(0)));
  auto f = noise(g, 4);
  for (auto _ : state) benchmark::DoNotOptimize(dft(f));
}
BENCHMARK(BM_dft)->Arg(4096)->Arg(65536);

}  // namespace

BENCHMARK_MAIN();
