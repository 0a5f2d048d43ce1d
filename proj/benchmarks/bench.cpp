#include <benchmark/benchmark.h>

#include "sqg/abelian.hpp"

#include <random>

using namespace sqg;

static Mat bench_matrix(size_t n) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> d(-20, 20);
  Mat m(n, n);
  for (auto& e : m.a) e = d(rng);
  return m;
}

static void BM_Smith(benchmark::State& state) {
  Mat m = bench_matrix(static_cast<size_t>(state.range(0)));
  for (auto _ : state) {
    SmithResult r = smith(m);
    benchmark::DoNotOptimize(r.rank);
  }
}
BENCHMARK(BM_Smith)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
