#include <benchmark/benchmark.h>

#include "midco/lattice2d.hpp"

#include <random>

using namespace midco;

static void BM_Ilp2Triangle(benchmark::State& state) {
  const long span = state.range(0);
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<long> coord(-span * 4, span * 4);
  for (auto _ : state) {
    Vec2R a(Rat(coord(rng), 4), Rat(coord(rng), 4));
    Vec2R b(Rat(coord(rng), 4), Rat(coord(rng), 4));
    Vec2R c(Rat(coord(rng), 4), Rat(coord(rng), 4));
    auto region = triangle_halfplanes(a, b, c);
    benchmark::DoNotOptimize(ilp2_min(IntVec2{1, 2}, region));
  }
}
BENCHMARK(BM_Ilp2Triangle)->Arg(50)->Arg(1 << 10)->Arg(1 << 20);

BENCHMARK_MAIN();
