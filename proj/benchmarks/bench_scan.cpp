#include <benchmark/benchmark.h>

#include "midco/bisect.hpp"
#include "midco/oracle2d.hpp"

#include <cmath>
#include <random>

using namespace midco;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Problem quad2(double cx, double cy, double B) {
  QuadraticFn q;
  q.Q = 2.0 * Matrix::Identity(2, 2);
  q.c = vec2(-2 * cx, -2 * cy);
  q.c0 = cx * cx + cy * cy;
  return make_problem(2, 0, B, make_quadratic_objective(q, 2, 0, B));
}

}  // namespace

static void BM_Improve2d(benchmark::State& state) {
  const double B = static_cast<double>(state.range(0));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> cdist(-0.8 * B, 0.8 * B);
  for (auto _ : state) {
    Problem p = quad2(cdist(rng), cdist(rng), B);
    benchmark::DoNotOptimize(improve_2d(p, vec2(cdist(rng), cdist(rng))));
  }
}
BENCHMARK(BM_Improve2d)->Arg(1 << 5)->Arg(1 << 10)->Arg(1 << 20);

static void BM_Minimize2dCertify(benchmark::State& state) {
  const double B = static_cast<double>(state.range(0));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cdist(-0.8 * B, 0.8 * B);
  for (auto _ : state) {
    double cx = cdist(rng), cy = cdist(rng);
    Problem p = quad2(cx, cy, B);
    benchmark::DoNotOptimize(minimize_2d(p, vec2(cx, cy)));
  }
}
BENCHMARK(BM_Minimize2dCertify)->Arg(10)->Arg(30)->Arg(100);

static void BM_GoldenInteger(benchmark::State& state) {
  const double gamma = 1e-4;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> cdist(0.0, 1.0);
  for (auto _ : state) {
    double c = cdist(rng);
    NoisyFn fn{[c](double t) { return (t - c) * (t - c); }, gamma, 1.0};
    benchmark::DoNotOptimize(golden_min_integer(fn, ScaledLattice{0.0, 1e-3}));
  }
}
BENCHMARK(BM_GoldenInteger);
