#include <benchmark/benchmark.h>

#include <random>

#include "latlab/dual.hpp"
#include "latlab/enumeration.hpp"
#include "latlab/lll.hpp"
#include "latlab/minima.hpp"

namespace {

latlab::BasisMatrix hecke(std::mt19937_64& rng, int n, std::int64_t p) {
  std::uniform_int_distribution<std::int64_t> u(0, p - 1);
  latlab::IntMatrix m = latlab::IntMatrix::Zero(n, n);
  m(0, 0) = p;
  for (int i = 1; i < n; ++i) {
    m(i, 0) = u(rng);
    m(i, i) = 1;
  }
  return latlab::BasisMatrix::fromIntegerRows(m, p);
}

void BM_LllHecke(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto b = hecke(rng, n, 1000003);
    benchmark::DoNotOptimize(latlab::lllReduce(b));
  }
}
BENCHMARK(BM_LllHecke)->Arg(3)->Arg(4)->Arg(5);

void BM_SuccessiveMinimaHecke(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto b = hecke(rng, n, 1000003);
    benchmark::DoNotOptimize(latlab::successiveMinima(b));
  }
}
BENCHMARK(BM_SuccessiveMinimaHecke)->Arg(3)->Arg(4)->Arg(5);

void BM_ShortestVectorHecke(benchmark::State& state) {
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    auto b = hecke(rng, 3, 1000003);
    benchmark::DoNotOptimize(latlab::shortestVectorLength(b));
  }
}
BENCHMARK(BM_ShortestVectorHecke);

void BM_DualMinimaHecke(benchmark::State& state) {
  std::mt19937_64 rng(4);
  for (auto _ : state) {
    auto b = hecke(rng, 3, 1000003);
    benchmark::DoNotOptimize(latlab::successiveMinima(latlab::dualBasis(b)));
  }
}
BENCHMARK(BM_DualMinimaHecke);

void BM_CountBall(benchmark::State& state) {
  std::mt19937_64 rng(5);
  const double volume = static_cast<double>(state.range(0));
  auto b = hecke(rng, 3, 1000003);
  const latlab::ReducedLattice lat(b);
  const double r = latlab::ballRadius(3, volume);
  for (auto _ : state) {
    std::uint64_t count = 0;
    lat.forEach(r, [&](const latlab::IntVector&, double, latlab::Int128) { ++count; });
    benchmark::DoNotOptimize(count);
  }
}
BENCHMARK(BM_CountBall)->Arg(20)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
