#include <benchmark/benchmark.h>

#include <cmath>
#include <string>

#include "latlab/config.hpp"
#include "latlab/counting.hpp"
#include "latlab/dynamics.hpp"
#include "latlab/iwasawa.hpp"
#include "latlab/observable.hpp"
#include "latlab/sampler.hpp"
#include "latlab/tails.hpp"
#include "latlab/zeta.hpp"

namespace {

latlab::BasisMatrix heckeTrial(std::uint64_t i, int n = 3) {
  latlab::SamplerConfig cfg;
  cfg.dim = n;
  cfg.seed = 11;
  cfg.trialIndex = i;
  return latlab::sampleHecke(cfg);
}

void BM_SampleHecke(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(heckeTrial(i++, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_SampleHecke)->Arg(3)->Arg(5);

void BM_SampleSiegelIwasawa(benchmark::State& state) {
  latlab::SamplerConfig cfg;
  cfg.method = latlab::SamplerMethod::siegelIwasawa;
  for (auto _ : state) {
    ++cfg.trialIndex;
    benchmark::DoNotOptimize(latlab::sampleSiegelIwasawa(cfg, cfg.truncation));
  }
}
BENCHMARK(BM_SampleSiegelIwasawa);

void BM_IwasawaDecompose(benchmark::State& state) {
  latlab::SamplerConfig cfg;
  cfg.method = latlab::SamplerMethod::siegelIwasawa;
  const auto g = latlab::sampleSiegelIwasawa(cfg, cfg.truncation).g;
  for (auto _ : state) benchmark::DoNotOptimize(latlab::iwasawaDecompose(g));
}
BENCHMARK(BM_IwasawaDecompose);

void BM_EpsteinZeta(benchmark::State& state) {
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  latlab::ZetaOptions opt;
  opt.tol = tol;
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(latlab::epsteinZeta(heckeTrial(i++), 2.0, opt));
}
BENCHMARK(BM_EpsteinZeta)->Arg(6)->Arg(10);

void BM_TupleCountsOnGrid(benchmark::State& state) {
  const auto family = latlab::RegionFamily::uniform(3, 2);
  const auto grid = latlab::parseGrid("log:10:" + std::to_string(state.range(0)) + ":25");
  const auto b = heckeTrial(0);
  for (auto _ : state) benchmark::DoNotOptimize(latlab::tupleCountsOnGrid(b, family, grid));
}
BENCHMARK(BM_TupleCountsOnGrid)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_LogLawTrace(benchmark::State& state) {
  const auto spec = latlab::FlowSpec::diagonal({1, 1, -2});
  const auto obs = latlab::ObservableSpec::parse("negLogBeta:1");
  const auto times = latlab::geometricTimeGrid(static_cast<double>(state.range(0)), 32);
  const auto b = heckeTrial(0);
  for (auto _ : state) benchmark::DoNotOptimize(latlab::logLawTrace(b, spec, obs, times));
}
BENCHMARK(BM_LogLawTrace)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_EstimateTail(benchmark::State& state) {
  latlab::SamplerConfig cfg;
  const auto source = latlab::makeSource(cfg);
  const auto ev = latlab::EventSpec::parse("betaLeq:1");
  for (auto _ : state)
    benchmark::DoNotOptimize(latlab::estimateTail(source, 3, ev, {0.2, 0.3, 0.5}, 10000, 1));
}
BENCHMARK(BM_EstimateTail)->Unit(benchmark::kMillisecond);

}  // namespace
