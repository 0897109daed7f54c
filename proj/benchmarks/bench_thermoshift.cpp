#include <benchmark/benchmark.h>

#include <cmath>

#include "thermoshift/coe.hpp"
#include "thermoshift/kms.hpp"
#include "thermoshift/transfer.hpp"
#include "thermoshift/zeta.hpp"

namespace ts = thermoshift;

namespace {

ts::MatrixPtr full_shift2() {
  static ts::MatrixPtr m = ts::make_matrix({{1, 1}, {1, 1}});
  return m;
}

ts::MatrixPtr golden_mean() {
  static ts::MatrixPtr m = ts::make_matrix({{1, 1}, {1, 0}});
  return m;
}

ts::LocallyConstantFunction golden_temperature_potential() {
  const auto c2 =
      ts::LocallyConstantFunction::from_symbol_table(golden_mean(),
                                                     std::vector<std::int64_t>{1, 0});
  const auto ones = ts::LocallyConstantFunction::constant(golden_mean(), std::int64_t{1});
  return ts::scale(ones - c2, std::log(2.0));
}

void BM_PerronFullShift(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ts::perron(*full_shift2()).eigenvalue);
}
BENCHMARK(BM_PerronFullShift);

void BM_PerronGoldenMean(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ts::perron(*golden_mean()).eigenvalue);
}
BENCHMARK(BM_PerronGoldenMean);

void BM_RpfGoldenMean(benchmark::State& state) {
  const auto phi = golden_temperature_potential();
  for (auto _ : state)
    benchmark::DoNotOptimize(ts::rpf(golden_mean(), phi).eigenvalue);
}
BENCHMARK(BM_RpfGoldenMean);

void BM_SolveBetaFullShift(benchmark::State& state) {
  const auto ones = ts::LocallyConstantFunction::constant(full_shift2(), std::int64_t{1});
  for (auto _ : state)
    benchmark::DoNotOptimize(ts::solve_beta(full_shift2(), ones).beta);
}
BENCHMARK(BM_SolveBetaFullShift);

void BM_EntropyLimitDecodedSide(benchmark::State& state) {
  const ts::CoeWitness w = ts::golden_example();
  const int n_max = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ts::entropy_limit_sequence(w, 2, n_max).back().value);
}
BENCHMARK(BM_EntropyLimitDecodedSide)->Arg(10)->Arg(20)->Arg(30);

void BM_VerifyEquivalence(benchmark::State& state) {
  const ts::CoeWitness w = ts::golden_example();
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ts::verify_equivalence(w, depth).words_checked);
}
BENCHMARK(BM_VerifyEquivalence)->Arg(8)->Arg(12);

void BM_ZetaSeries(benchmark::State& state) {
  const int terms = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(ts::zeta_series(*golden_mean(), terms).cross_check);
}
BENCHMARK(BM_ZetaSeries)->Arg(20)->Arg(60);

void BM_HnCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ts::hn_check(n));
}
BENCHMARK(BM_HnCheck)->Arg(8)->Arg(14);

}  // namespace

BENCHMARK_MAIN();
