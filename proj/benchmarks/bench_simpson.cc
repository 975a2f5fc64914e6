#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "simpson/analysis.h"
#include "simpson/ingest.h"
#include "simpson/synthesis.h"

namespace {

using namespace simpson;

StratifiedTable recovery_example() {
  return StratifiedTable({{"male", CellCounts(7, 3, 18, 12)}, {"female", CellCounts(9, 21, 2, 8)}},
                         "sex");
}

void BM_RationalAddSmall(benchmark::State& state) {
  Rational a(7, 30), b(11, 42);
  for (auto _ : state) {
    Rational c = a + b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_RationalAddSmall);

void BM_RationalMulBig(benchmark::State& state) {
  const Rational a = Rational::parse("123456789012345678901234567/98765432109876543");
  const Rational b = Rational::parse("-3141592653589793238462643/2718281828459045235");
  for (auto _ : state) {
    Rational c = a * b;
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_RationalMulBig);

void BM_DetectReversalRecoveryExample(benchmark::State& state) {
  const StratifiedTable t = recovery_example();
  for (auto _ : state) benchmark::DoNotOptimize(detect_reversal(t));
}
BENCHMARK(BM_DetectReversalRecoveryExample);

void BM_DetectReversalManyStrata(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> cell(1, 500);
  std::vector<Stratum> strata;
  for (int k = 0; k < state.range(0); ++k) {
    strata.push_back({std::to_string(k), CellCounts(cell(rng), cell(rng), cell(rng), cell(rng))});
  }
  const StratifiedTable t(std::move(strata));
  for (auto _ : state) benchmark::DoNotOptimize(detect_reversal(t));
}
BENCHMARK(BM_DetectReversalManyStrata)->Arg(2)->Arg(8)->Arg(16);

void BM_SynthesizeFractional(benchmark::State& state) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(16, 24, 20, 20);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_reverser(spec));
}
BENCHMARK(BM_SynthesizeFractional);

void BM_SynthesizeInteger(benchmark::State& state) {
  SynthesisSpec spec;
  spec.marginal = CellCounts(160, 240, 200, 200);
  spec.mode = SplitMode::kInteger;
  for (auto _ : state) benchmark::DoNotOptimize(synthesize_reverser(spec));
}
BENCHMARK(BM_SynthesizeInteger);

void BM_ScanCovariates(benchmark::State& state) {
  Records records = disaggregate(recovery_example());
  records.header.push_back("noise");
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.5);
  for (auto& row : records.rows) row.push_back(coin(rng) ? "a" : "b");
  ColumnMapping mapping = mapping_for(recovery_example());
  mapping.stratifier_columns = {"sex", "noise"};
  ScanOptions options;
  options.parallel = false;
  for (auto _ : state) benchmark::DoNotOptimize(scan_covariates(records, mapping, options));
}
BENCHMARK(BM_ScanCovariates);

}  // namespace

BENCHMARK_MAIN();
