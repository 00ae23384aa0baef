// Microbenchmarks for the core computational paths: word combinatorics,
// spectral pressure, the induced-pressure root, partition-sum walks, the
// tail-series diagnostic, Gibbs construction with its cylinder bands, and
// the randomized variational search.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <map>
#include <vector>

#include "indpress/induced.hpp"
#include "indpress/measures.hpp"
#include "indpress/potential.hpp"
#include "indpress/pressure.hpp"
#include "indpress/sft.hpp"

namespace {

using namespace indpress;

const Sft& golden() {
  static const Sft s(2, {1, 1, 1, 0});
  return s;
}

const Sft& full3() {
  static const Sft s(3, {1, 1, 1, 1, 1, 1, 1, 1, 1});
  return s;
}

Potential mem1(const Sft& s, const std::vector<double>& values) {
  std::map<Word, double> table;
  for (int i = 0; i < static_cast<int>(values.size()); ++i)
    table[{i + 1}] = values[static_cast<std::size_t>(i)];
  return Potential(s, 1, table);
}

// Weighted-gauge problem on the golden-mean shift: phi = {0.2, -0.3},
// psi = {1, 2}.  Exercises the generic (non-unit-gauge) paths.
const InducedProblem& golden_weighted() {
  static const InducedProblem prob(golden(), mem1(golden(), {0.2, -0.3}),
                                   mem1(golden(), {1.0, 2.0}));
  return prob;
}

// Three-symbol problem with non-constant gauge; the partition-sum state
// space is the richest of the fixtures here.
const InducedProblem& full3_problem() {
  static const InducedProblem prob(full3(), mem1(full3(), {-0.1, 0.0, 0.1}),
                                   mem1(full3(), {0.5, 1.0, 1.5}));
  return prob;
}

// Memory-3 potential on the golden-mean shift, for the recoding path.
Potential golden_mem3() {
  std::map<Word, double> table;
  const std::vector<Word> words = enumerate_words(golden(), 3);
  double v = -0.4;
  for (const Word& w : words) {
    table[w] = v;
    v += 0.2;
  }
  return Potential(golden(), 3, table);
}

void BM_CountWords(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_words(full3(), n));
}
BENCHMARK(BM_CountWords)->Arg(8)->Arg(16)->Arg(32);

void BM_EnumerateWords(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto words = enumerate_words(golden(), n);
    benchmark::DoNotOptimize(words.data());
  }
}
BENCHMARK(BM_EnumerateWords)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_PressureSpectralMem1(benchmark::State& state) {
  const Potential phi = mem1(golden(), {0.2, -0.3});
  for (auto _ : state)
    benchmark::DoNotOptimize(pressure_spectral(golden(), phi));
}
BENCHMARK(BM_PressureSpectralMem1)->Unit(benchmark::kMicrosecond);

void BM_PressureSpectralMem2(benchmark::State& state) {
  std::map<Word, double> table;
  double v = -0.8;
  for (const Word& w : enumerate_words(full3(), 2)) {
    table[w] = v;
    v += 0.2;
  }
  const Potential phi(full3(), 2, table);
  for (auto _ : state)
    benchmark::DoNotOptimize(pressure_spectral(full3(), phi));
}
BENCHMARK(BM_PressureSpectralMem2)->Unit(benchmark::kMicrosecond);

void BM_RecodeMemory3(benchmark::State& state) {
  const Potential phi = golden_mem3();
  for (auto _ : state) {
    RecodedSystem rec = recode_to_memory2(golden(), {phi});
    benchmark::DoNotOptimize(rec.changed);
  }
}
BENCHMARK(BM_RecodeMemory3)->Unit(benchmark::kMicrosecond);

void BM_InducedRoot(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(induced_pressure_root(golden_weighted()));
}
BENCHMARK(BM_InducedRoot)->Unit(benchmark::kMicrosecond);

void BM_BsDimension(benchmark::State& state) {
  const Potential psi = mem1(golden(), {1.0, 2.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(bs_dimension(golden(), psi));
}
BENCHMARK(BM_BsDimension)->Unit(benchmark::kMicrosecond);

void BM_SpanningPartitionSum(benchmark::State& state) {
  const double T = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        spanning_partition_sum(full3_problem(), T).log_value);
}
BENCHMARK(BM_SpanningPartitionSum)
    ->Arg(8)
    ->Arg(16)
    ->Arg(32)
    ->Arg(60)
    ->Unit(benchmark::kMillisecond);

void BM_SeparatedPartitionSum(benchmark::State& state) {
  const double T = static_cast<double>(state.range(0)) + 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        separated_partition_sum(full3_problem(), T).log_value);
}
BENCHMARK(BM_SeparatedPartitionSum)
    ->Arg(8)
    ->Arg(16)
    ->Arg(32)
    ->Unit(benchmark::kMillisecond);

void BM_TailDiagnostic(benchmark::State& state) {
  const double beta =
      induced_pressure_root(golden_weighted()).beta + 0.2;
  std::vector<double> grid;
  for (int i = 1; i <= 6; ++i) grid.push_back(4.0 * i);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        r_diagnostic(golden_weighted(), beta, grid).verdict);
}
BENCHMARK(BM_TailDiagnostic)->Unit(benchmark::kMillisecond);

void BM_GibbsMeasure(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(gibbs_measure(golden_weighted()).beta_star);
}
BENCHMARK(BM_GibbsMeasure)->Unit(benchmark::kMicrosecond);

void BM_GibbsBands(benchmark::State& state) {
  const GibbsResult g = gibbs_measure(golden_weighted());
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto bands =
        gibbs_constant_estimate(g.measure, golden_weighted(), g.beta_star,
                                depth);
    benchmark::DoNotOptimize(bands.data());
  }
}
BENCHMARK(BM_GibbsBands)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_VariationalSearch(benchmark::State& state) {
  const int samples = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        variational_search(golden_weighted(), samples, 50, 12345)
            .best_quotient);
}
BENCHMARK(BM_VariationalSearch)
    ->Arg(100)
    ->Arg(500)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
