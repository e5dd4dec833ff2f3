#include <benchmark/benchmark.h>

#include "common/test_util.hpp"
#include "igrf/info_gain.hpp"

using namespace igrf;

namespace {

Table synthetic_ranking_table(std::size_t rows, std::size_t features) {
  Rng rng(1);
  std::vector<std::vector<double>> cols(features, std::vector<double>(rows));
  std::vector<std::int32_t> labels(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    labels[r] = static_cast<std::int32_t>(uniform_index(rng, 6));
    for (std::size_t c = 0; c < features; ++c) {
      cols[c][r] = test::gaussian(rng) + (c == 0 ? static_cast<double>(labels[r]) : 0.0);
    }
  }
  return test::make_numeric_table(cols, labels, {"a", "b", "c", "d", "e", "f"});
}

void BM_InformationGainSingleFeature(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Table t = synthetic_ranking_table(rows, 1);
  const Discretizer d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(information_gain(t.numeric[0], t.labels, 6, d));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InformationGainSingleFeature)->Range(1 << 10, 1 << 16)->Complexity();

void BM_RankIg39Features(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const Table t = synthetic_ranking_table(rows, 39);
  const Discretizer d;
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_ig(t, d));
  }
}
BENCHMARK(BM_RankIg39Features)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

}  // namespace
