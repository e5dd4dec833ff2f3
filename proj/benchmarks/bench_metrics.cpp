#include <benchmark/benchmark.h>

#include "common/test_util.hpp"
#include "igrf/metrics.hpp"

using namespace igrf;

namespace {

void BM_WeightedReportWithRoc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t k = 6;
  Rng rng(2);
  const auto truth = test::random_labels(rng, n, k);
  const auto pred = test::random_labels(rng, n, k);
  Matrix probs(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      probs(i, j) = 0.01 + igrf::uniform_real(rng);
      sum += probs(i, j);
    }
    for (std::size_t j = 0; j < k; ++j) probs(i, j) /= sum;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(weighted_report(truth, pred, k, &probs));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WeightedReportWithRoc)->Range(1 << 10, 1 << 15)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace
