#include <benchmark/benchmark.h>

#include "common/test_util.hpp"
#include "igrf/random_forest.hpp"

using namespace igrf;

namespace {

struct ForestFixture {
  Matrix x;
  std::vector<std::int32_t> y;
};

ForestFixture make_fixture(std::size_t rows, std::size_t features) {
  Rng rng(3);
  ForestFixture f{Matrix(rows, features), std::vector<std::int32_t>(rows)};
  for (std::size_t r = 0; r < rows; ++r) {
    f.y[r] = static_cast<std::int32_t>(uniform_index(rng, 4));
    for (std::size_t c = 0; c < features; ++c) {
      f.x(r, c) = test::gaussian(rng) + (c < 2 ? 0.8 * static_cast<double>(f.y[r]) : 0.0);
    }
  }
  return f;
}

void BM_FitForest(benchmark::State& state) {
  const auto fixture = make_fixture(static_cast<std::size_t>(state.range(0)), 20);
  ForestConfig config;
  config.n_trees = 32;
  config.seed = 7;
  config.n_threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_forest(fixture.x, fixture.y, 4, config));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_FitForest)->Range(256, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const auto fixture = make_fixture(2048, 20);
  ForestConfig config;
  config.n_trees = 64;
  config.seed = 7;
  const Forest forest = fit_forest(fixture.x, fixture.y, 4, config);
  std::size_t row = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict(forest, fixture.x.row(row)));
    row = (row + 1) % fixture.x.rows;
  }
}
BENCHMARK(BM_ForestPredict);

void BM_Importance(benchmark::State& state) {
  const auto fixture = make_fixture(2048, 20);
  ForestConfig config;
  config.n_trees = 64;
  config.seed = 7;
  const Forest forest = fit_forest(fixture.x, fixture.y, 4, config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(importance(forest));
  }
}
BENCHMARK(BM_Importance);

}  // namespace
