#include <benchmark/benchmark.h>

#include "common/test_util.hpp"
#include "igrf/mlp.hpp"

using namespace igrf;

namespace {

void BM_TrainStep(benchmark::State& state) {
  const auto input_dim = static_cast<std::size_t>(state.range(0));
  MlpConfig config;  // default 128x128 net
  config.seed = 5;
  MlpModel model = init_model(config, input_dim, 6);
  AdamState adam = AdamState::for_model(model);
  Rng rng(9);
  const Matrix batch = test::random_matrix(rng, config.batch_size, input_dim);
  const Matrix targets = one_hot_targets(test::random_labels(rng, config.batch_size, 6), 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_step(model, batch, targets, adam));
  }
}
BENCHMARK(BM_TrainStep)->Arg(27)->Arg(42)->Arg(196)->Unit(benchmark::kMillisecond);

void BM_InferBatch(benchmark::State& state) {
  MlpConfig config;
  config.seed = 5;
  const MlpModel model = init_model(config, 42, 6);
  Rng rng(10);
  const Matrix batch = test::random_matrix(rng, static_cast<std::size_t>(state.range(0)), 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(predict_proba(model, batch));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InferBatch)->Range(64, 8192)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace
