#include <benchmark/benchmark.h>

#include <random>

#include "kbc/eval.hpp"
#include "kbc/trainer.hpp"
#include "kbc_test_support.hpp"

using namespace kbc;

namespace {

ModelVariant variant_arg(const benchmark::State& state) { return static_cast<ModelVariant>(state.range(0)); }

void BM_BatchScoreRhs(benchmark::State& state) {
  const std::size_t n = 5000, rank = static_cast<std::size_t>(state.range(1));
  auto m = kbc::testing::random_model(variant_arg(state), n, 20, rank, 1);
  std::mt19937_64 rng(2);
  std::vector<std::pair<Index, Index>> pairs(100);
  for (auto& [a, j] : pairs) a = static_cast<Index>(rng() % n), j = static_cast<Index>(rng() % 20);
  for (auto _ : state) benchmark::DoNotOptimize(batch_score_rhs(m, pairs));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pairs.size() * n));
}
BENCHMARK(BM_BatchScoreRhs)->ArgsProduct({{0, 1, 2}, {32, 128}})->Unit(benchmark::kMillisecond);

void BM_ReciprocalLossAndGrad(benchmark::State& state) {
  const std::size_t n = 2000, rank = static_cast<std::size_t>(state.range(1));
  auto train = augment_reciprocal(kbc::testing::random_store(5000, n, 10, 3));
  auto m = kbc::testing::random_model(variant_arg(state), n, 20, rank, 4);
  TrainConfig c;
  c.model.variant = variant_arg(state);
  c.regularizer = {RegularizerVariant::n3_sampled, 0.01};
  auto batch = train.triples().subspan(0, 100);
  Gradients g(m);
  for (auto _ : state) {
    g.clear();
    benchmark::DoNotOptimize(compute_batch_objective(c, m, train, batch, nullptr, &g));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_ReciprocalLossAndGrad)->ArgsProduct({{0, 1, 2}, {32, 128}})->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const std::size_t n = 2000;
  auto d = kbc::testing::random_splits(n, 10, 5000, 500, 500, 5);
  auto filter = build_filter_index({&d.train, &d.valid, &d.test}, true);
  auto m = kbc::testing::random_model(ModelVariant::complex, n, 20, 64, 6);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(m, d.test, filter, Formulation::reciprocal));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

void BM_Epoch(benchmark::State& state) {
  const std::size_t n = 1000;
  auto train = augment_reciprocal(kbc::testing::random_store(4000, n, 8, 7));
  TrainConfig c;
  c.model = {ModelVariant::cp, 64, 1e-3, 0};
  c.regularizer = {RegularizerVariant::n3_sampled, 0.01};
  c.epochs = 1;
  c.eval_every = 0;
  for (auto _ : state) benchmark::DoNotOptimize(fit(c, train, nullptr, nullptr));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(train.size()));
}
BENCHMARK(BM_Epoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
