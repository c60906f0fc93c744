#include <benchmark/benchmark.h>

#include "umt/evaluation.hpp"
#include "umt/impossibility.hpp"
#include "umt/trainer.hpp"

namespace {

void BM_BruteForceWorstCase(benchmark::State& state) {
  const auto inst = umt::make_worst_case(0.6);
  const int z = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(umt::brute_force_min_error(inst, z, 0.1));
  }
}
BENCHMARK(BM_BruteForceWorstCase)->DenseRange(2, 4);

void BM_FitEdge(benchmark::State& state) {
  const auto codecs =
      umt::make_codec_set({"A", "B"}, umt::sample_randomized_codecs(umt::FunctionClassSpec{}, 2, 2, 0.05, 1));
  const auto corpus = umt::randomized_generate("A", "B", codecs, static_cast<int>(state.range(0)), {4, 1.0}, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(umt::fit_edge(corpus));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitEdge)->RangeMultiplier(8)->Range(64, 32768);

void BM_PopulationLoss(benchmark::State& state) {
  const auto codecs =
      umt::make_codec_set({"A", "B"}, umt::sample_randomized_codecs(umt::FunctionClassSpec{}, 2, 2, 0.05, 1));
  const auto fit = umt::fit_edge(umt::randomized_generate("A", "B", codecs, 200, {4, 1.0}, 2));
  const umt::PopulationConfig cfg{static_cast<int>(state.range(0)), 3};
  for (auto _ : state) {
    benchmark::DoNotOptimize(umt::population_loss_of_map(fit.map, "A", "B", codecs, {4, 1.0}, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PopulationLoss)->RangeMultiplier(10)->Range(1000, 100000);

void BM_TrainChain(benchmark::State& state) {
  const auto g = umt::TranslationGraph::chain(static_cast<int>(state.range(0)), 200);
  const auto codecs = umt::make_codec_set(
      g.languages(), umt::sample_randomized_codecs(umt::FunctionClassSpec{}, static_cast<int>(g.size()), 2, 0.05, 1));
  std::vector<umt::AlignedCorpus> corpora;
  for (const auto& e : g.edges()) corpora.push_back(umt::randomized_generate(e.a, e.b, codecs, e.samples, {4, 1.0}, 2));
  umt::TrainConfig cfg;
  cfg.sweeps = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(umt::train(g, corpora, cfg));
  }
}
BENCHMARK(BM_TrainChain)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
