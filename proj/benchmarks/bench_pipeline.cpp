#include <benchmark/benchmark.h>

#include "entgraph/entgraph.hpp"

using namespace entgraph;

namespace {

SyntheticCorpus drift(std::size_t threads) {
  DriftConfig cfg;
  cfg.threads = threads;
  cfg.seed = 1;
  return generate_drift_corpus(cfg);
}

EntityGraph expanded(std::size_t threads) {
  const auto data = drift(threads);
  return star_expand(build_graph(corpus_paths(data.corpus, data.entity_sets), "drift"));
}

void bm_build_graph(benchmark::State& state) {
  const auto data = drift(static_cast<std::size_t>(state.range(0)));
  const auto paths = corpus_paths(data.corpus, data.entity_sets);
  for (auto _ : state) benchmark::DoNotOptimize(star_expand(build_graph(paths, "drift")));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_build_graph)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

void bm_wmd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  EmbeddingTable emb(50);
  Rng rng(2);
  std::vector<EntityId> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto* side : {&a, &b}) {
      EntityId id(synthetic_entity_name(side == &a ? i : 1000 + i));
      std::vector<double> v(50);
      for (auto& x : v) x = rng.normal();
      emb.insert(id, v);
      side->push_back(id);
    }
  }
  const EntitySet sa(a), sb(b);
  for (auto _ : state) benchmark::DoNotOptimize(wmd(sa, sb, emb));
}
BENCHMARK(bm_wmd)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void bm_layout(benchmark::State& state) {
  const auto g = expanded(static_cast<std::size_t>(state.range(0)));
  LayoutConfig cfg;
  cfg.iterations_per_depth = 20;
  for (auto _ : state) benchmark::DoNotOptimize(compute_layout(g, cfg));
  state.counters["vertices"] = static_cast<double>(g.vertices().size());
}
BENCHMARK(bm_layout)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_spread(benchmark::State& state) {
  const auto g = expanded(static_cast<std::size_t>(state.range(0)));
  const RewiredView view(g);
  const auto src = g.vertices_at(0, VertexKind::set).front();
  const ActivationParams params{0.05, 0.9, WeightNormalization::out_normalized};
  for (auto _ : state) benchmark::DoNotOptimize(spread(view, src, params));
}
BENCHMARK(bm_spread)->Arg(200)->Arg(800)->Unit(benchmark::kMicrosecond);

void bm_rewire(benchmark::State& state) {
  const auto g = expanded(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(RewiredView(g));
}
BENCHMARK(bm_rewire)->Arg(200)->Arg(800)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
