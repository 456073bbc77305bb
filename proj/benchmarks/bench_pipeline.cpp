#include <benchmark/benchmark.h>

#include "bookrec/engine.hpp"
#include "bookrec/evaluation.hpp"
#include "bookrec/similarity.hpp"
#include "bookrec/synth.hpp"

using namespace bookrec;

namespace {

std::vector<RatingEvent> corpus_of(int users) {
  return synth_generate(users, std::max(4, users / 5), 6, 0.8, 1234);
}

void BM_BuildCooccurrence(benchmark::State& state) {
  const auto events = corpus_of(static_cast<int>(state.range(0)));
  const auto catalog = build_catalog(events);
  for (auto _ : state) {
    auto m = cooccurrence_matrix(events, catalog, Kind::book, 4);
    benchmark::DoNotOptimize(m);
  }
  state.SetItemsProcessed(state.iterations() * events.size());
}
BENCHMARK(BM_BuildCooccurrence)->Arg(50)->Arg(200)->Arg(800);

void BM_BuildCosine(benchmark::State& state) {
  const auto events = corpus_of(static_cast<int>(state.range(0)));
  const auto catalog = build_catalog(events);
  const auto m = build_item_user(events, catalog, Kind::book);
  for (auto _ : state) {
    auto sim = cosine_matrix(m);
    benchmark::DoNotOptimize(sim);
  }
}
BENCHMARK(BM_BuildCosine)->Arg(50)->Arg(200)->Arg(800);

void BM_SecondOrderCosine(benchmark::State& state) {
  const auto events = corpus_of(static_cast<int>(state.range(0)));
  const auto catalog = build_catalog(events);
  const auto cooc = cooccurrence_matrix(events, catalog, Kind::book, 4);
  for (auto _ : state) {
    auto sim = second_order_matrix(cooc, Scheme::cosine);
    benchmark::DoNotOptimize(sim);
  }
}
BENCHMARK(BM_SecondOrderCosine)->Arg(50)->Arg(200);

void BM_RecommendUser(benchmark::State& state) {
  const auto events = corpus_of(static_cast<int>(state.range(0)));
  const auto engine = Engine::train(events, {Scheme::cooc, 4});
  const FusionSpec fusion;
  const AggregationSpec agg_author{AggFunction::cfpa, 60.0};
  const AggregationSpec agg_book{AggFunction::rrf, 60.0};
  UserIndex user = 0;
  for (auto _ : state) {
    auto list = engine.recommend(user, fusion, agg_author, agg_book);
    benchmark::DoNotOptimize(list);
    user = (user + 1) % engine.catalog().users.size();
  }
}
BENCHMARK(BM_RecommendUser)->Arg(200)->Arg(800);

void BM_Evaluate(benchmark::State& state) {
  const auto events = corpus_of(static_cast<int>(state.range(0)));
  const auto corpus = temporal_split(events, 0.9);
  const auto engine = Engine::train(corpus.train, {Scheme::cooc, 4});
  for (auto _ : state) {
    auto report = evaluate_with_engine(engine, corpus.test, {});
    benchmark::DoNotOptimize(report);
  }
}
BENCHMARK(BM_Evaluate)->Arg(100)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
