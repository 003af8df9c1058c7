#include <benchmark/benchmark.h>

#include "synthetic.hpp"
#include "teamrec/matching.hpp"

namespace teamrec::bench {
namespace {

void BM_FuzzyMatch(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto text = sentence(rng, static_cast<int>(state.range(0)));
  const auto user = make_user(rng, "u", 5);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzy_match(text, user.skills));
}
BENCHMARK(BM_FuzzyMatch)->Arg(50)->Arg(500);

void BM_VectorMatch(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<std::string> corpus;
  for (int i = 0; i < 200; ++i) corpus.push_back(sentence(rng, 80));
  const auto model = build_corpus_model(corpus);
  const auto text = sentence(rng, static_cast<int>(state.range(0)));
  const auto user = make_user(rng, "u", 5);
  for (auto _ : state) benchmark::DoNotOptimize(vector_match(text, user.skills, model));
}
BENCHMARK(BM_VectorMatch)->Arg(50)->Arg(500);

void BM_BuildCorpusModel(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::vector<std::string> corpus;
  for (int i = 0; i < state.range(0); ++i) corpus.push_back(sentence(rng, 80));
  for (auto _ : state) benchmark::DoNotOptimize(build_corpus_model(corpus));
}
BENCHMARK(BM_BuildCorpusModel)->Arg(200)->Arg(2000);

void BM_TopKCalls(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const auto calls = make_calls(rng, static_cast<int>(state.range(0)), 80);
  std::vector<std::string> synopses;
  for (const auto& c : calls) synopses.push_back(c.synopsis);
  const auto model = build_corpus_model(synopses);
  const auto user = make_user(rng, "u", 6);
  const auto strategy = state.range(1) ? MatchStrategy::vector : MatchStrategy::fuzzy;
  for (auto _ : state) benchmark::DoNotOptimize(top_k_calls(user, calls, &model, strategy, 10));
}
BENCHMARK(BM_TopKCalls)->Args({200, 0})->Args({200, 1})->Args({2000, 0})->Args({2000, 1});

}  // namespace
}  // namespace teamrec::bench
