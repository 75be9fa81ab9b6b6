#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "docqa/corpus/corpus.hpp"
#include "docqa/extract/extract.hpp"
#include "docqa/metrics/metrics.hpp"
#include "docqa/retrieve/index.hpp"
#include "docqa/retrieve/ranking.hpp"

using namespace docqa;

namespace {

// A paper-sized document: `n` passages of ~80 tokens over a 2k-word vocabulary.
corpus::Document synthetic_document(std::size_t n) {
  std::mt19937 rng(1);
  std::vector<corpus::Passage> ps;
  for (std::size_t i = 0; i < n; ++i) {
    std::string text;
    for (int t = 0; t < 80; ++t) text += "w" + std::to_string(rng() % 2000) + " ";
    ps.push_back({{}, text, corpus::PassageCategory::paragraph, std::nullopt, {}});
  }
  return corpus::register_document(std::move(ps), "bench");
}

std::vector<extract::CharBox> synthetic_page(int lines) {
  std::vector<extract::CharBox> out;
  for (int l = 0; l < lines; ++l) {
    double x = 72;
    const double base = 80 + 12.0 * l;
    for (int c = 0; c < 90; ++c, x += 5) {
      if (c % 7 == 6) continue;
      out.push_back({static_cast<char32_t>('a' + c % 26), x, base - 7, x + 5, base + 2, 0, base});
    }
  }
  return out;
}

void BM_BuildIndex(benchmark::State& state) {
  const auto doc = synthetic_document(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(retrieve::InvertedIndex::build(doc));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(50)->Arg(200)->Arg(1000);

void BM_Bm25Rank(benchmark::State& state) {
  const auto doc = synthetic_document(static_cast<std::size_t>(state.range(0)));
  const auto index = retrieve::InvertedIndex::build(doc);
  const std::string question = "w12 w345 w1999 w7 w88 w1024";
  for (auto _ : state) benchmark::DoNotOptimize(retrieve::bm25_rank(question, index));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Bm25Rank)->Arg(50)->Arg(200)->Arg(1000);

void BM_ClipTextToRegion(benchmark::State& state) {
  const auto page = synthetic_page(static_cast<int>(state.range(0)));
  const extract::RegionBox region{0, 60, 60, 540, 80 + 12.0 * state.range(0),
                                  extract::RegionCategory::paragraph, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(extract::clip_text_to_region(page, region));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(page.size()));
}
BENCHMARK(BM_ClipTextToRegion)->Arg(10)->Arg(60);

void BM_RecallAtPercent(benchmark::State& state) {
  const auto doc = synthetic_document(200);
  const auto ranked = retrieve::bm25_rank("w12 w345 w1999", retrieve::InvertedIndex::build(doc));
  const std::set<std::string> gold{"p0003", "p0150"};
  for (auto _ : state)
    for (const double k : {1.0, 5.0, 10.0, 20.0})
      benchmark::DoNotOptimize(metrics::recall_at_percent(ranked, gold, k));
}
BENCHMARK(BM_RecallAtPercent);

}  // namespace

BENCHMARK_MAIN();
