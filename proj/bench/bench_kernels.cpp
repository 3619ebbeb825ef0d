#include <benchmark/benchmark.h>

#include <random>

#include "brmgr/evaluation.hpp"
#include "brmgr/matching.hpp"
#include "brmgr/reference.hpp"
#include "brmgr/scoring.hpp"

namespace {

std::vector<double> random_scores(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-20.0, 0.0);
  std::vector<double> out(n);
  for (auto& v : out) v = d(rng);
  return out;
}

void BM_Matrix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto gen = random_scores(n, 1), retr = random_scores(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(brmgr::build_relevance_matrix(gen, retr));
}

void BM_MatrixReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto gen = random_scores(n, 1), retr = random_scores(n, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brmgr::reference::build_relevance_matrix(gen, retr));
  }
}

void BM_Greedy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = brmgr::build_relevance_matrix(random_scores(n, 3), random_scores(n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(brmgr::greedy_match(m.cells()));
}

void BM_GreedyReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto m = brmgr::build_relevance_matrix(random_scores(n, 3), random_scores(n, 4));
  for (auto _ : state) benchmark::DoNotOptimize(brmgr::reference::greedy_match(m.cells()));
}

struct HitData {
  std::vector<std::vector<brmgr::Passage>> ranked;
  std::vector<brmgr::Query> queries;
};

HitData hit_data(std::size_t questions) {
  HitData d;
  for (std::size_t q = 0; q < questions; ++q) {
    d.queries.push_back({"q" + std::to_string(q), "question", {"answer " + std::to_string(q)}});
    std::vector<brmgr::Passage> list(20);
    for (std::size_t r = 0; r < list.size(); ++r) {
      list[r].id = "p" + std::to_string(r);
      list[r].text = "some filler text about item " + std::to_string(q * 31 + r) +
                     (r == q % 25 ? " with answer " + std::to_string(q) : "");
      list[r].origin_rank = static_cast<int>(r);
    }
    d.ranked.push_back(std::move(list));
  }
  return d;
}

void BM_Hits(benchmark::State& state) {
  const auto d = hit_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brmgr::top_k_hits(d.ranked, d.queries, 10));
}

void BM_HitsReference(benchmark::State& state) {
  const auto d = hit_data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(brmgr::reference::top_k_hits(d.ranked, d.queries, 10));
  }
}

BENCHMARK(BM_Matrix)->Arg(10)->Arg(200)->Arg(1000);
BENCHMARK(BM_MatrixReference)->Arg(10)->Arg(200)->Arg(1000);
BENCHMARK(BM_Greedy)->Arg(10)->Arg(200)->Arg(500);
BENCHMARK(BM_GreedyReference)->Arg(10)->Arg(200)->Arg(500);
BENCHMARK(BM_Hits)->Arg(100)->Arg(2000);
BENCHMARK(BM_HitsReference)->Arg(100)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
