#include "brmgr/match_check.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <utility>

#include "brmgr/matching.hpp"
#include "brmgr/scoring.hpp"

namespace brmgr {
namespace {

using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

PairSet as_set(const std::vector<MatchedPair>& pairs) {
  PairSet out;
  for (const auto& p : pairs) out.emplace(p.gen_index, p.retr_index);
  return out;
}

// Half the trials draw from a 0.25-step grid (exact duplicates), the rest
// uniformly from [-10, 0].
std::vector<double> draw_scores(std::mt19937_64& rng, std::size_t n, bool grid) {
  std::uniform_int_distribution<int> step(0, 40);
  std::uniform_real_distribution<double> real(-10.0, 0.0);
  std::vector<double> out(n);
  for (auto& v : out) v = grid ? -0.25 * step(rng) : real(rng);
  return out;
}

}  // namespace

std::vector<CheckOutcome> run_match_check(const MatchCheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> size(1, std::max(1, options.max_n));
  std::vector<CheckOutcome> out;

  {
    int failures = 0;
    for (int t = 0; t < options.trials; ++t) {
      const auto n = static_cast<std::size_t>(size(rng));
      const bool grid = t % 2 == 0;
      const auto gen = draw_scores(rng, n, grid);
      const auto retr = draw_scores(rng, n, grid);
      const auto matrix = build_relevance_matrix(gen, retr);
      const auto greedy = as_set(greedy_match(matrix));
      if (greedy != as_set(hungarian_match(matrix)) || greedy != as_set(brute_force_match(matrix))) {
        ++failures;
      }
    }
    out.push_back({"factorized: greedy == hungarian == brute force", failures == 0,
                   std::to_string(options.trials) + " matrices, " + std::to_string(failures) +
                       " failures"});
  }

  {
    int failures = 0;
    std::uniform_real_distribution<double> cell(-5.0, 0.0);
    for (int t = 0; t < options.trials; ++t) {
      const auto n = static_cast<std::size_t>(size(rng));
      std::vector<double> values(n * n);
      for (auto& v : values) v = cell(rng);
      const ScoreGrid grid(n, n, std::move(values));
      const auto h = hungarian_match(grid);
      const auto b = brute_force_match(grid);
      if (assignment_objective(grid, h) != assignment_objective(grid, b)) ++failures;
    }
    out.push_back({"general: hungarian objective == brute force objective", failures == 0,
                   std::to_string(options.trials) + " matrices, " + std::to_string(failures) +
                       " failures"});
  }

  {
    const auto grid = ScoreGrid::from_rows({{1.0, 0.99}, {0.99, -5.0}});
    const double greedy = assignment_objective(grid, greedy_match(grid));
    const double best = assignment_objective(grid, hungarian_match(grid));
    out.push_back({"non-factorized witness: greedy < optimal", greedy < best,
                   "greedy " + std::to_string(greedy) + " vs optimal " + std::to_string(best)});
  }
  return out;
}

}  // namespace brmgr
