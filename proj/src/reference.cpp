#include "brmgr/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "brmgr/error.hpp"
#include "brmgr/evaluation.hpp"

namespace brmgr::reference {

RelevanceMatrix build_relevance_matrix(std::span<const double> gen_scores,
                                       std::span<const double> retr_scores) {
  if (gen_scores.empty() || retr_scores.empty()) {
    throw Error(ErrorCode::EmptyInput, "relevance matrix needs both passage lists non-empty");
  }
  ScoreGrid cells(gen_scores.size(), retr_scores.size());
  for (std::size_t i = 0; i < gen_scores.size(); ++i) {
    for (std::size_t j = 0; j < retr_scores.size(); ++j) {
      cells.at(i, j) = gen_scores[i] + retr_scores[j];
    }
  }
  cells.validate();
  return RelevanceMatrix({gen_scores.begin(), gen_scores.end()},
                         {retr_scores.begin(), retr_scores.end()}, std::move(cells));
}

std::vector<MatchedPair> greedy_match(const ScoreGrid& cells) {
  cells.validate();
  std::vector<char> row_used(cells.rows(), 0), col_used(cells.cols(), 0);
  std::vector<MatchedPair> pairs;
  const std::size_t k = std::min(cells.rows(), cells.cols());
  for (std::size_t step = 0; step < k; ++step) {
    bool found = false;
    MatchedPair best;
    for (std::size_t i = 0; i < cells.rows(); ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < cells.cols(); ++j) {
        if (col_used[j]) continue;
        // strict > keeps the first (lowest row, then column) maximum
        if (!found || cells.at(i, j) > best.combined_score) {
          best = {i, j, cells.at(i, j)};
          found = true;
        }
      }
    }
    row_used[best.gen_index] = 1;
    col_used[best.retr_index] = 1;
    pairs.push_back(best);
  }
  return pairs;
}

std::vector<bool> top_k_hits(std::span<const std::vector<Passage>> ranked,
                             std::span<const Query> queries, int k) {
  if (ranked.size() != queries.size()) throw Error(ErrorCode::MisalignedInputs, "sizes differ");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  std::vector<bool> hits;
  hits.reserve(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    bool hit = false;
    for (std::size_t r = 0; r < ranked[q].size() && r < static_cast<std::size_t>(k); ++r) {
      hit = hit || passage_contains_answer(ranked[q][r], queries[q].answers);
    }
    hits.push_back(hit);
  }
  return hits;
}

}  // namespace brmgr::reference
