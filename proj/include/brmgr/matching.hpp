#pragma once

#include <span>
#include <vector>

#include "brmgr/types.hpp"

namespace brmgr {

/// Repeatedly takes the largest cell among unmatched rows and columns until
/// min(M, N) pairs exist. Ties go to the lower row, then the lower column.
/// Output is in selection order. Cells are compared exactly.
std::vector<MatchedPair> greedy_match(const ScoreGrid& cells);
std::vector<MatchedPair> greedy_match(const RelevanceMatrix& matrix);

/// Optimal assignment by the Hungarian method.
///
/// Cells are log-scores; the objective is the sum of exp(cell - max cell),
/// the combination probabilities up to a common positive scale. Rectangular
/// input is padded to square with cells of (min cell - 1e6), which carry zero
/// weight, and padded assignments are dropped. Among exactly tied optima
/// (identical multisets of selected cells) the result is canonicalized to the
/// lexicographically smallest pair list. Output is sorted by descending
/// combined_score, then gen_index, then retr_index.
std::vector<MatchedPair> hungarian_match(const ScoreGrid& cells);
std::vector<MatchedPair> hungarian_match(const RelevanceMatrix& matrix);

/// Exhaustive search over all injections, same objective and output order as
/// hungarian_match; among optima returns the lexicographically smallest pair
/// list. Throws TooLarge when min(M, N) > kBruteForceLimit.
inline constexpr std::size_t kBruteForceLimit = 8;
std::vector<MatchedPair> brute_force_match(const ScoreGrid& cells);
std::vector<MatchedPair> brute_force_match(const RelevanceMatrix& matrix);

/// Probability-space objective of a pairing: sum of exp(cell - max cell),
/// accumulated in ascending order so equal multisets give equal sums.
double assignment_objective(const ScoreGrid& cells, std::span<const MatchedPair> pairs);

/// Sum of the selected log cells, accumulated in ascending order.
double assignment_log_sum(std::span<const MatchedPair> pairs);

/// Sorts by descending combined_score, then gen_index, then retr_index.
void sort_pairs(std::vector<MatchedPair>& pairs);

enum class FlattenPolicy { RetrievedFirst, GeneratedFirst };

/// Expands pairs (descending combined_score) into a passage list, each pair
/// ordered per `policy`, followed by unmatched passages by descending score.
/// Throws IndexOutOfRange for indices outside the lists and InvalidArgument
/// for a reused index.
std::vector<ScoredPassage> flatten_pairs(std::span<const MatchedPair> pairs,
                                         std::span<const ScoredPassage> gen,
                                         std::span<const ScoredPassage> retr,
                                         FlattenPolicy policy);

}  // namespace brmgr
