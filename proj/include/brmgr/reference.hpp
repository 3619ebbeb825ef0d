#pragma once

#include <span>
#include <vector>

#include "brmgr/types.hpp"

/// Serial reference versions of the OpenMP kernels. Kept for equivalence
/// tests and the benchmark; not used on the production path.
namespace brmgr::reference {

// RelevanceMatrix build_relevance_matrix(...) is declared in types.hpp.

std::vector<MatchedPair> greedy_match(const ScoreGrid& cells);

std::vector<bool> top_k_hits(std::span<const std::vector<Passage>> ranked,
                             std::span<const Query> queries, int k);

}  // namespace brmgr::reference
