#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace brmgr {

struct CheckOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct MatchCheckOptions {
  int trials = 1000;
  int max_n = 6;
  std::uint64_t seed = 20240601;
};

/// Randomized verification that greedy, Hungarian and exhaustive matching
/// agree on factorizable (log-rank-1) score matrices, that Hungarian is
/// optimal on general matrices, and that greedy is not optimal without the
/// factorization.
std::vector<CheckOutcome> run_match_check(const MatchCheckOptions& options);

}  // namespace brmgr
