#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "brmgr/lm_scorer.hpp"

namespace brmgr {

/// Deterministic offline scorer.
///
/// Both context and continuation are split on whitespace, lowercased, and
/// stripped of leading/trailing ASCII punctuation; empty tokens are dropped.
/// The continuation token `w` at position `p` receives
///
///     (w in context ? -1.0 : -5.0) + jitter(w, p)
///     jitter(w, p) = -0.01 * (fnv1a64(w + '\x1f' + decimal(p)) & 0xFFFFF) / 0xFFFFF
///
/// so relevant (word-sharing) contexts score strictly higher, and exact ties
/// between different continuations are unlikely. Output is bit-identical
/// across runs and platforms.
class MockScorer final : public LmScorer {
 public:
  static constexpr double kSharedLogProb = -1.0;
  static constexpr double kUnsharedLogProb = -5.0;
  static constexpr double kJitterScale = 0.01;

  static std::vector<std::string> tokenize(std::string_view text);
  static std::uint64_t fnv1a64(std::string_view bytes);
  static double jitter(std::string_view word, std::size_t position);

 protected:
  TokenLogProbs do_score(const ScoreRequest& request) const override;
};

}  // namespace brmgr
