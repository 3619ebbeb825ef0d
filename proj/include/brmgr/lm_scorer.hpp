#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace brmgr {

/// A teacher-forcing request: score the tokens of `continuation` given `context`.
struct ScoreRequest {
  std::string context;
  std::string continuation;

  bool operator==(const ScoreRequest&) const = default;
  auto operator<=>(const ScoreRequest&) const = default;
};

struct TokenLogProbs {
  std::size_t token_count = 0;
  double logprob_sum = 0.0;
  std::optional<std::vector<double>> per_token;

  /// Builds from individual token log-probabilities (left-to-right sum).
  /// Throws EmptyContinuationAfterTokenization when `per_token` is empty and
  /// NonFiniteScore when an entry is NaN or infinite.
  static TokenLogProbs from_per_token(std::vector<double> per_token);

  double mean() const { return logprob_sum / static_cast<double>(token_count); }

  bool operator==(const TokenLogProbs&) const = default;
};

/// Source of continuation log-probabilities under some language model.
/// Implementations must be safe for concurrent callers.
class LmScorer {
 public:
  virtual ~LmScorer() = default;

  /// Throws InvalidArgument on an empty continuation, and the backend errors
  /// BackendUnavailable / BackendRejected / EmptyContinuationAfterTokenization.
  TokenLogProbs score_continuation(const ScoreRequest& request) const;

 protected:
  virtual TokenLogProbs do_score(const ScoreRequest& request) const = 0;
};

/// Scores `requests` with at most `max_in_flight` concurrent calls. Results
/// are positionally aligned with the input. On failure, throws BatchError for
/// the lowest failing index and discards all results.
std::vector<TokenLogProbs> score_batch(const LmScorer& scorer,
                                       std::span<const ScoreRequest> requests,
                                       int max_in_flight);

}  // namespace brmgr
