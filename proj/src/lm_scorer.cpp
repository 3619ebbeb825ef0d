#include "brmgr/lm_scorer.hpp"

#include <cmath>
#include <exception>

#include "brmgr/error.hpp"

namespace brmgr {

TokenLogProbs TokenLogProbs::from_per_token(std::vector<double> per_token) {
  if (per_token.empty()) {
    throw Error(ErrorCode::EmptyContinuationAfterTokenization, "no continuation tokens");
  }
  double sum = 0.0;
  for (double lp : per_token) {
    if (!std::isfinite(lp)) throw Error(ErrorCode::NonFiniteScore, "token log-probability");
    sum += lp;
  }
  TokenLogProbs out;
  out.token_count = per_token.size();
  out.logprob_sum = sum;
  out.per_token = std::move(per_token);
  return out;
}

TokenLogProbs LmScorer::score_continuation(const ScoreRequest& request) const {
  if (request.continuation.empty()) {
    throw Error(ErrorCode::InvalidArgument, "continuation must be non-empty");
  }
  return do_score(request);
}

std::vector<TokenLogProbs> score_batch(const LmScorer& scorer,
                                       std::span<const ScoreRequest> requests,
                                       int max_in_flight) {
  if (max_in_flight < 1) throw Error(ErrorCode::InvalidArgument, "max_in_flight must be >= 1");

  const auto n = static_cast<std::ptrdiff_t>(requests.size());
  std::vector<TokenLogProbs> results(requests.size());
  std::vector<std::exception_ptr> failures(requests.size());

#pragma omp parallel for num_threads(max_in_flight) schedule(dynamic, 1) if (max_in_flight > 1 && n > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      results[i] = scorer.score_continuation(requests[i]);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i]) continue;
    try {
      std::rethrow_exception(failures[i]);
    } catch (const Error& e) {
      throw BatchError(e, i);
    }
  }
  return results;
}

}  // namespace brmgr
