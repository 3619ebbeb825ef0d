#pragma once

#include <chrono>
#include <optional>
#include <string>

#include "brmgr/lm_scorer.hpp"

namespace brmgr {

struct RemoteScorerConfig {
  std::string endpoint;  // e.g. "http://localhost:8080/score"
  std::optional<std::string> auth_token;
  double timeout_seconds = 30.0;
  int retries = 3;
  std::chrono::milliseconds initial_backoff{200};

  /// Reads the bearer token from SCORER_API_TOKEN if set.
  static std::optional<std::string> token_from_env();
};

/// Client for a teacher-forcing scoring endpoint.
///
/// POST {"context": str, "continuation": str}
///   -> {"tokens": [str], "logprobs": [number]}
///
/// Token counts are taken from the backend's tokenization. Transport failures
/// and 5xx responses are BackendUnavailable and are retried with exponential
/// backoff; 4xx and malformed responses are BackendRejected.
class RemoteScorer final : public LmScorer {
 public:
  explicit RemoteScorer(RemoteScorerConfig config);

  const RemoteScorerConfig& config() const noexcept { return config_; }

 protected:
  TokenLogProbs do_score(const ScoreRequest& request) const override;

 private:
  TokenLogProbs attempt(const ScoreRequest& request) const;

  RemoteScorerConfig config_;
  std::string base_url_;  // scheme://host[:port]
  std::string path_;
};

}  // namespace brmgr
