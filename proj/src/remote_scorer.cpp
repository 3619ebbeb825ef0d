#include "brmgr/remote_scorer.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "brmgr/error.hpp"

namespace brmgr {

std::optional<std::string> RemoteScorerConfig::token_from_env() {
  if (const char* v = std::getenv("SCORER_API_TOKEN"); v != nullptr && *v != '\0') {
    return std::string(v);
  }
  return std::nullopt;
}

RemoteScorer::RemoteScorer(RemoteScorerConfig config) : config_(std::move(config)) {
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "endpoint '" + url + "' has no scheme");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  base_url_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
  if (config_.retries < 0) throw Error(ErrorCode::InvalidArgument, "retries must be >= 0");
  if (!(config_.timeout_seconds > 0)) {
    throw Error(ErrorCode::InvalidArgument, "timeout must be positive");
  }
}

TokenLogProbs RemoteScorer::do_score(const ScoreRequest& request) const {
  auto backoff = config_.initial_backoff;
  for (int attempt_no = 0;; ++attempt_no) {
    try {
      return attempt(request);
    } catch (const Error& e) {
      if (!e.retryable() || attempt_no >= config_.retries) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

TokenLogProbs RemoteScorer::attempt(const ScoreRequest& request) const {
  // httplib::Client is not safe for concurrent use; one per call.
  httplib::Client client(base_url_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs =
      static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  if (config_.auth_token) headers.emplace("Authorization", "Bearer " + *config_.auth_token);

  const nlohmann::json body{{"context", request.context},
                            {"continuation", request.continuation}};
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::BackendUnavailable,
                config_.endpoint + ": " + httplib::to_string(res.error()));
  }
  if (res->status >= 500) {
    throw Error(ErrorCode::BackendUnavailable,
                config_.endpoint + " returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::BackendRejected, config_.endpoint + " returned HTTP " +
                                                std::to_string(res->status) + ": " + res->body);
  }

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BackendRejected, "malformed response: " + std::string(e.what()));
  }
  const auto tokens = reply.find("tokens");
  const auto logprobs = reply.find("logprobs");
  if (tokens == reply.end() || logprobs == reply.end() || !tokens->is_array() ||
      !logprobs->is_array()) {
    throw Error(ErrorCode::BackendRejected, "response lacks tokens/logprobs arrays");
  }
  if (tokens->size() != logprobs->size()) {
    throw Error(ErrorCode::BackendRejected, "response has " + std::to_string(tokens->size()) +
                                                " tokens but " +
                                                std::to_string(logprobs->size()) + " logprobs");
  }
  std::vector<double> per_token;
  per_token.reserve(logprobs->size());
  for (const auto& lp : *logprobs) {
    if (!lp.is_number()) throw Error(ErrorCode::BackendRejected, "non-numeric logprob");
    per_token.push_back(lp.get<double>());
  }
  return TokenLogProbs::from_per_token(std::move(per_token));
}

}  // namespace brmgr
