#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "brmgr/error.hpp"
#include "brmgr/remote_scorer.hpp"

namespace brmgr {
namespace {

using nlohmann::json;

class RemoteScorerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Post("/score", [this](const httplib::Request& req, httplib::Response& res) {
      ++calls_;
      last_auth_ = req.get_header_value("Authorization");
      const auto body = json::parse(req.body);
      const auto continuation = body.at("continuation").get<std::string>();
      if (continuation == "flaky" && calls_ < 3) {
        res.status = 503;
        return;
      }
      if (continuation == "too long") {
        res.status = 400;
        res.set_content("context length exceeded", "text/plain");
        return;
      }
      if (continuation == "garbage") {
        res.set_content("{not json", "application/json");
        return;
      }
      if (continuation == "mismatch") {
        res.set_content(R"({"tokens": ["a", "b"], "logprobs": [-1.0]})", "application/json");
        return;
      }
      if (continuation == "nothing") {
        res.set_content(R"({"tokens": [], "logprobs": []})", "application/json");
        return;
      }
      // Echo-style backend: one token per byte pair, fixed log-probs.
      json reply{{"tokens", {"wh", "ere", " is"}}, {"logprobs", {-0.5, -1.5, -1.0}}};
      res.set_content(reply.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  RemoteScorerConfig config() const {
    RemoteScorerConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/score";
    c.timeout_seconds = 5;
    c.retries = 3;
    c.initial_backoff = std::chrono::milliseconds(1);
    return c;
  }

  ErrorCode failure_code(const RemoteScorer& scorer, const std::string& continuation) {
    try {
      scorer.score_continuation({"ctx", continuation});
    } catch (const Error& e) {
      return e.code();
    }
    ADD_FAILURE() << "expected failure for " << continuation;
    return ErrorCode::Io;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> calls_{0};
  std::string last_auth_;
};

TEST_F(RemoteScorerTest, UsesBackendTokenization) {
  auto c = config();
  c.auth_token = "secret";
  RemoteScorer scorer(c);
  const auto out = scorer.score_continuation({"passage: x", "where is"});
  EXPECT_EQ(out.token_count, 3u);
  EXPECT_EQ(out.logprob_sum, -3.0);
  EXPECT_EQ(last_auth_, "Bearer secret");
}

TEST_F(RemoteScorerTest, RetriesUnavailableBackend) {
  RemoteScorer scorer(config());
  const auto out = scorer.score_continuation({"ctx", "flaky"});
  EXPECT_EQ(out.token_count, 3u);
  EXPECT_EQ(calls_.load(), 3);
}

TEST_F(RemoteScorerTest, GivesUpAfterRetryBudget) {
  auto c = config();
  c.retries = 1;
  RemoteScorer scorer(c);
  EXPECT_EQ(failure_code(scorer, "flaky"), ErrorCode::BackendUnavailable);
  EXPECT_EQ(calls_.load(), 2);
}

TEST_F(RemoteScorerTest, RejectionsAreNotRetried) {
  RemoteScorer scorer(config());
  EXPECT_EQ(failure_code(scorer, "too long"), ErrorCode::BackendRejected);
  EXPECT_EQ(calls_.load(), 1);
  EXPECT_EQ(failure_code(scorer, "garbage"), ErrorCode::BackendRejected);
  EXPECT_EQ(failure_code(scorer, "mismatch"), ErrorCode::BackendRejected);
  EXPECT_EQ(failure_code(scorer, "nothing"), ErrorCode::EmptyContinuationAfterTokenization);
}

TEST_F(RemoteScorerTest, UnreachableEndpointIsUnavailable) {
  auto c = config();
  c.endpoint = "http://127.0.0.1:1/score";
  c.retries = 0;
  c.timeout_seconds = 1;
  RemoteScorer scorer(c);
  EXPECT_EQ(failure_code(scorer, "anything"), ErrorCode::BackendUnavailable);
}

TEST(RemoteScorerConfigTest, RejectsEndpointWithoutScheme) {
  RemoteScorerConfig c;
  c.endpoint = "localhost:8080/score";
  EXPECT_THROW(RemoteScorer{c}, Error);
}

}  // namespace
}  // namespace brmgr
