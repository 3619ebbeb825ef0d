#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "brmgr/caching_scorer.hpp"
#include "brmgr/error.hpp"
#include "brmgr/mock_scorer.hpp"
#include "test_util.hpp"

namespace brmgr {
namespace {

// Independent FNV-1a 64 and jitter, written from the published formula.
double oracle_jitter(const std::string& word, std::size_t position) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : word + "\x1f" + std::to_string(position)) {
    h = (h ^ c) * 1099511628211ULL;
  }
  return -0.01 * static_cast<double>(h % (1u << 20)) / 1048575.0;
}

TEST(MockScorerTest, PublishedFormulaExample) {
  MockScorer mock;
  const auto out = mock.score_continuation(
      {"passage: paris is in france. Please write a question based on this passage",
       "where is paris"});
  EXPECT_EQ(out.token_count, 3u);
  // "where" unshared; "is", "paris" shared. Frozen from an offline recomputation.
  EXPECT_DOUBLE_EQ(out.logprob_sum, -7.021458083589634);
  const double oracle =
      (-5.0 + oracle_jitter("where", 0)) + (-1.0 + oracle_jitter("is", 1)) +
      (-1.0 + oracle_jitter("paris", 2));
  EXPECT_EQ(out.logprob_sum, oracle);
  ASSERT_TRUE(out.per_token.has_value());
  EXPECT_EQ((*out.per_token)[0], -5.0 + oracle_jitter("where", 0));
}

TEST(MockScorerTest, Fnv1aKnownVectors) {
  EXPECT_EQ(MockScorer::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(MockScorer::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(MockScorerTest, TokenizeLowercasesAndTrimsPunctuation) {
  EXPECT_EQ(MockScorer::tokenize("  Hello, World!  ... it's"),
            (std::vector<std::string>{"hello", "world", "it's"}));
}

TEST(MockScorerTest, EmptyContinuationIsPreconditionError) {
  MockScorer mock;
  try {
    mock.score_continuation({"context", ""});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(MockScorerTest, PunctuationOnlyContinuationHasNoTokens) {
  MockScorer mock;
  try {
    mock.score_continuation({"context", " ... !! "});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyContinuationAfterTokenization);
  }
}

TEST(MockScorerTest, JitterRangeAndDeterminism) {
  std::mt19937 rng(3);
  for (int i = 0; i < 2000; ++i) {
    const std::string w = "w" + std::to_string(rng());
    const double j = MockScorer::jitter(w, i % 17);
    EXPECT_LE(j, 0.0);
    EXPECT_GE(j, -0.01);
    EXPECT_EQ(j, MockScorer::jitter(w, i % 17));
    EXPECT_EQ(j, oracle_jitter(w, i % 17));
  }
}

// Property: for a fixed continuation of distinct words, the mean strictly
// increases with the number of continuation words present in the context.
TEST(MockScorerTest, MonotoneInSharedWords) {
  MockScorer mock;
  std::mt19937 rng(11);
  const std::vector<std::string> vocab{"apple", "river", "stone", "cloud", "lamp", "tiger",
                                       "violin", "copper", "meadow", "harbor", "glacier"};
  for (int trial = 0; trial < 200; ++trial) {
    auto words = vocab;
    std::shuffle(words.begin(), words.end(), rng);
    words.resize(1 + rng() % 6);
    std::string continuation;
    for (const auto& w : words) continuation += w + " ";
    double previous = -1e9;
    for (std::size_t shared = 0; shared <= words.size(); ++shared) {
      std::string context = "filler text";
      for (std::size_t s = 0; s < shared; ++s) context += " " + words[s];
      const double mean = mock.score_continuation({context, continuation}).mean();
      EXPECT_GT(mean, previous);
      previous = mean;
    }
  }
}

TEST(TokenLogProbsTest, SumIdentity) {
  const auto t = TokenLogProbs::from_per_token({-1.0, -2.0, -3.0});
  EXPECT_EQ(t.token_count, 3u);
  EXPECT_EQ(t.logprob_sum, -6.0);
  EXPECT_EQ(t.mean(), -2.0);
}

TEST(TokenLogProbsTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(TokenLogProbs::from_per_token({}), Error);
  EXPECT_THROW(TokenLogProbs::from_per_token({-1.0, std::nan("")}), Error);
}

TEST(ScoreBatchTest, MatchesSequentialBitForBit) {
  MockScorer mock;
  std::vector<ScoreRequest> requests;
  for (int i = 0; i < 64; ++i) {
    requests.push_back({"context words " + std::to_string(i % 5), "query words " + std::to_string(i)});
  }
  for (int in_flight : {1, 3, 8}) {
    const auto batch = score_batch(mock, requests, in_flight);
    ASSERT_EQ(batch.size(), requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
      EXPECT_EQ(batch[i], mock.score_continuation(requests[i]));
    }
  }
}

TEST(ScoreBatchTest, ReportsLowestFailingIndex) {
  testing::FailingScorer scorer("bad", ErrorCode::BackendRejected);
  std::vector<ScoreRequest> requests{{"c", "ok"}, {"c", "ok"}, {"c", "bad"}, {"c", "ok"}, {"c", "bad"}};
  try {
    score_batch(scorer, requests, 4);
    FAIL();
  } catch (const BatchError& e) {
    EXPECT_EQ(e.index(), 2u);
    EXPECT_EQ(e.code(), ErrorCode::BackendRejected);
  }
}

TEST(ScoreBatchTest, RejectsZeroInFlight) {
  MockScorer mock;
  std::vector<ScoreRequest> requests{{"c", "x"}};
  EXPECT_THROW(score_batch(mock, requests, 0), Error);
}

TEST(CachingScorerTest, CachesAndPersistsSorted) {
  testing::TableScorer table({{"b a", {-0.5, -0.25}}});
  CachingScorer cache(table);
  const ScoreRequest r1{"ctx", "b a"};
  const ScoreRequest r2{"abc", "zz"};
  const auto first = cache.score_continuation(r1);
  EXPECT_EQ(cache.score_continuation(r1), first);
  cache.score_continuation(r2);
  EXPECT_EQ(cache.hits(), 1u);
  EXPECT_EQ(table.seen.size(), 2u);

  const auto dir = std::filesystem::temp_directory_path() / "brmgr_cache_test";
  std::filesystem::create_directories(dir);
  cache.save(dir / "cache.jsonl");

  testing::TableScorer empty({}, {-9.0});
  CachingScorer reloaded(empty);
  reloaded.load(dir / "cache.jsonl");
  EXPECT_EQ(reloaded.size(), 2u);
  EXPECT_EQ(reloaded.score_continuation(r1), first);
  EXPECT_TRUE(empty.seen.empty());
}

}  // namespace
}  // namespace brmgr
