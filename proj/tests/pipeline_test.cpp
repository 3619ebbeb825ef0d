#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "brmgr/error.hpp"
#include "brmgr/mock_scorer.hpp"
#include "brmgr/pipeline.hpp"
#include "brmgr/run.hpp"
#include "test_util.hpp"

namespace brmgr {
namespace {

const std::filesystem::path kData = BRMGR_TEST_DATA;

std::vector<QuestionRecord> fixture(const PipelineConfig& config = {}) {
  return ingest_corpus(kData / "fixture_corpus.jsonl", config);
}

std::vector<std::string> ids(const QuestionResult& r) {
  std::vector<std::string> out;
  for (const auto& p : r.passages) out.push_back(p.passage.id);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(IngestTest, ReadsFixture) {
  const auto corpus = fixture();
  ASSERT_EQ(corpus.size(), 10u);
  EXPECT_EQ(corpus[0].query.id, "q0");
  EXPECT_EQ(corpus[0].retrieved.size(), 4u);
  EXPECT_EQ(corpus[3].generated.size(), 3u);
}

TEST(IngestTest, ThreeLines) {
  std::stringstream in;
  for (int i = 0; i < 3; ++i) {
    in << R"({"question_id":"x)" << i
       << R"(","question":"q","answers":["a"],"retrieved":[],"generated":[]})" << "\n";
  }
  EXPECT_EQ(ingest_corpus(in, {}).size(), 3u);
}

TEST(IngestTest, MalformedLineReportsLineNumber) {
  try {
    ingest_corpus(kData / "malformed.jsonl", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(IngestTest, TruncatesByOriginRank) {
  nlohmann::json gen = nlohmann::json::array();
  for (int i = 19; i >= 0; --i) {
    gen.push_back({{"id", "g" + std::to_string(i)}, {"text", "t"}, {"rank", i}});
  }
  nlohmann::json rec{{"question_id", "x"}, {"question", "q"}, {"answers", {"a"}},
                     {"retrieved", nlohmann::json::array()}, {"generated", gen}};
  std::stringstream in(rec.dump() + "\n");
  PipelineConfig config;
  const auto corpus = ingest_corpus(in, config);
  ASSERT_EQ(corpus[0].generated.size(), 10u);
  EXPECT_EQ(corpus[0].generated.front().id, "g0");
  EXPECT_EQ(corpus[0].generated.back().id, "g9");
}

TEST(IngestTest, MissingFileIsIo) {
  try {
    ingest_corpus(kData / "does_not_exist.jsonl", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
    EXPECT_EQ(exit_code_for(e.code()), 3);
  }
}

TEST(ModeTest, ParseNames) {
  EXPECT_EQ(parse_mode("brmgr"), Mode::BRMGR);
  EXPECT_EQ(parse_mode("Retri-Rerank"), Mode::RetriRerank);
  EXPECT_EQ(parse_mode("ablation-qgen"), Mode::AblationQGen);
  EXPECT_THROW(parse_mode("combo"), Error);
}

TEST(PipelineTest, OriginModesKeepInputOrder) {
  const auto corpus = fixture();
  PipelineConfig config;
  config.mode = Mode::RetriOrigin;
  const auto r = rank_question(corpus[1], config, nullptr);
  EXPECT_EQ(ids(r), (std::vector<std::string>{"q1-r0", "q1-r1", "q1-r2", "q1-r3"}));
  EXPECT_FALSE(r.passages[0].score.has_value());
  config.mode = Mode::OriginCombi;
  EXPECT_EQ(ids(rank_question(corpus[3], config, nullptr)),
            (std::vector<std::string>{"q3-r0", "q3-g0", "q3-r1", "q3-g1", "q3-r2", "q3-g2",
                                      "q3-r3"}));
}

TEST(PipelineTest, RetriOriginEmMatchesHandCount) {
  PipelineConfig config;
  config.mode = Mode::RetriOrigin;
  config.k_values = {1, 3, 4};
  const auto result = run_pipeline(config, fixture(), nullptr);
  // Answer-bearing retrieved passages sit at ranks 0,1,3,3,-,0,3,1,-,3.
  EXPECT_EQ(result.report.em_at_k, (std::vector<double>{0.2, 0.4, 0.8}));
}

TEST(PipelineTest, BrmgrBeatsOriginCombiAtTop1) {
  MockScorer mock;
  PipelineConfig config;
  config.k_values = {1};
  config.mode = Mode::BRMGR;
  const double brmgr = run_pipeline(config, fixture(), &mock).report.em_at_k[0];
  config.mode = Mode::OriginCombi;
  const double combi = run_pipeline(config, fixture(), &mock).report.em_at_k[0];
  EXPECT_GT(brmgr, combi);
}

TEST(PipelineTest, EqualScoresKeepInputOrder) {
  testing::TableScorer flat({}, {-2.0, -2.0});
  PipelineConfig config;
  config.mode = Mode::GenRerank;
  const auto corpus = fixture();
  const auto r = rank_question(corpus[0], config, &flat);
  EXPECT_EQ(ids(r), (std::vector<std::string>{"q0-g0", "q0-g1", "q0-g2", "q0-g3"}));
}

TEST(PipelineTest, ModeConservation) {
  MockScorer mock;
  const auto corpus = fixture();
  for (Mode mode : {Mode::RetriOrigin, Mode::RetriRerank, Mode::GenOrigin, Mode::GenRerank,
                    Mode::OriginCombi, Mode::BRMGR, Mode::AblationQGen}) {
    PipelineConfig config;
    config.mode = mode;
    for (const auto& rec : corpus) {
      const auto r = rank_question(rec, config, &mock);
      std::set<std::string> allowed;
      if (uses_retrieved(mode)) for (const auto& p : rec.retrieved) allowed.insert(p.id);
      if (uses_generated(mode)) for (const auto& p : rec.generated) allowed.insert(p.id);
      const auto got = ids(r);
      const std::set<std::string> unique(got.begin(), got.end());
      EXPECT_EQ(unique.size(), got.size());
      EXPECT_EQ(unique, allowed) << to_string(mode) << " " << rec.query.id;
    }
  }
}

TEST(PipelineTest, BrmgrPairsBestPassagesFirst) {
  MockScorer mock;
  PipelineConfig config;
  config.mode = Mode::BRMGR;
  const auto corpus = fixture();
  const auto r = rank_question(corpus[2], config, &mock);
  ASSERT_EQ(r.passages.size(), 8u);
  EXPECT_EQ(r.passages[0].passage.id, "q2-r3");
  EXPECT_EQ(r.passages[1].passage.id, "q2-g0");
  config.flatten_policy = FlattenPolicy::GeneratedFirst;
  EXPECT_EQ(rank_question(corpus[2], config, &mock).passages[0].passage.id, "q2-g0");
}

TEST(PipelineTest, ScoredModeWithoutScorerFails) {
  PipelineConfig config;
  config.mode = Mode::GenRerank;
  EXPECT_THROW(run_pipeline(config, fixture(), nullptr), Error);
}

TEST(PipelineTest, FailFastNamesQuestion) {
  const auto corpus = fixture();
  testing::FailingScorer scorer(corpus[4].query.text, ErrorCode::BackendRejected);
  PipelineConfig config;
  config.mode = Mode::RetriRerank;
  config.workers = 3;
  try {
    run_pipeline(config, corpus, &scorer);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BackendRejected);
    EXPECT_EQ(exit_code_for(e.code()), 2);
    EXPECT_NE(std::string(e.what()).find("q4"), std::string::npos);
  }
  config.skip_errors = true;
  const auto result = run_pipeline(config, corpus, &scorer);
  EXPECT_EQ(result.questions.size(), 9u);
  EXPECT_EQ(result.report.skipped, 1u);
  EXPECT_EQ(result.report.to_json().at("n_skipped"), 1);
  EXPECT_NE(result.report.to_table("x").find("SKIPPED"), std::string::npos);
}

TEST(PipelineTest, ConfigValidation) {
  PipelineConfig config;
  config.m_generated = 0;
  EXPECT_THROW(config.validate(), Error);
  config.mode = Mode::RetriOrigin;
  EXPECT_NO_THROW(config.validate());
  config.k_values = {0};
  EXPECT_THROW(config.validate(), Error);
}

TEST(EmitTest, WritesFilesAndEvalRoundTrips) {
  const auto out = std::filesystem::temp_directory_path() / "brmgr_emit_test";
  std::filesystem::remove_all(out);
  PipelineConfig config;
  config.mode = Mode::BRMGR;
  config.k_values = {1, 3};
  const auto result = run_to_directory(config, kData / "fixture_corpus.jsonl", out);
  for (auto name : {kRankedFile, kReportJsonFile, kReportTextFile, kScoreCacheFile}) {
    EXPECT_TRUE(std::filesystem::exists(out / name)) << name;
  }
  const auto report = nlohmann::json::parse(slurp(out / kReportJsonFile));
  EXPECT_EQ(report.at("n_questions"), 10);
  EXPECT_EQ(report.at("k"), nlohmann::json({1, 3}));

  std::ifstream ranked(out / kRankedFile);
  std::string first;
  std::getline(ranked, first);
  const auto line = nlohmann::json::parse(first);
  EXPECT_EQ(line.at("question_id"), "q0");
  EXPECT_EQ(line.at("passages")[0].at("rank"), 0);
  EXPECT_TRUE(line.at("passages")[0].at("score").is_number());

  // The eval path reproduces the run's metric from the dump.
  std::ifstream dump(out / kRankedFile);
  PipelineConfig full;
  const auto corpus = ingest_corpus(kData / "fixture_corpus.jsonl", full);
  const auto lists = load_ranked_dump(dump, corpus);
  std::vector<Query> queries;
  for (const auto& r : corpus) queries.push_back(r.query);
  const std::vector<int> ks{1, 3};
  EXPECT_EQ(evaluate(lists, queries, ks).em_at_k, result.report.em_at_k);

  // Second run reuses the cache and produces identical bytes.
  const auto before = slurp(out / kRankedFile);
  run_to_directory(config, kData / "fixture_corpus.jsonl", out);
  EXPECT_EQ(slurp(out / kRankedFile), before);
}

TEST(EmitTest, UnknownPassageInDumpIsMisaligned) {
  const auto corpus = fixture();
  std::stringstream dump(
      R"({"question_id":"q0","passages":[{"id":"nope","source":"retrieved","score":null,"rank":0}]})");
  try {
    load_ranked_dump(dump, corpus);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MisalignedInputs);
  }
}

}  // namespace
}  // namespace brmgr
