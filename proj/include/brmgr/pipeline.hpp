#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "brmgr/evaluation.hpp"
#include "brmgr/lm_scorer.hpp"
#include "brmgr/matching.hpp"
#include "brmgr/record.hpp"
#include "brmgr/remote_scorer.hpp"
#include "brmgr/scoring.hpp"

namespace brmgr {

enum class Mode {
  RetriOrigin,
  RetriRerank,
  GenOrigin,
  GenRerank,
  OriginCombi,
  BRMGR,
  AblationQGen,
};

std::string_view to_string(Mode mode);
/// Accepts the kebab-case CLI names ("retri-origin", "brmgr", ...).
Mode parse_mode(std::string_view name);
bool uses_retrieved(Mode mode);
bool uses_generated(Mode mode);
bool uses_scorer(Mode mode);

enum class ScorerKind { Mock, Remote };

struct PipelineConfig {
  Mode mode = Mode::BRMGR;
  ScorerKind scorer = ScorerKind::Mock;
  RemoteScorerConfig remote;
  int m_generated = 10;
  int n_retrieved = 10;
  std::vector<int> k_values{1, 3, 5, 10};
  FlattenPolicy flatten_policy = FlattenPolicy::RetrievedFirst;
  PromptTemplate prompt;
  int max_in_flight = 4;
  int workers = 1;
  bool skip_errors = false;

  /// Throws InvalidArgument on any out-of-range field.
  void validate() const;
};

/// Reads one JSON object per line (blank lines ignored), validates each, and
/// keeps the first n_retrieved / m_generated passages by origin_rank.
/// Throws ParseError with the 1-based line number, or a validation error
/// with the record id.
std::vector<QuestionRecord> ingest_corpus(const std::filesystem::path& path,
                                          const PipelineConfig& config);
std::vector<QuestionRecord> ingest_corpus(std::istream& in, const PipelineConfig& config);

/// One entry of a fused/ranked output list. `score` is absent for modes that
/// do not score passages.
struct RankedPassage {
  Passage passage;
  std::optional<double> score;
};

struct QuestionResult {
  std::string question_id;
  std::vector<RankedPassage> passages;
};

struct PipelineResult {
  Mode mode = Mode::BRMGR;
  std::vector<QuestionResult> questions;  // input order; skipped ones omitted
  EvalReport report;
};

/// Ranks one question's passages according to `config.mode`.
QuestionResult rank_question(const QuestionRecord& record, const PipelineConfig& config,
                             const LmScorer* scorer);

/// Runs the mode over the corpus with `config.workers` parallel questions,
/// then evaluates top-K exact match. Fails on the first (lowest-index)
/// question error unless skip_errors is set.
PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::vector<QuestionRecord>& corpus, const LmScorer* scorer);

/// Writes ranked.jsonl, report.json, and report.txt into `out_dir`.
void emit_outputs(const PipelineResult& result, const std::filesystem::path& out_dir);

inline constexpr std::string_view kRankedFile = "ranked.jsonl";
inline constexpr std::string_view kReportJsonFile = "report.json";
inline constexpr std::string_view kReportTextFile = "report.txt";
inline constexpr std::string_view kScoreCacheFile = "score_cache.jsonl";

/// Rebuilds per-question ordered passages from a ranked.jsonl dump by joining
/// passage ids against the corpus. Throws ParseError / MisalignedInputs.
std::vector<std::vector<Passage>> load_ranked_dump(std::istream& in,
                                                   const std::vector<QuestionRecord>& corpus);

}  // namespace brmgr
