#include "brmgr/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "brmgr/error.hpp"

namespace brmgr {

void PromptTemplate::validate() const {
  if (verbalizer.empty()) throw Error(ErrorCode::InvalidArgument, "verbalizer must be non-empty");
}

std::string build_query_generation_prompt(const Passage& passage, const PromptTemplate& tmpl) {
  std::string out = tmpl.passage_prefix;
  if (passage.title) {
    out += *passage.title;
    out += ' ';
  }
  out += passage.text;
  out += tmpl.separator;
  out += tmpl.verbalizer;
  return out;
}

std::string build_passage_generation_context(const Query& query) {
  return "question: " + query.text + "\npassage:";
}

ScoreRequest make_score_request(ScoreKind kind, const Query& query, const Passage& passage,
                                const PromptTemplate& tmpl) {
  switch (kind) {
    case ScoreKind::PassageGivenQuery:
      return {build_passage_generation_context(query), passage.text};
    case ScoreKind::QueryGivenPassage:
    case ScoreKind::QuestionGivenGenerated:
      break;
  }
  return {build_query_generation_prompt(passage, tmpl), query.text};
}

double score_query_given_passage(const Query& query, const Passage& passage,
                                 const LmScorer& scorer, const PromptTemplate& tmpl) {
  return scorer
      .score_continuation(make_score_request(ScoreKind::QueryGivenPassage, query, passage, tmpl))
      .mean();
}

double score_passage_given_query(const Query& query, const Passage& passage,
                                 const LmScorer& scorer) {
  return scorer
      .score_continuation(make_score_request(ScoreKind::PassageGivenQuery, query, passage, {}))
      .mean();
}

double score_question_given_generated(const Query& query, const Passage& passage,
                                      const LmScorer& scorer, const PromptTemplate& tmpl) {
  return scorer
      .score_continuation(
          make_score_request(ScoreKind::QuestionGivenGenerated, query, passage, tmpl))
      .mean();
}

std::vector<double> score_passages(ScoreKind kind, const Query& query,
                                   std::span<const Passage> passages, const LmScorer& scorer,
                                   const PromptTemplate& tmpl, int max_in_flight) {
  std::vector<ScoreRequest> requests;
  requests.reserve(passages.size());
  for (const auto& p : passages) requests.push_back(make_score_request(kind, query, p, tmpl));
  const auto results = score_batch(scorer, requests, max_in_flight);
  std::vector<double> scores;
  scores.reserve(results.size());
  for (const auto& r : results) scores.push_back(r.mean());
  return scores;
}

std::vector<ScoredPassage> rerank(std::span<const Passage> passages,
                                  std::span<const double> scores) {
  if (passages.size() != scores.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(passages.size()) + " passages but " +
                                               std::to_string(scores.size()) + " scores");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) {
      throw Error(ErrorCode::NonFiniteScore, "score of passage '" + passages[i].id + "'");
    }
  }
  std::vector<std::size_t> order(passages.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (passages[a].origin_rank != passages[b].origin_rank) {
      return passages[a].origin_rank < passages[b].origin_rank;
    }
    return a < b;
  });
  std::vector<ScoredPassage> out;
  out.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    out.push_back({passages[order[r]], scores[order[r]], r});
  }
  return out;
}

RelevanceMatrix build_relevance_matrix(std::span<const double> gen_scores,
                                       std::span<const double> retr_scores) {
  if (gen_scores.empty() || retr_scores.empty()) {
    throw Error(ErrorCode::EmptyInput, "relevance matrix needs both passage lists non-empty");
  }
  for (double s : gen_scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteScore, "generated-side score");
  }
  for (double s : retr_scores) {
    if (!std::isfinite(s)) throw Error(ErrorCode::NonFiniteScore, "retrieved-side score");
  }
  const auto rows = static_cast<std::ptrdiff_t>(gen_scores.size());
  const std::size_t cols = retr_scores.size();
  ScoreGrid cells(gen_scores.size(), cols);
  std::span<double> out = cells.values();

#pragma omp parallel for schedule(static) if (gen_scores.size() * cols >= 16384)
  for (std::ptrdiff_t i = 0; i < rows; ++i) {
    const double b = gen_scores[i];
    double* row = out.data() + static_cast<std::size_t>(i) * cols;
    for (std::size_t j = 0; j < cols; ++j) row[j] = b + retr_scores[j];
  }
  return RelevanceMatrix({gen_scores.begin(), gen_scores.end()},
                         {retr_scores.begin(), retr_scores.end()}, std::move(cells));
}

RelevanceMatrix build_relevance_matrix(std::span<const ScoredPassage> gen_scored,
                                       std::span<const ScoredPassage> retr_scored) {
  std::vector<double> gen;
  gen.reserve(gen_scored.size());
  for (const auto& sp : gen_scored) gen.push_back(sp.score);
  std::vector<double> retr;
  retr.reserve(retr_scored.size());
  for (const auto& sp : retr_scored) retr.push_back(sp.score);
  return build_relevance_matrix(std::span<const double>(gen), std::span<const double>(retr));
}

}  // namespace brmgr
