#pragma once

#include <span>
#include <string>
#include <vector>

#include "brmgr/lm_scorer.hpp"
#include "brmgr/types.hpp"

namespace brmgr {

/// Layout of the question-generation prompt built around a passage:
///   passage_prefix + [title + " "] + text + separator + verbalizer
struct PromptTemplate {
  std::string passage_prefix = "passage: ";
  std::string verbalizer = "Please write a question based on this passage";
  std::string separator = "\n";

  /// Throws InvalidArgument when the verbalizer is empty.
  void validate() const;
};

std::string build_query_generation_prompt(const Passage& passage, const PromptTemplate& tmpl);

/// Conditioning text for scoring a generated passage given the question:
///   "question: " + query.text + "\npassage:"
std::string build_passage_generation_context(const Query& query);

/// Which relevance score a passage list is ranked by.
enum class ScoreKind {
  QueryGivenPassage,      // mean log p(q | rp), retrieved side
  PassageGivenQuery,      // mean log p(lp | q), generated side
  QuestionGivenGenerated  // mean log p(q | lp), ablation
};

ScoreRequest make_score_request(ScoreKind kind, const Query& query, const Passage& passage,
                                const PromptTemplate& tmpl);

/// Mean log-likelihood of the query tokens given the passage prompt.
double score_query_given_passage(const Query& query, const Passage& passage,
                                 const LmScorer& scorer, const PromptTemplate& tmpl = {});

/// Mean log-likelihood of the passage tokens given the question.
double score_passage_given_query(const Query& query, const Passage& passage,
                                 const LmScorer& scorer);

/// Same formula as score_query_given_passage, applied to a generated passage.
double score_question_given_generated(const Query& query, const Passage& passage,
                                      const LmScorer& scorer, const PromptTemplate& tmpl = {});

/// Scores every passage with `kind` through score_batch.
std::vector<double> score_passages(ScoreKind kind, const Query& query,
                                   std::span<const Passage> passages, const LmScorer& scorer,
                                   const PromptTemplate& tmpl, int max_in_flight);

/// Sorts by descending score, ties by ascending origin_rank, and assigns
/// rank 0..n-1. Throws LengthMismatch / NonFiniteScore.
std::vector<ScoredPassage> rerank(std::span<const Passage> passages,
                                  std::span<const double> scores);

/// Builds the M x N matrix from the scored generated (rows) and retrieved
/// (columns) lists, in the order given. Throws EmptyInput / NonFiniteScore.
RelevanceMatrix build_relevance_matrix(std::span<const ScoredPassage> gen_scored,
                                       std::span<const ScoredPassage> retr_scored);

}  // namespace brmgr
