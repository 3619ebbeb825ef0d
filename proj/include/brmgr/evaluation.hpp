#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "brmgr/types.hpp"

namespace brmgr {

/// Lowercase, strip ASCII punctuation, drop the articles a/an/the, and
/// collapse whitespace to single spaces.
std::string normalize_answer(std::string_view text);

/// True iff some normalized answer is a contiguous token run of the
/// normalized passage text. Titles are ignored; an answer that normalizes to
/// nothing never matches.
bool passage_contains_answer(const Passage& passage, std::span<const std::string> answers);

/// Per-question hit flag: any of the first min(k, size) passages contains an answer.
std::vector<bool> top_k_hits(std::span<const std::vector<Passage>> ranked,
                             std::span<const Query> queries, int k);

/// Fraction of questions with a hit in the top k. Throws MisalignedInputs
/// when the lists differ in length, InvalidArgument for k < 1 or no questions.
double top_k_exact_match(std::span<const std::vector<Passage>> ranked,
                         std::span<const Query> queries, int k);

struct EvalReport {
  std::vector<int> k_values;
  std::vector<std::vector<bool>> hits;  // hits[q][ki]
  std::vector<double> em_at_k;
  std::size_t question_count = 0;
  std::size_t skipped = 0;
  bool skip_errors = false;

  /// {"k": [...], "em": [...], "n_questions": n} (+ "n_skipped" with --skip-errors)
  nlohmann::json to_json() const;
  /// Aligned table with one Top-K column per K, values in percent.
  std::string to_table(std::string_view label) const;
};

EvalReport evaluate(std::span<const std::vector<Passage>> ranked, std::span<const Query> queries,
                    std::span<const int> k_values);

}  // namespace brmgr
