#include "brmgr/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "brmgr/error.hpp"

namespace brmgr {
namespace {

std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<std::string> normalized_tokens(std::string_view text) {
  std::string cleaned;
  cleaned.reserve(text.size());
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::ispunct(uc)) continue;
    cleaned.push_back(static_cast<char>(std::tolower(uc)));
  }
  auto words = split_words(cleaned);
  std::erase_if(words, [](const std::string& w) { return w == "a" || w == "an" || w == "the"; });
  return words;
}

bool contains_run(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

void check_aligned(std::size_t ranked, std::size_t queries) {
  if (ranked != queries) {
    throw Error(ErrorCode::MisalignedInputs, std::to_string(ranked) + " ranked lists for " +
                                                 std::to_string(queries) + " questions");
  }
}

bool question_hit(const std::vector<Passage>& ranked, const Query& query, int k) {
  const std::size_t depth = std::min(ranked.size(), static_cast<std::size_t>(k));
  for (std::size_t r = 0; r < depth; ++r) {
    if (passage_contains_answer(ranked[r], query.answers)) return true;
  }
  return false;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  const auto words = normalized_tokens(text);
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

bool passage_contains_answer(const Passage& passage, std::span<const std::string> answers) {
  const auto tokens = normalized_tokens(passage.text);
  return std::any_of(answers.begin(), answers.end(), [&](const std::string& answer) {
    return contains_run(tokens, normalized_tokens(answer));
  });
}

std::vector<bool> top_k_hits(std::span<const std::vector<Passage>> ranked,
                             std::span<const Query> queries, int k) {
  check_aligned(ranked.size(), queries.size());
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
  std::vector<char> hits(queries.size(), 0);

#pragma omp parallel for schedule(dynamic, 8) if (n >= 256)
  for (std::ptrdiff_t q = 0; q < n; ++q) hits[q] = question_hit(ranked[q], queries[q], k) ? 1 : 0;

  return {hits.begin(), hits.end()};
}

double top_k_exact_match(std::span<const std::vector<Passage>> ranked,
                         std::span<const Query> queries, int k) {
  const auto hits = top_k_hits(ranked, queries, k);
  if (hits.empty()) throw Error(ErrorCode::InvalidArgument, "no questions to evaluate");
  const auto count = std::count(hits.begin(), hits.end(), true);
  return static_cast<double>(count) / static_cast<double>(hits.size());
}

EvalReport evaluate(std::span<const std::vector<Passage>> ranked, std::span<const Query> queries,
                    std::span<const int> k_values) {
  check_aligned(ranked.size(), queries.size());
  if (queries.empty()) throw Error(ErrorCode::InvalidArgument, "no questions to evaluate");
  if (k_values.empty()) throw Error(ErrorCode::InvalidArgument, "no K values");
  EvalReport report;
  report.k_values.assign(k_values.begin(), k_values.end());
  report.question_count = queries.size();
  report.hits.assign(queries.size(), std::vector<bool>(k_values.size(), false));
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    const auto hits = top_k_hits(ranked, queries, k_values[ki]);
    std::size_t count = 0;
    for (std::size_t q = 0; q < hits.size(); ++q) {
      report.hits[q][ki] = hits[q];
      count += hits[q] ? 1 : 0;
    }
    report.em_at_k.push_back(static_cast<double>(count) / static_cast<double>(queries.size()));
  }
  return report;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j{{"k", k_values}, {"em", em_at_k}, {"n_questions", question_count}};
  if (skip_errors) j["n_skipped"] = skipped;
  return j;
}

std::string EvalReport::to_table(std::string_view label) const {
  const std::size_t label_width = std::max<std::size_t>(label.size(), 7) + 2;
  std::ostringstream out;
  std::string header = "Methods";
  header.resize(label_width, ' ');
  out << header;
  for (int k : k_values) {
    char cell[32];
    std::snprintf(cell, sizeof cell, "%9s", ("Top-" + std::to_string(k)).c_str());
    out << cell;
  }
  out << '\n';
  std::string name(label);
  name.resize(label_width, ' ');
  out << name;
  for (double em : em_at_k) {
    char cell[32];
    std::snprintf(cell, sizeof cell, "%9.2f", em * 100.0);
    out << cell;
  }
  out << '\n';
  out << "questions: " << question_count << '\n';
  if (skip_errors) out << "SKIPPED (errors): " << skipped << '\n';
  return out.str();
}

}  // namespace brmgr
