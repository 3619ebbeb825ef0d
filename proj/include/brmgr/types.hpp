#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace brmgr {

enum class Source { Retrieved, Generated };

std::string_view to_string(Source source);

/// A question with its human-annotated answer aliases. Answers are stored
/// raw; normalization is done by the evaluation module only.
struct Query {
  std::string id;
  std::string text;
  std::vector<std::string> answers;

  bool operator==(const Query&) const = default;
};

struct Passage {
  std::string id;
  Source source = Source::Retrieved;
  std::optional<std::string> title;
  std::string text;
  int origin_rank = 0;  // position in the incoming list for its source

  bool operator==(const Passage&) const = default;
};

/// A passage with its mean per-token log-likelihood (nats).
struct ScoredPassage {
  Passage passage;
  double score = 0.0;
  std::size_t rank = 0;

  bool operator==(const ScoredPassage&) const = default;
};

struct MatchedPair {
  std::size_t gen_index = 0;
  std::size_t retr_index = 0;
  double combined_score = 0.0;

  bool operator==(const MatchedPair&) const = default;
};

/// Dense row-major matrix of finite scores. Rows index generated passages,
/// columns index retrieved passages.
class ScoreGrid {
 public:
  ScoreGrid() = default;
  ScoreGrid(std::size_t rows, std::size_t cols, std::vector<double> values);
  ScoreGrid(std::size_t rows, std::size_t cols, double fill = 0.0);
  static ScoreGrid from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Throws EmptyInput for a 0-sized grid and NonFiniteScore for NaN/inf cells.
  void validate() const;

  bool operator==(const ScoreGrid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

class RelevanceMatrix;

/// Parallel kernel; defined in scoring.cpp.
RelevanceMatrix build_relevance_matrix(std::span<const double> gen_scores,
                                       std::span<const double> retr_scores);

namespace reference {
/// Serial reference kernel; defined in reference.cpp.
RelevanceMatrix build_relevance_matrix(std::span<const double> gen_scores,
                                       std::span<const double> retr_scores);
}  // namespace reference

/// Log-space combination scores: cells(i, j) = gen_scores[i] + retr_scores[j].
/// Only constructible through build_relevance_matrix (or the reference kernel),
/// so the additive invariant holds by construction.
class RelevanceMatrix {
 public:
  const std::vector<double>& gen_scores() const noexcept { return gen_scores_; }
  const std::vector<double>& retr_scores() const noexcept { return retr_scores_; }
  const ScoreGrid& cells() const noexcept { return cells_; }
  std::size_t rows() const noexcept { return cells_.rows(); }
  std::size_t cols() const noexcept { return cells_.cols(); }

 private:
  RelevanceMatrix(std::vector<double> gen, std::vector<double> retr, ScoreGrid cells)
      : gen_scores_(std::move(gen)), retr_scores_(std::move(retr)), cells_(std::move(cells)) {}

  friend RelevanceMatrix build_relevance_matrix(std::span<const double>, std::span<const double>);
  friend RelevanceMatrix reference::build_relevance_matrix(std::span<const double>,
                                                           std::span<const double>);

  std::vector<double> gen_scores_;
  std::vector<double> retr_scores_;
  ScoreGrid cells_;
};

}  // namespace brmgr
