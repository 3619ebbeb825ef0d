#include "brmgr/types.hpp"

#include <cmath>

#include "brmgr/error.hpp"

namespace brmgr {

std::string_view to_string(Source source) {
  return source == Source::Retrieved ? "retrieved" : "generated";
}

ScoreGrid::ScoreGrid(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw Error(ErrorCode::LengthMismatch,
                "grid of " + std::to_string(rows_) + "x" + std::to_string(cols_) + " given " +
                    std::to_string(values_.size()) + " values");
  }
}

ScoreGrid::ScoreGrid(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

ScoreGrid ScoreGrid::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = n_rows == 0 ? 0 : rows.front().size();
  std::vector<double> values;
  values.reserve(n_rows * n_cols);
  for (const auto& row : rows) {
    if (row.size() != n_cols) throw Error(ErrorCode::LengthMismatch, "ragged rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return ScoreGrid(n_rows, n_cols, std::move(values));
}

void ScoreGrid::validate() const {
  if (rows_ == 0 || cols_ == 0) throw Error(ErrorCode::EmptyInput, "score grid has no cells");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(ErrorCode::NonFiniteScore, "cell (" + std::to_string(k / cols_) + ", " +
                                                 std::to_string(k % cols_) + ") is not finite");
    }
  }
}

}  // namespace brmgr
