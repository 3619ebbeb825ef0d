#include "brmgr/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "brmgr/error.hpp"

namespace brmgr {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t i = kNone;
  std::size_t j = kNone;
};

// Larger value wins; equal values go to the lower (row, column).
bool better(const Candidate& a, const Candidate& b) {
  if (a.i == kNone) return false;
  if (b.i == kNone) return true;
  if (a.value != b.value) return a.value > b.value;
  return std::tie(a.i, a.j) < std::tie(b.i, b.j);
}

bool pair_before(const MatchedPair& a, const MatchedPair& b) {
  if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
  return std::tie(a.gen_index, a.retr_index) < std::tie(b.gen_index, b.retr_index);
}

// Lexicographic comparison of two canonically sorted pair lists.
bool list_less(const std::vector<MatchedPair>& a, const std::vector<MatchedPair>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const MatchedPair& x, const MatchedPair& y) {
                                        if (x.combined_score != y.combined_score) {
                                          return x.combined_score > y.combined_score;
                                        }
                                        return std::tie(x.gen_index, x.retr_index) <
                                               std::tie(y.gen_index, y.retr_index);
                                      });
}

double max_cell(const ScoreGrid& cells) {
  const auto v = cells.values();
  return *std::max_element(v.begin(), v.end());
}

MatchedPair make_pair(const ScoreGrid& cells, std::size_t i, std::size_t j) {
  return {i, j, cells.at(i, j)};
}

// Minimum-cost perfect assignment on a square cost matrix (potentials
// formulation, O(n^3)). Returns column assigned to each row.
std::vector<std::size_t> solve_min_cost(const std::vector<double>& cost, std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n, kNone);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

bool same_multiset(double a, double b, double c, double d) {
  return (a == c && b == d) || (a == d && b == c);
}

// Moves between exactly tied optima (identical selected-cell multisets) until
// no lexicographically smaller pair list is reachable by one exchange.
void canonicalize(const ScoreGrid& cells, std::vector<MatchedPair>& pairs) {
  sort_pairs(pairs);
  std::vector<char> row_used(cells.rows(), 0), col_used(cells.cols(), 0);
  for (const auto& p : pairs) {
    row_used[p.gen_index] = 1;
    col_used[p.retr_index] = 1;
  }

  auto try_apply = [&](std::vector<MatchedPair> candidate) {
    sort_pairs(candidate);
    if (!list_less(candidate, pairs)) return false;
    pairs = std::move(candidate);
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < pairs.size() && !changed; ++a) {
      for (std::size_t b = a + 1; b < pairs.size() && !changed; ++b) {
        const auto [i1, j1, s1] = pairs[a];
        const auto [i2, j2, s2] = pairs[b];
        if (!same_multiset(s1, s2, cells.at(i1, j2), cells.at(i2, j1))) continue;
        auto candidate = pairs;
        candidate[a] = make_pair(cells, i1, j2);
        candidate[b] = make_pair(cells, i2, j1);
        changed = try_apply(std::move(candidate));
      }
    }
    // Exchanges with an unmatched row or column (rectangular case).
    for (std::size_t a = 0; a < pairs.size() && !changed; ++a) {
      const auto [i, j, s] = pairs[a];
      for (std::size_t r = 0; r < cells.rows() && !changed; ++r) {
        if (row_used[r] || cells.at(r, j) != s) continue;
        auto candidate = pairs;
        candidate[a] = make_pair(cells, r, j);
        if (try_apply(std::move(candidate))) {
          row_used[i] = 0;
          row_used[r] = 1;
          changed = true;
        }
      }
      for (std::size_t c = 0; c < cells.cols() && !changed; ++c) {
        if (col_used[c] || cells.at(i, c) != s) continue;
        auto candidate = pairs;
        candidate[a] = make_pair(cells, i, c);
        if (try_apply(std::move(candidate))) {
          col_used[j] = 0;
          col_used[c] = 1;
          changed = true;
        }
      }
    }
  }
}

void check_pairs(std::span<const MatchedPair> pairs, std::size_t rows, std::size_t cols) {
  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  for (const auto& p : pairs) {
    if (p.gen_index >= rows || p.retr_index >= cols) {
      throw Error(ErrorCode::IndexOutOfRange, "pair (" + std::to_string(p.gen_index) + ", " +
                                                  std::to_string(p.retr_index) + ") outside " +
                                                  std::to_string(rows) + "x" +
                                                  std::to_string(cols));
    }
    if (row_used[p.gen_index] || col_used[p.retr_index]) {
      throw Error(ErrorCode::InvalidArgument, "pair (" + std::to_string(p.gen_index) + ", " +
                                                  std::to_string(p.retr_index) +
                                                  ") reuses an index");
    }
    row_used[p.gen_index] = 1;
    col_used[p.retr_index] = 1;
  }
}

}  // namespace

void sort_pairs(std::vector<MatchedPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(), pair_before);
}

double assignment_objective(const ScoreGrid& cells, std::span<const MatchedPair> pairs) {
  if (pairs.empty()) return 0.0;
  const double top = max_cell(cells);
  std::vector<double> weights;
  weights.reserve(pairs.size());
  for (const auto& p : pairs) weights.push_back(std::exp(cells.at(p.gen_index, p.retr_index) - top));
  std::sort(weights.begin(), weights.end());
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double assignment_log_sum(std::span<const MatchedPair> pairs) {
  std::vector<double> v;
  v.reserve(pairs.size());
  for (const auto& p : pairs) v.push_back(p.combined_score);
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::vector<MatchedPair> greedy_match(const ScoreGrid& cells) {
  cells.validate();
  const std::size_t rows = cells.rows();
  const std::size_t cols = cells.cols();
  const std::size_t k = std::min(rows, cols);
  const bool parallel = rows * cols >= 16384;
  std::vector<char> row_used(rows, 0), col_used(cols, 0);
  std::vector<MatchedPair> pairs;
  pairs.reserve(k);

  for (std::size_t step = 0; step < k; ++step) {
    Candidate best;
#pragma omp parallel if (parallel)
    {
      Candidate local;
#pragma omp for schedule(static) nowait
      for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(rows); ++si) {
        const auto i = static_cast<std::size_t>(si);
        if (row_used[i]) continue;
        for (std::size_t j = 0; j < cols; ++j) {
          if (col_used[j]) continue;
          const Candidate c{cells.at(i, j), i, j};
          if (better(c, local)) local = c;
        }
      }
#pragma omp critical(brmgr_greedy_merge)
      if (better(local, best)) best = local;
    }
    row_used[best.i] = 1;
    col_used[best.j] = 1;
    pairs.push_back({best.i, best.j, best.value});
  }
  return pairs;
}

std::vector<MatchedPair> greedy_match(const RelevanceMatrix& matrix) {
  return greedy_match(matrix.cells());
}

std::vector<MatchedPair> hungarian_match(const ScoreGrid& cells) {
  cells.validate();
  const std::size_t rows = cells.rows();
  const std::size_t cols = cells.cols();
  const std::size_t n = std::max(rows, cols);
  const auto v = cells.values();
  const double top = *std::max_element(v.begin(), v.end());
  const double pad = *std::min_element(v.begin(), v.end()) - 1e6;

  // Maximize sum exp(cell - top) by minimizing its negation.
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double cell = (i < rows && j < cols) ? cells.at(i, j) : pad;
      cost[i * n + j] = -std::exp(cell - top);
    }
  }
  const auto row_to_col = solve_min_cost(cost, n);

  std::vector<MatchedPair> pairs;
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = row_to_col[i];
    if (j < cols) pairs.push_back(make_pair(cells, i, j));
  }
  canonicalize(cells, pairs);
  return pairs;
}

std::vector<MatchedPair> hungarian_match(const RelevanceMatrix& matrix) {
  return hungarian_match(matrix.cells());
}

std::vector<MatchedPair> brute_force_match(const ScoreGrid& cells) {
  cells.validate();
  const std::size_t rows = cells.rows();
  const std::size_t cols = cells.cols();
  const std::size_t k = std::min(rows, cols);
  if (k > kBruteForceLimit) {
    throw Error(ErrorCode::TooLarge, "brute force limited to min(M, N) <= " +
                                         std::to_string(kBruteForceLimit) + ", got " +
                                         std::to_string(k));
  }
  // Injections from the smaller side into the larger one.
  const bool by_rows = rows <= cols;
  const std::size_t large = by_rows ? cols : rows;

  std::vector<MatchedPair> best;
  double best_value = -1.0;
  std::vector<std::size_t> chosen(k);
  std::vector<char> taken(large, 0);
  std::vector<MatchedPair> current;
  current.reserve(k);

  auto visit = [&](auto&& self, std::size_t depth) -> void {
    if (depth == k) {
      current.clear();
      for (std::size_t s = 0; s < k; ++s) {
        current.push_back(by_rows ? make_pair(cells, s, chosen[s]) : make_pair(cells, chosen[s], s));
      }
      const double value = assignment_objective(cells, current);
      sort_pairs(current);
      if (value > best_value || (value == best_value && list_less(current, best))) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (std::size_t t = 0; t < large; ++t) {
      if (taken[t]) continue;
      taken[t] = 1;
      chosen[depth] = t;
      self(self, depth + 1);
      taken[t] = 0;
    }
  };
  visit(visit, 0);
  return best;
}

std::vector<MatchedPair> brute_force_match(const RelevanceMatrix& matrix) {
  return brute_force_match(matrix.cells());
}

std::vector<ScoredPassage> flatten_pairs(std::span<const MatchedPair> pairs,
                                         std::span<const ScoredPassage> gen,
                                         std::span<const ScoredPassage> retr,
                                         FlattenPolicy policy) {
  check_pairs(pairs, gen.size(), retr.size());
  std::vector<MatchedPair> ordered(pairs.begin(), pairs.end());
  sort_pairs(ordered);

  std::vector<ScoredPassage> out;
  out.reserve(gen.size() + retr.size());
  std::vector<char> gen_used(gen.size(), 0), retr_used(retr.size(), 0);
  for (const auto& p : ordered) {
    gen_used[p.gen_index] = 1;
    retr_used[p.retr_index] = 1;
    if (policy == FlattenPolicy::RetrievedFirst) {
      out.push_back(retr[p.retr_index]);
      out.push_back(gen[p.gen_index]);
    } else {
      out.push_back(gen[p.gen_index]);
      out.push_back(retr[p.retr_index]);
    }
  }

  // Leftovers by descending score; ties favour the policy's first source,
  // then the original list position.
  struct Leftover {
    const ScoredPassage* passage;
    int source_order;
    std::size_t index;
  };
  std::vector<Leftover> leftovers;
  const int retr_order = policy == FlattenPolicy::RetrievedFirst ? 0 : 1;
  for (std::size_t j = 0; j < retr.size(); ++j) {
    if (!retr_used[j]) leftovers.push_back({&retr[j], retr_order, j});
  }
  for (std::size_t i = 0; i < gen.size(); ++i) {
    if (!gen_used[i]) leftovers.push_back({&gen[i], 1 - retr_order, i});
  }
  std::sort(leftovers.begin(), leftovers.end(), [](const Leftover& a, const Leftover& b) {
    if (a.passage->score != b.passage->score) return a.passage->score > b.passage->score;
    return std::tie(a.source_order, a.index) < std::tie(b.source_order, b.index);
  });
  for (const auto& l : leftovers) out.push_back(*l.passage);
  return out;
}

}  // namespace brmgr
