#pragma once

#include <filesystem>
#include <map>
#include <mutex>

#include "brmgr/lm_scorer.hpp"

namespace brmgr {

/// Memoizes another scorer keyed by (context, continuation). The cache can
/// be loaded from and saved to JSONL; saved entries are sorted by key so the
/// file is byte-identical regardless of scoring order.
class CachingScorer final : public LmScorer {
 public:
  explicit CachingScorer(const LmScorer& inner) : inner_(inner) {}

  /// Merges entries from `path` if it exists. Throws ParseError / Io.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  std::size_t size() const;
  std::size_t hits() const;

 protected:
  TokenLogProbs do_score(const ScoreRequest& request) const override;

 private:
  const LmScorer& inner_;
  mutable std::mutex mutex_;
  mutable std::map<ScoreRequest, TokenLogProbs> entries_;
  mutable std::size_t hits_ = 0;
};

}  // namespace brmgr
