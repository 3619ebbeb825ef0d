#include "brmgr/run.hpp"

#include <memory>

#include "brmgr/caching_scorer.hpp"
#include "brmgr/mock_scorer.hpp"
#include "brmgr/remote_scorer.hpp"

namespace brmgr {

PipelineResult run_to_directory(const PipelineConfig& config,
                                const std::filesystem::path& corpus_path,
                                const std::filesystem::path& out_dir) {
  config.validate();
  std::unique_ptr<LmScorer> backend;
  if (config.scorer == ScorerKind::Remote) {
    backend = std::make_unique<RemoteScorer>(config.remote);
  } else {
    backend = std::make_unique<MockScorer>();
  }
  CachingScorer cache(*backend);
  const auto cache_path = out_dir / kScoreCacheFile;
  cache.load(cache_path);

  const auto corpus = ingest_corpus(corpus_path, config);
  auto result = run_pipeline(config, corpus, &cache);
  emit_outputs(result, out_dir);
  cache.save(cache_path);
  return result;
}

}  // namespace brmgr
