#pragma once

#include <filesystem>

#include "brmgr/pipeline.hpp"

namespace brmgr {

/// Full `run` command: builds the configured scorer behind a score cache
/// (out_dir/score_cache.jsonl, loaded if present), ingests the corpus, runs
/// the pipeline, and writes all outputs plus the updated cache.
PipelineResult run_to_directory(const PipelineConfig& config,
                                const std::filesystem::path& corpus_path,
                                const std::filesystem::path& out_dir);

}  // namespace brmgr
