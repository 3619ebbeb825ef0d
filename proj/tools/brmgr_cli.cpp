// Command-line driver: run | eval | match-check

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "brmgr/error.hpp"
#include "brmgr/match_check.hpp"
#include "brmgr/pipeline.hpp"
#include "brmgr/run.hpp"

namespace {

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw brmgr::Error(brmgr::ErrorCode::InvalidArgument, "bad K value '" + item + "'");
    }
  }
  return out;
}

void apply_template_file(const std::string& path, brmgr::PromptTemplate& tmpl) {
  std::ifstream in(path);
  if (!in) throw brmgr::Error(brmgr::ErrorCode::Io, "cannot read config " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw brmgr::Error(brmgr::ErrorCode::ParseError, path + ": " + e.what());
  }
  if (auto it = j.find("passage_prefix"); it != j.end()) tmpl.passage_prefix = it->get<std::string>();
  if (auto it = j.find("verbalizer"); it != j.end()) tmpl.verbalizer = it->get<std::string>();
  if (auto it = j.find("separator"); it != j.end()) tmpl.separator = it->get<std::string>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-reranking and greedy fusion of retrieved and generated passages"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Rank passages with a pipeline mode and evaluate");
  std::string mode = "brmgr";
  std::string corpus;
  std::string out_dir;
  std::string scorer = "mock";
  std::string endpoint;
  std::string k_list = "1,3,5,10";
  int m_generated = 10;
  int n_retrieved = 10;
  std::string policy = "retrieved-first";
  int workers = 1;
  int max_in_flight = 4;
  double timeout = 30.0;
  int retries = 3;
  bool skip_errors = false;
  std::string config_path;
  std::optional<std::string> passage_prefix, verbalizer, separator;

  run->add_option("--mode", mode,
                  "retri-origin | retri-rerank | gen-origin | gen-rerank | origin-combi | brmgr | "
                  "ablation-qgen")
      ->capture_default_str();
  run->add_option("--corpus", corpus, "Input JSONL corpus")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--scorer", scorer, "mock | remote")
      ->check(CLI::IsMember({"mock", "remote"}))
      ->capture_default_str();
  run->add_option("--endpoint", endpoint, "Remote scoring endpoint URL");
  run->add_option("--k", k_list, "Comma-separated K values")->capture_default_str();
  run->add_option("--m", m_generated, "Generated passages per question")->capture_default_str();
  run->add_option("--n", n_retrieved, "Retrieved passages per question")->capture_default_str();
  run->add_option("--policy", policy, "retrieved-first | generated-first")
      ->check(CLI::IsMember({"retrieved-first", "generated-first"}))
      ->capture_default_str();
  run->add_option("--workers", workers, "Questions processed in parallel")->capture_default_str();
  run->add_option("--max-in-flight", max_in_flight, "Concurrent scorer requests per question")
      ->capture_default_str();
  run->add_option("--timeout", timeout, "Remote timeout in seconds")->capture_default_str();
  run->add_option("--retries", retries, "Retries for unavailable backends")->capture_default_str();
  run->add_flag("--skip-errors", skip_errors, "Skip failing questions instead of aborting");
  run->add_option("--config", config_path, "JSON with passage_prefix / verbalizer / separator");
  run->add_option("--passage-prefix", passage_prefix, "Prompt passage prefix");
  run->add_option("--verbalizer", verbalizer, "Prompt verbalizer");
  run->add_option("--separator", separator, "Prompt separator");

  // eval
  auto* eval = app.add_subcommand("eval", "Top-K exact match of a ranked dump");
  std::string eval_corpus;
  std::string ranked_path;
  std::string eval_k = "1,3,5,10";
  std::string eval_out;
  std::string label = "Ranked";
  eval->add_option("--corpus", eval_corpus, "Corpus JSONL with answers and passage texts")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--ranked", ranked_path, "ranked.jsonl dump")->required()->check(CLI::ExistingFile);
  eval->add_option("--k", eval_k, "Comma-separated K values")->capture_default_str();
  eval->add_option("--out", eval_out, "Write the report JSON here");
  eval->add_option("--label", label, "Row label for the table")->capture_default_str();

  // match-check
  auto* check = app.add_subcommand("match-check", "Greedy/Hungarian equivalence property suite");
  brmgr::MatchCheckOptions check_options;
  check->add_option("--trials", check_options.trials)->capture_default_str();
  check->add_option("--max-n", check_options.max_n)->capture_default_str();
  check->add_option("--seed", check_options.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      brmgr::PipelineConfig config;
      config.mode = brmgr::parse_mode(mode);
      config.scorer = scorer == "remote" ? brmgr::ScorerKind::Remote : brmgr::ScorerKind::Mock;
      config.remote.endpoint = endpoint;
      config.remote.auth_token = brmgr::RemoteScorerConfig::token_from_env();
      config.remote.timeout_seconds = timeout;
      config.remote.retries = retries;
      if (config.scorer == brmgr::ScorerKind::Remote && endpoint.empty()) {
        throw brmgr::Error(brmgr::ErrorCode::InvalidArgument, "--scorer remote needs --endpoint");
      }
      config.k_values = parse_k_list(k_list);
      config.m_generated = m_generated;
      config.n_retrieved = n_retrieved;
      config.flatten_policy = policy == "generated-first" ? brmgr::FlattenPolicy::GeneratedFirst
                                                          : brmgr::FlattenPolicy::RetrievedFirst;
      config.workers = workers;
      config.max_in_flight = max_in_flight;
      config.skip_errors = skip_errors;
      if (!config_path.empty()) apply_template_file(config_path, config.prompt);
      if (passage_prefix) config.prompt.passage_prefix = *passage_prefix;
      if (verbalizer) config.prompt.verbalizer = *verbalizer;
      if (separator) config.prompt.separator = *separator;

      const auto result = brmgr::run_to_directory(config, corpus, out_dir);
      std::cout << result.report.to_table(brmgr::to_string(config.mode));
      return 0;
    }
    if (*eval) {
      brmgr::PipelineConfig full;
      full.m_generated = std::numeric_limits<int>::max();
      full.n_retrieved = std::numeric_limits<int>::max();
      const auto records = brmgr::ingest_corpus(eval_corpus, full);
      std::ifstream in(ranked_path);
      if (!in) throw brmgr::Error(brmgr::ErrorCode::Io, "cannot read " + ranked_path);
      const auto ranked = brmgr::load_ranked_dump(in, records);
      std::vector<brmgr::Query> queries;
      for (const auto& r : records) queries.push_back(r.query);
      const auto ks = parse_k_list(eval_k);
      const auto report = brmgr::evaluate(ranked, queries, ks);
      std::cout << report.to_table(label);
      if (!eval_out.empty()) {
        std::ofstream out(eval_out, std::ios::binary | std::ios::trunc);
        out << report.to_json().dump(2) << '\n';
        if (!out) throw brmgr::Error(brmgr::ErrorCode::Io, "cannot write " + eval_out);
      }
      return 0;
    }
    if (*check) {
      const auto outcomes = brmgr::run_match_check(check_options);
      bool all = true;
      for (const auto& o : outcomes) {
        std::cout << (o.passed ? "PASS " : "FAIL ") << o.name << " (" << o.detail << ")\n";
        all = all && o.passed;
      }
      return all ? 0 : 1;
    }
  } catch (const brmgr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return brmgr::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
