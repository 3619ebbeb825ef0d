#include "brmgr/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <exception>
#include <fstream>
#include <map>
#include <utility>

#include <nlohmann/json.hpp>

#include "brmgr/error.hpp"

namespace brmgr {
namespace {

struct ModeName {
  Mode mode;
  std::string_view cli;
  std::string_view label;
};

constexpr std::array<ModeName, 7> kModes{{
    {Mode::RetriOrigin, "retri-origin", "Retri-Origin"},
    {Mode::RetriRerank, "retri-rerank", "Retri-Rerank"},
    {Mode::GenOrigin, "gen-origin", "Gen-Origin"},
    {Mode::GenRerank, "gen-rerank", "Gen-Rerank"},
    {Mode::OriginCombi, "origin-combi", "Origin-Combi"},
    {Mode::BRMGR, "brmgr", "BRMGR"},
    {Mode::AblationQGen, "ablation-qgen", "Ablation-QGen"},
}};

std::vector<RankedPassage> unscored(std::span<const Passage> passages) {
  std::vector<RankedPassage> out;
  out.reserve(passages.size());
  for (const auto& p : passages) out.push_back({p, std::nullopt});
  return out;
}

std::vector<RankedPassage> scored(std::span<const ScoredPassage> passages) {
  std::vector<RankedPassage> out;
  out.reserve(passages.size());
  for (const auto& sp : passages) out.push_back({sp.passage, sp.score});
  return out;
}

std::span<const Passage> head(const std::vector<Passage>& list, int n) {
  return std::span<const Passage>(list).first(std::min(list.size(), static_cast<std::size_t>(n)));
}

const LmScorer& need_scorer(const LmScorer* scorer, Mode mode) {
  if (scorer == nullptr) {
    throw Error(ErrorCode::InvalidArgument,
                "mode " + std::string(to_string(mode)) + " requires a scorer");
  }
  return *scorer;
}

std::vector<ScoredPassage> score_and_rerank(ScoreKind kind, const Query& query,
                                            std::span<const Passage> passages,
                                            const LmScorer& scorer, const PipelineConfig& config) {
  const auto scores =
      score_passages(kind, query, passages, scorer, config.prompt, config.max_in_flight);
  return rerank(passages, scores);
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& m : kModes) {
    if (m.mode == mode) return m.label;
  }
  return "?";
}

Mode parse_mode(std::string_view name) {
  const std::string key = lower(name);
  for (const auto& m : kModes) {
    if (key == m.cli || key == lower(m.label)) return m.mode;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown mode '" + std::string(name) + "'");
}

bool uses_retrieved(Mode mode) {
  return mode != Mode::GenOrigin && mode != Mode::GenRerank && mode != Mode::AblationQGen;
}

bool uses_generated(Mode mode) {
  return mode != Mode::RetriOrigin && mode != Mode::RetriRerank;
}

bool uses_scorer(Mode mode) {
  return mode != Mode::RetriOrigin && mode != Mode::GenOrigin && mode != Mode::OriginCombi;
}

void PipelineConfig::validate() const {
  if (uses_generated(mode) && m_generated < 1) {
    throw Error(ErrorCode::InvalidArgument, "m_generated must be >= 1");
  }
  if (uses_retrieved(mode) && n_retrieved < 1) {
    throw Error(ErrorCode::InvalidArgument, "n_retrieved must be >= 1");
  }
  if (k_values.empty()) throw Error(ErrorCode::InvalidArgument, "k_values is empty");
  for (int k : k_values) {
    if (k < 1) throw Error(ErrorCode::InvalidArgument, "K values must be >= 1");
  }
  if (max_in_flight < 1) throw Error(ErrorCode::InvalidArgument, "max_in_flight must be >= 1");
  if (workers < 1) throw Error(ErrorCode::InvalidArgument, "workers must be >= 1");
  prompt.validate();
}

std::vector<QuestionRecord> ingest_corpus(std::istream& in, const PipelineConfig& config) {
  std::vector<QuestionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(),
                    [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    nlohmann::json raw;
    try {
      raw = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    QuestionRecord rec;
    try {
      rec = validate_question_record(raw);
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.detail());
    }
    if (rec.retrieved.size() > static_cast<std::size_t>(std::max(config.n_retrieved, 0))) {
      rec.retrieved.resize(static_cast<std::size_t>(std::max(config.n_retrieved, 0)));
    }
    if (rec.generated.size() > static_cast<std::size_t>(std::max(config.m_generated, 0))) {
      rec.generated.resize(static_cast<std::size_t>(std::max(config.m_generated, 0)));
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<QuestionRecord> ingest_corpus(const std::filesystem::path& path,
                                          const PipelineConfig& config) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read corpus " + path.string());
  return ingest_corpus(in, config);
}

QuestionResult rank_question(const QuestionRecord& record, const PipelineConfig& config,
                             const LmScorer* scorer) {
  const auto retrieved = head(record.retrieved, config.n_retrieved);
  const auto generated = head(record.generated, config.m_generated);
  const Query& query = record.query;

  QuestionResult result;
  result.question_id = query.id;
  switch (config.mode) {
    case Mode::RetriOrigin:
      result.passages = unscored(retrieved);
      break;
    case Mode::GenOrigin:
      result.passages = unscored(generated);
      break;
    case Mode::RetriRerank:
      result.passages = scored(score_and_rerank(ScoreKind::QueryGivenPassage, query, retrieved,
                                                need_scorer(scorer, config.mode), config));
      break;
    case Mode::GenRerank:
      result.passages = scored(score_and_rerank(ScoreKind::PassageGivenQuery, query, generated,
                                                need_scorer(scorer, config.mode), config));
      break;
    case Mode::AblationQGen:
      result.passages = scored(score_and_rerank(ScoreKind::QuestionGivenGenerated, query,
                                                generated, need_scorer(scorer, config.mode),
                                                config));
      break;
    case Mode::OriginCombi: {
      const std::size_t n = std::max(retrieved.size(), generated.size());
      for (std::size_t r = 0; r < n; ++r) {
        if (r < retrieved.size()) result.passages.push_back({retrieved[r], std::nullopt});
        if (r < generated.size()) result.passages.push_back({generated[r], std::nullopt});
      }
      break;
    }
    case Mode::BRMGR: {
      const LmScorer& s = need_scorer(scorer, config.mode);
      const auto gen = score_and_rerank(ScoreKind::PassageGivenQuery, query, generated, s, config);
      const auto retr = score_and_rerank(ScoreKind::QueryGivenPassage, query, retrieved, s, config);
      const auto matrix = build_relevance_matrix(std::span<const ScoredPassage>(gen),
                                                 std::span<const ScoredPassage>(retr));
      const auto pairs = greedy_match(matrix);
      result.passages = scored(flatten_pairs(pairs, gen, retr, config.flatten_policy));
      break;
    }
  }
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config,
                            const std::vector<QuestionRecord>& corpus, const LmScorer* scorer) {
  config.validate();
  if (uses_scorer(config.mode)) need_scorer(scorer, config.mode);

  const auto n = static_cast<std::ptrdiff_t>(corpus.size());
  std::vector<QuestionResult> results(corpus.size());
  std::vector<std::exception_ptr> failures(corpus.size());

#pragma omp parallel for num_threads(config.workers) schedule(dynamic, 1) if (config.workers > 1)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    try {
      results[q] = rank_question(corpus[q], config, scorer);
    } catch (...) {
      failures[q] = std::current_exception();
    }
  }

  PipelineResult out;
  out.mode = config.mode;
  std::vector<Query> queries;
  std::vector<std::vector<Passage>> ranked;
  std::size_t skipped = 0;
  for (std::size_t q = 0; q < corpus.size(); ++q) {
    if (failures[q]) {
      if (config.skip_errors) {
        ++skipped;
        continue;
      }
      try {
        std::rethrow_exception(failures[q]);
      } catch (const Error& e) {
        throw Error(e.code(), "question '" + corpus[q].query.id + "': " + e.detail());
      }
    }
    queries.push_back(corpus[q].query);
    std::vector<Passage> list;
    list.reserve(results[q].passages.size());
    for (const auto& rp : results[q].passages) list.push_back(rp.passage);
    ranked.push_back(std::move(list));
    out.questions.push_back(std::move(results[q]));
  }
  if (queries.empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "no questions to evaluate (" + std::to_string(skipped) + " skipped)");
  }
  out.report = evaluate(ranked, queries, config.k_values);
  out.report.skip_errors = config.skip_errors;
  out.report.skipped = skipped;
  return out;
}

void emit_outputs(const PipelineResult& result, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  auto open = [](const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    return f;
  };
  auto finish = [](std::ofstream& f, const std::filesystem::path& path) {
    f.flush();
    if (!f) throw Error(ErrorCode::Io, "failed writing " + path.string());
  };

  const auto ranked_path = out_dir / kRankedFile;
  auto ranked = open(ranked_path);
  for (const auto& q : result.questions) {
    nlohmann::json passages = nlohmann::json::array();
    for (std::size_t r = 0; r < q.passages.size(); ++r) {
      const auto& rp = q.passages[r];
      passages.push_back({{"id", rp.passage.id},
                          {"source", to_string(rp.passage.source)},
                          {"score", rp.score ? nlohmann::json(*rp.score) : nlohmann::json()},
                          {"rank", r}});
    }
    ranked << nlohmann::json{{"question_id", q.question_id}, {"passages", std::move(passages)}}
                  .dump()
           << '\n';
  }
  finish(ranked, ranked_path);

  const auto json_path = out_dir / kReportJsonFile;
  auto report_json = open(json_path);
  report_json << result.report.to_json().dump(2) << '\n';
  finish(report_json, json_path);

  const auto text_path = out_dir / kReportTextFile;
  auto report_text = open(text_path);
  report_text << result.report.to_table(to_string(result.mode));
  finish(report_text, text_path);
}

std::vector<std::vector<Passage>> load_ranked_dump(std::istream& in,
                                                   const std::vector<QuestionRecord>& corpus) {
  std::map<std::string, std::vector<Passage>> by_question;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      const std::string qid = j.at("question_id").get<std::string>();
      auto& list = by_question[qid];
      list.clear();
      const auto rec = std::find_if(corpus.begin(), corpus.end(), [&](const QuestionRecord& r) {
        return r.query.id == qid;
      });
      if (rec == corpus.end()) {
        throw Error(ErrorCode::MisalignedInputs, "question '" + qid + "' not in corpus");
      }
      for (const auto& entry : j.at("passages")) {
        const auto id = entry.at("id").get<std::string>();
        const auto source = entry.at("source").get<std::string>();
        const auto& pool = source == "retrieved" ? rec->retrieved : rec->generated;
        const auto hit = std::find_if(pool.begin(), pool.end(),
                                      [&](const Passage& p) { return p.id == id; });
        if (hit == pool.end()) {
          throw Error(ErrorCode::MisalignedInputs,
                      "passage '" + id + "' (" + source + ") not in question '" + qid + "'");
        }
        list.push_back(*hit);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<std::vector<Passage>> out;
  out.reserve(corpus.size());
  for (const auto& rec : corpus) {
    auto it = by_question.find(rec.query.id);
    if (it == by_question.end()) {
      throw Error(ErrorCode::MisalignedInputs,
                  "question '" + rec.query.id + "' missing from ranked dump");
    }
    out.push_back(std::move(it->second));
  }
  return out;
}

}  // namespace brmgr
