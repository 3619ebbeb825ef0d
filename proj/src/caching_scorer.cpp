#include "brmgr/caching_scorer.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "brmgr/error.hpp"

namespace brmgr {

void CachingScorer::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::string line;
  std::size_t line_no = 0;
  std::lock_guard lock(mutex_);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScoreRequest key{j.at("context").get<std::string>(), j.at("continuation").get<std::string>()};
      TokenLogProbs value;
      if (auto lp = j.find("logprobs"); lp != j.end()) {
        value = TokenLogProbs::from_per_token(lp->get<std::vector<double>>());
      } else {
        value.token_count = j.at("token_count").get<std::size_t>();
        value.logprob_sum = j.at("logprob_sum").get<double>();
        if (value.token_count == 0) throw Error(ErrorCode::ParseError, "zero token_count");
      }
      entries_.insert_or_assign(std::move(key), std::move(value));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError,
                  path.string() + " line " + std::to_string(line_no) + ": " + e.detail());
    }
  }
}

void CachingScorer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  std::lock_guard lock(mutex_);
  for (const auto& [key, value] : entries_) {
    nlohmann::json j{{"context", key.context},
                     {"continuation", key.continuation},
                     {"token_count", value.token_count},
                     {"logprob_sum", value.logprob_sum}};
    if (value.per_token) j["logprobs"] = *value.per_token;
    out << j.dump() << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

std::size_t CachingScorer::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::size_t CachingScorer::hits() const {
  std::lock_guard lock(mutex_);
  return hits_;
}

TokenLogProbs CachingScorer::do_score(const ScoreRequest& request) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(request); it != entries_.end()) {
      ++hits_;
      return it->second;
    }
  }
  auto value = inner_.score_continuation(request);
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(request, std::move(value)).first->second;
}

}  // namespace brmgr
