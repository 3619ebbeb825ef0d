#include "brmgr/mock_scorer.hpp"

#include <cctype>
#include <unordered_set>

#include "brmgr/error.hpp"

namespace brmgr {

std::vector<std::string> MockScorer::tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::size_t b = i;
    std::size_t e = j;
    while (b < e && std::ispunct(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) {
      std::string word(text.substr(b, e - b));
      for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(word));
    }
    i = j;
  }
  return out;
}

std::uint64_t MockScorer::fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double MockScorer::jitter(std::string_view word, std::size_t position) {
  std::string key(word);
  key.push_back('\x1f');
  key += std::to_string(position);
  const std::uint64_t bucket = fnv1a64(key) & 0xFFFFFULL;
  return -kJitterScale * static_cast<double>(bucket) / static_cast<double>(0xFFFFFULL);
}

TokenLogProbs MockScorer::do_score(const ScoreRequest& request) const {
  const auto context_words = tokenize(request.context);
  const std::unordered_set<std::string> context(context_words.begin(), context_words.end());
  const auto words = tokenize(request.continuation);
  if (words.empty()) {
    throw Error(ErrorCode::EmptyContinuationAfterTokenization,
                "continuation '" + request.continuation + "' has no word tokens");
  }
  std::vector<double> per_token;
  per_token.reserve(words.size());
  for (std::size_t p = 0; p < words.size(); ++p) {
    const double base = context.contains(words[p]) ? kSharedLogProb : kUnsharedLogProb;
    per_token.push_back(base + jitter(words[p], p));
  }
  return TokenLogProbs::from_per_token(std::move(per_token));
}

}  // namespace brmgr
