#include "brmgr/record.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>

#include "brmgr/error.hpp"

namespace brmgr {
namespace {

using nlohmann::json;

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string where(const std::string& record_id, const std::string& field) {
  return "record '" + record_id + "' field '" + field + "'";
}

const json& require(const json& obj, const char* key, const std::string& record_id,
                    const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw Error(ErrorCode::MissingField, where(record_id, path + key));
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& record_id,
                           const std::string& path = "") {
  const json& v = require(obj, key, record_id, path);
  if (!v.is_string()) {
    throw Error(ErrorCode::MissingField, where(record_id, path + key) + " is not a string");
  }
  return v.get<std::string>();
}

std::vector<Passage> parse_passages(const json& raw, const char* key, Source source,
                                    const std::string& record_id) {
  const json& list = require(raw, key, record_id, "");
  if (!list.is_array()) {
    throw Error(ErrorCode::MissingField, where(record_id, key) + " is not an array");
  }
  std::vector<Passage> out;
  out.reserve(list.size());
  std::set<int> seen;
  for (std::size_t idx = 0; idx < list.size(); ++idx) {
    const json& item = list[idx];
    const std::string path = std::string(key) + "[" + std::to_string(idx) + "].";
    if (!item.is_object()) {
      throw Error(ErrorCode::MissingField, where(record_id, path) + " is not an object");
    }
    Passage p;
    p.source = source;
    p.id = require_string(item, "id", record_id, path);
    p.text = require_string(item, "text", record_id, path);
    if (is_blank(p.text)) throw Error(ErrorCode::EmptyText, where(record_id, path + "text"));
    if (auto t = item.find("title"); t != item.end() && !t->is_null()) {
      if (!t->is_string()) {
        throw Error(ErrorCode::MissingField, where(record_id, path + "title") + " is not a string");
      }
      if (!is_blank(t->get<std::string>())) p.title = t->get<std::string>();
    }
    p.origin_rank = static_cast<int>(idx);
    if (auto r = item.find("rank"); r != item.end() && !r->is_null()) {
      if (!r->is_number_integer() || r->get<long long>() < 0) {
        throw Error(ErrorCode::MissingField,
                    where(record_id, path + "rank") + " is not a non-negative integer");
      }
      p.origin_rank = r->get<int>();
    }
    if (!seen.insert(p.origin_rank).second) {
      throw Error(ErrorCode::DuplicateRank, where(record_id, path + "rank") + " repeats rank " +
                                                std::to_string(p.origin_rank));
    }
    out.push_back(std::move(p));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Passage& a, const Passage& b) { return a.origin_rank < b.origin_rank; });
  return out;
}

json passage_json(const Passage& p) {
  json j{{"id", p.id}, {"text", p.text}, {"rank", p.origin_rank}};
  if (p.title) j["title"] = *p.title;
  return j;
}

}  // namespace

QuestionRecord validate_question_record(const json& raw) {
  if (!raw.is_object()) throw Error(ErrorCode::MissingField, "record is not a JSON object");
  std::string record_id = "?";
  if (auto it = raw.find("question_id"); it != raw.end() && it->is_string()) {
    record_id = it->get<std::string>();
  }

  QuestionRecord rec;
  rec.query.id = require_string(raw, "question_id", record_id);
  rec.query.text = require_string(raw, "question", record_id);
  if (is_blank(rec.query.text)) throw Error(ErrorCode::EmptyText, where(record_id, "question"));

  const json& answers = require(raw, "answers", record_id, "");
  if (!answers.is_array() || answers.empty()) {
    throw Error(ErrorCode::MissingField, where(record_id, "answers") + " is empty");
  }
  bool any_answer = false;
  for (const json& a : answers) {
    if (!a.is_string()) {
      throw Error(ErrorCode::MissingField, where(record_id, "answers") + " holds a non-string");
    }
    rec.query.answers.push_back(a.get<std::string>());
    any_answer = any_answer || !is_blank(rec.query.answers.back());
  }
  if (!any_answer) throw Error(ErrorCode::EmptyText, where(record_id, "answers"));

  rec.retrieved = parse_passages(raw, "retrieved", Source::Retrieved, record_id);
  rec.generated = parse_passages(raw, "generated", Source::Generated, record_id);
  return rec;
}

json to_json(const QuestionRecord& record) {
  json retrieved = json::array();
  for (const auto& p : record.retrieved) retrieved.push_back(passage_json(p));
  json generated = json::array();
  for (const auto& p : record.generated) generated.push_back(passage_json(p));
  return json{{"question_id", record.query.id},
              {"question", record.query.text},
              {"answers", record.query.answers},
              {"retrieved", std::move(retrieved)},
              {"generated", std::move(generated)}};
}

}  // namespace brmgr
