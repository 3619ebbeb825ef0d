#pragma once

#include <nlohmann/json.hpp>
#include <vector>

#include "brmgr/types.hpp"

namespace brmgr {

/// One ingested question with its two candidate passage lists, each sorted
/// by origin_rank.
struct QuestionRecord {
  Query query;
  std::vector<Passage> retrieved;
  std::vector<Passage> generated;

  bool operator==(const QuestionRecord&) const = default;
};

/// Validates one raw JSONL object:
///   {"question_id": str, "question": str, "answers": [str],
///    "retrieved": [{"id": str, "title": str?, "text": str, "rank": int?}],
///    "generated": [{"id": str, "title": str?, "text": str, "rank": int?}]}
/// origin_rank is the array position unless "rank" is given.
/// Throws Error{MissingField|EmptyText|DuplicateRank} naming record and field.
QuestionRecord validate_question_record(const nlohmann::json& raw);

/// Inverse of validate_question_record; always writes explicit ranks.
nlohmann::json to_json(const QuestionRecord& record);

}  // namespace brmgr
