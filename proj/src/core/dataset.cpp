// Copyright 2026 The TTH Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tth/core/dataset.hpp"

#include <set>

#include "tth/core/hint.hpp"
#include "tth/error.hpp"

namespace tth {

Json to_json(const QuestionRecord& record) {
  Json j = {
      {"id", record.id},
      {"image_ref", record.image_ref},
      {"question", record.question},
      {"options", record.options},
      {"gold_index", record.gold_index},
      {"dataset", std::string(to_string(record.dataset))},
  };
  j["rationale"] = record.rationale ? Json(*record.rationale) : Json(nullptr);
  return j;
}

QuestionRecord question_from_json(const Json& j) {
  QuestionRecord r;
  try {
    r.id = j.at("id").get<std::string>();
    r.image_ref = j.value("image_ref", std::string{});
    r.question = j.at("question").get<std::string>();
    r.options = j.at("options").get<std::vector<std::string>>();
    const auto& gold = j.at("gold_index");
    if (!gold.is_number_integer() || gold.get<long long>() < 0) {
      throw Error(ErrorCode::InvalidRecord, "gold_index must be a non-negative integer");
    }
    r.gold_index = gold.get<std::size_t>();
    if (j.contains("rationale") && !j.at("rationale").is_null()) {
      r.rationale = j.at("rationale").get<std::string>();
    }
    r.dataset = dataset_from_string(j.value("dataset", std::string("Custom")));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidRecord, e.what());
  }
  validate(r);
  return r;
}

Json to_json(const TrialResponse& trial) {
  Json j = {{"raw", trial.raw}, {"parse_valid", trial.parse_valid}};
  j["answer_index"] = trial.answer_index ? Json(*trial.answer_index) : Json(nullptr);
  j["reasoning"] = trial.reasoning ? Json(*trial.reasoning) : Json(nullptr);
  return j;
}

TrialResponse trial_from_json(const Json& j) {
  TrialResponse t;
  t.raw = j.at("raw").get<std::string>();
  t.parse_valid = j.at("parse_valid").get<bool>();
  if (!j.at("answer_index").is_null()) t.answer_index = j.at("answer_index").get<std::size_t>();
  if (!j.at("reasoning").is_null()) t.reasoning = j.at("reasoning").get<std::string>();
  return t;
}

Json to_json(const Hint& hint) { return Json{{"hint", hint.items()}}; }

Hint hint_from_json(const Json& j) { return parse_hint(j.dump()); }

std::vector<QuestionRecord> load_dataset(const std::filesystem::path& path) {
  std::vector<QuestionRecord> records;
  std::set<std::string> ids;
  for (const auto& row : read_jsonl(path)) {
    auto record = question_from_json(row);
    if (!ids.insert(record.id).second) {
      throw Error(ErrorCode::InvalidRecord, "duplicate id '" + record.id + "' in " + path.string());
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<QuestionRecord>& records) {
  std::vector<Json> rows;
  rows.reserve(records.size());
  for (const auto& r : records) rows.push_back(to_json(r));
  atomic_write(path, to_jsonl(rows));
}

}  // namespace tth
