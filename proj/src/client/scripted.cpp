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

#include "tth/client/scripted.hpp"

#include "tth/core/types.hpp"
#include "tth/error.hpp"

namespace tth {

std::string render_answer(std::size_t answer_index, const std::string& reasoning) {
  Json j = Json::object();
  j["answer"] = option_letter(answer_index) + ".";
  j["reasoning"] = reasoning;
  return j.dump();
}

ScriptedEntry scripted_entry_from_json(const Json& j) {
  ScriptedEntry e;
  e.model = j.at("model").get<std::string>();
  e.question_id = j.value("question_id", std::string("*"));
  e.behavior = j.value("behavior", std::string("*"));
  if (j.contains("answer_index") && !j["answer_index"].is_null()) {
    e.answer_index = j["answer_index"].get<std::size_t>();
  }
  if (j.contains("reasoning") && !j["reasoning"].is_null()) {
    e.reasoning = j["reasoning"].get<std::string>();
  }
  if (j.contains("raw") && !j["raw"].is_null()) e.raw = j["raw"].get<std::string>();
  if (e.answer_index.has_value() == e.raw.has_value()) {
    throw Error(ErrorCode::InvalidConfig,
                "scripted entry needs exactly one of answer_index / raw (model " + e.model + ")");
  }
  return e;
}

Json to_json(const ScriptedEntry& e) {
  Json j = {{"model", e.model}, {"question_id", e.question_id}, {"behavior", e.behavior}};
  if (e.answer_index) j["answer_index"] = *e.answer_index;
  if (e.reasoning) j["reasoning"] = *e.reasoning;
  if (e.raw) j["raw"] = *e.raw;
  return j;
}

std::vector<ScriptedEntry> load_script(const std::filesystem::path& path) {
  std::vector<ScriptedEntry> entries;
  for (const auto& row : read_jsonl(path)) entries.push_back(scripted_entry_from_json(row));
  return entries;
}

ScriptedClient::ScriptedClient(std::vector<ScriptedEntry> entries) {
  for (auto& e : entries) {
    models_.insert(e.model);
    Key key{e.model, e.question_id, e.behavior};
    if (!table_.emplace(key, std::move(e)).second) {
      throw Error(ErrorCode::InvalidConfig, "duplicate scripted entry for " + std::get<0>(key) +
                                                " / " + std::get<1>(key) + " / " + std::get<2>(key));
    }
  }
}

std::set<std::string> ScriptedClient::models() const { return models_; }

const ScriptedEntry* ScriptedClient::find(const std::string& model,
                                          const std::string& question_id,
                                          const std::string& behavior) const {
  auto lookup = [&](const std::string& q, const std::string& b) -> const ScriptedEntry* {
    auto it = table_.find(Key{model, q, b});
    return it == table_.end() ? nullptr : &it->second;
  };
  std::string key = behavior;
  while (true) {
    if (auto* e = lookup(question_id, key)) return e;
    if (auto* e = lookup("*", key)) return e;
    auto colon = key.rfind(':');
    if (colon == std::string::npos) break;
    key.resize(colon);
  }
  if (auto* e = lookup(question_id, "*")) return e;
  return lookup("*", "*");
}

std::string ScriptedClient::complete(const ChatRequest& request) {
  const auto& model = request.model.name();
  if (!models_.contains(model)) {
    throw Error(ErrorCode::Unconfigured, "no scripted behavior for model '" + model + "'");
  }
  const ScriptedEntry* e = find(model, request.tag.question_id, request.tag.behavior);
  if (e == nullptr) {
    throw Error(ErrorCode::ScriptMiss, model + " has no entry for (" + request.tag.question_id +
                                           ", " + request.tag.behavior + ")");
  }
  if (e->raw) return *e->raw;
  return render_answer(*e->answer_index, e->reasoning.value_or(""));
}

}  // namespace tth
