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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tth/client/client.hpp"
#include "tth/core/json.hpp"

namespace tth {

/// One fixture line. Either `answer_index` (rendered as a structured answer
/// object) or `raw` (returned verbatim) must be set. `question_id` and
/// `behavior` accept "*" as a declared default.
struct ScriptedEntry {
  std::string model;
  std::string question_id;
  std::string behavior;
  std::optional<std::size_t> answer_index;
  std::optional<std::string> reasoning;
  std::optional<std::string> raw;
};

ScriptedEntry scripted_entry_from_json(const Json& j);
Json to_json(const ScriptedEntry& entry);
std::vector<ScriptedEntry> load_script(const std::filesystem::path& path);

/// Deterministic mock. Behavior keys fall back by dropping ':'-separated
/// suffixes, so "hinted:round-2" falls back to "hinted".
class ScriptedClient final : public ChatClient {
 public:
  explicit ScriptedClient(std::vector<ScriptedEntry> entries);

  std::string complete(const ChatRequest& request) override;

  std::set<std::string> models() const;
  /// Looks up the entry a request would hit; nullptr on miss.
  const ScriptedEntry* find(const std::string& model, const std::string& question_id,
                            const std::string& behavior) const;

 private:
  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, ScriptedEntry> table_;
  std::set<std::string> models_;
};

/// {"answer": "C", "reasoning": "..."} as the scripted client renders it.
std::string render_answer(std::size_t answer_index, const std::string& reasoning);

}  // namespace tth
