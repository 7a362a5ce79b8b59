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
#include <vector>

#include "tth/core/json.hpp"
#include "tth/core/types.hpp"

namespace tth {

Json to_json(const QuestionRecord& record);
QuestionRecord question_from_json(const Json& j);

Json to_json(const TrialResponse& trial);
TrialResponse trial_from_json(const Json& j);

Json to_json(const Hint& hint);
Hint hint_from_json(const Json& j);

/// Loads and validates a dataset file; ids must be unique.
std::vector<QuestionRecord> load_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path,
                   const std::vector<QuestionRecord>& records);

}  // namespace tth
