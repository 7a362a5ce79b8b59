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
#include <string>
#include <string_view>

#include "tth/core/types.hpp"

namespace tth {

/// Named prompt templates with {{placeholder}} slots. The built-in set is
/// compiled from prompts/v1; a directory of *.txt files can replace it.
class PromptSet {
 public:
  static const PromptSet& builtin();
  static PromptSet load(const std::filesystem::path& dir);

  const std::string& get(std::string_view name) const;
  const std::string& version() const { return version_; }

  /// Substitutes every {{key}}; throws InvalidConfig if a slot is unfilled.
  std::string render(std::string_view name, const std::map<std::string, std::string>& values) const;

 private:
  std::map<std::string, std::string, std::less<>> templates_;
  std::string version_;
};

std::string render_template(std::string_view text, const std::map<std::string, std::string>& values);

/// "A. first\nB. second..."
std::string format_options(const QuestionRecord& record);

/// Unhinted multiple-choice prompt; every strategy builds on it.
std::string base_prompt(const QuestionRecord& record, const PromptSet& prompts = PromptSet::builtin());

inline constexpr std::string_view kCotSuffix = "Think step-by-step. Then output ONLY the JSON object";

std::string cot_prompt(const QuestionRecord& record, const PromptSet& prompts = PromptSet::builtin());

}  // namespace tth
