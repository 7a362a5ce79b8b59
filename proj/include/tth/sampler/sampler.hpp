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

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tth/client/client.hpp"
#include "tth/core/json.hpp"
#include "tth/core/prompt.hpp"
#include "tth/core/types.hpp"

namespace tth {

enum class BaseLabel { BaseCorrect, BaseIncorrect, Mixed };

std::string_view to_string(BaseLabel label);
BaseLabel base_label_from_string(std::string_view s);

/// Unhinted behavior of one target on one question.
struct BaseProfile {
  std::string question_id;
  ModelId model;
  std::vector<TrialResponse> trials;
  BaseLabel label = BaseLabel::Mixed;

  /// Correctness of the first trial; strategies use it as the base answer.
  bool first_trial_correct(std::size_t gold_index) const;
};

inline constexpr std::size_t kBaseTrials = 3;

/// BaseCorrect iff every trial parses to gold, BaseIncorrect iff every trial
/// parses to a non-gold option, Mixed otherwise.
BaseLabel classify_trials(std::span<const TrialResponse> trials, std::size_t gold_index);

/// Seed tag / behavior key of base trial k (1-based): "trial-k" / "base:trial-k".
std::string base_trial_seed(std::size_t trial);
ChatRequest base_trial_request(const QuestionRecord& record, const ModelId& model, std::size_t trial,
                               const PromptSet& prompts = PromptSet::builtin());

/// Three requests at temperature 0, top_p 1, distinct seed tags.
BaseProfile sample_base(ChatClient& client, const QuestionRecord& record, const ModelId& model,
                        std::size_t trials = kBaseTrials,
                        const PromptSet& prompts = PromptSet::builtin());

enum class IncorrectRule {
  AllWrongSameAnswer,  // every trial valid, wrong and identical
  AllWrongAnyAnswer,   // label == BaseIncorrect
};

std::set<std::string> incorrect_set(std::span<const BaseProfile> profiles, const ModelId& model,
                                    IncorrectRule rule);

Json to_json(const BaseProfile& profile);
BaseProfile base_profile_from_json(const Json& j);

}  // namespace tth
