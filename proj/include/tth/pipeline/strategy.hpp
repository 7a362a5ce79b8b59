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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tth/annotator/annotator.hpp"
#include "tth/client/client.hpp"
#include "tth/core/prompt.hpp"
#include "tth/core/types.hpp"
#include "tth/metrics/metrics.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

struct StrategySpec {
  Strategy kind = Strategy::Base;
  std::optional<ModelId> judge_model;               // ExternalJudge only
  std::optional<std::filesystem::path> hint_source;  // TTH and CategoricalHint
};

/// ExternalJudge needs judge_model; TTH needs hint_source. Throws InvalidConfig.
void validate(const StrategySpec& spec);

/// Number of model calls each strategy issues per question.
std::size_t call_budget(Strategy s);

/// Per-question inputs looked up from upstream artifacts. Pointers may be
/// null when the store has no entry.
struct StrategyInputs {
  const BaseProfile* base = nullptr;
  const Hint* hint = nullptr;
  const FailureAnnotation* annotation = nullptr;
};

struct StrategyRun {
  EvalOutcomeRow row;
  TrialResponse final_answer;
  /// Requests in issue order.
  std::vector<ChatRequest> requests;
};

/// Prompt a hint-bearing strategy sends; TTH's equals build_hint_prompt.
std::string strategy_prompt(Strategy s, const QuestionRecord& record, const StrategyInputs& in,
                            const PromptSet& prompts = PromptSet::builtin());

/// Runs the strategy's call sequence in order. base_correct comes from the
/// first base trial. Throws MissingBaseProfile without a base profile.
StrategyRun run_strategy(ChatClient& client, const QuestionRecord& record, const ModelId& model,
                         const StrategySpec& spec, const StrategyInputs& in,
                         const PromptSet& prompts = PromptSet::builtin());

}  // namespace tth
