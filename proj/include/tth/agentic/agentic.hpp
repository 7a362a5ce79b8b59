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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tth/client/client.hpp"
#include "tth/core/json.hpp"
#include "tth/core/prompt.hpp"
#include "tth/core/types.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

enum class HintType { Repair, Reinforcement };
enum class EditorVerdict { Approve, Revise };
enum class OptimizationOutcome { Success, UnsuccessfulRepair, Discard };

std::string_view to_string(HintType t);
std::string_view to_string(EditorVerdict v);
std::string_view to_string(OptimizationOutcome o);

/// One propose -> edit -> verify round. A round whose proposer or editor
/// output fails to parse keeps `error` set and has no verifier answer.
struct HintTrialRound {
  std::size_t round = 0;
  std::string proposer_raw;
  std::optional<Hint> proposed;
  std::string editor_raw;
  std::optional<EditorVerdict> editor_verdict;
  std::optional<Hint> final_hint;
  std::optional<std::string> editor_feedback;
  std::optional<TrialResponse> verifier_answer;
  std::optional<std::string> error;
};

struct OptimizationResult {
  std::string question_id;
  ModelId model;
  HintType hint_type = HintType::Repair;
  std::vector<HintTrialRound> rounds;
  OptimizationOutcome outcome = OptimizationOutcome::Discard;
  std::optional<Hint> selected_hint;
  bool leak = false;  // selected_hint failed check_leakage

  /// Stable id used for pool provenance: "<question_id>|<model>".
  std::string id() const { return question_id + "|" + model.name(); }
};

struct AgentRoles {
  ModelId proposer;
  ModelId editor;
};

struct EditorDecision {
  EditorVerdict verdict = EditorVerdict::Approve;
  std::optional<Hint> revised;
  std::string feedback;
};

/// Parses {"verdict": ..., "hint": ..., "feedback": ...}. A revise verdict
/// must carry a valid hint (object form or bare list).
EditorDecision parse_editor(std::string_view raw);

/// Hint wire form, a blank line, then the unmodified base prompt.
std::string build_hint_prompt(const QuestionRecord& record, const Hint& hint,
                              const PromptSet& prompts = PromptSet::builtin());

HintType hint_type_for(BaseLabel label);

/// Runs up to r_max rounds and stops at the first round whose verifier
/// answer equals gold.
OptimizationResult optimize_hint(ChatClient& client, const QuestionRecord& record,
                                 const BaseProfile& base, HintType hint_type,
                                 const AgentRoles& roles, std::size_t r_max = 3,
                                 const PromptSet& prompts = PromptSet::builtin());

Json to_json(const OptimizationResult& result);
OptimizationResult optimization_result_from_json(const Json& j);

}  // namespace tth
