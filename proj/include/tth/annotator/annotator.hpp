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

#include <optional>
#include <string>
#include <string_view>

#include "tth/client/client.hpp"
#include "tth/core/json.hpp"
#include "tth/core/prompt.hpp"
#include "tth/core/types.hpp"
#include "tth/sampler/sampler.hpp"

namespace tth {

struct FailureAnnotation {
  std::string question_id;
  ModelId model;
  FailureMode mode = FailureMode::Other;
  std::string annotator_raw;
  /// True when the annotator's output fell outside the vocabulary and the
  /// mode defaulted to Other.
  bool unparsed = false;
};

/// Maps an annotator response onto the 12-mode vocabulary. Accepts the
/// snake_case ids, their spaced/hyphenated spellings and a few aliases
/// ("ocr", "math", "negation", ...); absent for anything else.
std::optional<FailureMode> parse_failure_mode(std::string_view text);

/// Seed tag / behavior key of the annotation call.
inline constexpr std::string_view kAnnotateBehavior = "annotate";

ChatRequest annotation_request(const QuestionRecord& record, const BaseProfile& base, const ModelId& annotator,
                               const PromptSet& prompts = PromptSet::builtin());

/// One annotator call with the image, question, gold answer, rationale and
/// the target's first-trial answer and reasoning. Throws
/// PreconditionViolation unless base.label is BaseIncorrect.
FailureAnnotation annotate(ChatClient& client, const QuestionRecord& record, const BaseProfile& base,
                           const ModelId& annotator, const PromptSet& prompts = PromptSet::builtin());

/// Single-item hint holding the mode id, e.g. ["spatial_relation"].
Hint categorical_hint(FailureMode mode);

/// Fixed checklist of all 12 modes, one line each.
const std::string& universal_taxonomy_hint();

Json to_json(const FailureAnnotation& a);
FailureAnnotation failure_annotation_from_json(const Json& j);

}  // namespace tth
