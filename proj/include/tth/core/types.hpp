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

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tth {

enum class Dataset { AOKVQA, VCR, Visual7W, RealWorldQA, Custom };

std::string_view to_string(Dataset d);
Dataset dataset_from_string(std::string_view s);

/// Natural-language model identifier, used verbatim in prompts.
class ModelId {
 public:
  ModelId() = default;
  explicit ModelId(std::string name);

  const std::string& name() const noexcept { return name_; }
  bool empty() const noexcept { return name_.empty(); }

  auto operator<=>(const ModelId&) const = default;

 private:
  std::string name_;
};

/// One multiple-choice question with its ground truth.
struct QuestionRecord {
  std::string id;
  std::string image_ref;
  std::string question;
  std::vector<std::string> options;
  std::size_t gold_index = 0;
  std::optional<std::string> rationale;
  Dataset dataset = Dataset::Custom;

  const std::string& gold_text() const { return options.at(gold_index); }
};

/// Throws Error(InvalidRecord) if the record violates its invariants.
void validate(const QuestionRecord& record);

/// A 1-3 item hint. Construct through make_hint or parse_hint.
class Hint {
 public:
  static constexpr std::size_t kMaxItems = 3;

  Hint() = default;

  const std::vector<std::string>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

  bool operator==(const Hint&) const = default;

 private:
  friend Hint make_hint(std::vector<std::string> items);
  std::vector<std::string> items_;
};

/// Validates item count and non-empty items; throws WrongShape/TooManyItems.
Hint make_hint(std::vector<std::string> items);

struct TrialResponse {
  std::string raw;
  std::optional<std::size_t> answer_index;
  std::optional<std::string> reasoning;
  bool parse_valid = false;

  bool is_correct(std::size_t gold_index) const {
    return parse_valid && answer_index == gold_index;
  }
};

enum class FailureMode {
  Recognition,
  AttributeBinding,
  Counting,
  SpatialRelation,
  Ocr,
  ChartTable,
  MathQuantitative,
  Knowledge,
  LogicNegation,
  Hallucination,
  InstructionFormat,
  Other,
};

inline constexpr std::size_t kFailureModeCount = 12;

inline constexpr std::array<FailureMode, kFailureModeCount> kAllFailureModes = {
    FailureMode::Recognition,      FailureMode::AttributeBinding,
    FailureMode::Counting,         FailureMode::SpatialRelation,
    FailureMode::Ocr,              FailureMode::ChartTable,
    FailureMode::MathQuantitative, FailureMode::Knowledge,
    FailureMode::LogicNegation,    FailureMode::Hallucination,
    FailureMode::InstructionFormat, FailureMode::Other,
};

std::string_view to_string(FailureMode mode);
std::optional<FailureMode> failure_mode_from_string(std::string_view s);
inline std::size_t index_of(FailureMode mode) { return static_cast<std::size_t>(mode); }

/// Letter label for an option index: 0 -> "A".
std::string option_letter(std::size_t index);

}  // namespace tth
