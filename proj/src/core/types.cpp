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

#include "tth/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "tth/error.hpp"

namespace tth {

namespace {

std::string trim(std::string_view s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

// Case-folded with internal whitespace runs collapsed.
std::string fold_option(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : trim(s)) {
    if (std::isspace(c)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

constexpr std::array<std::string_view, kFailureModeCount> kModeNames = {
    "recognition",   "attribute_binding", "counting",
    "spatial_relation", "ocr",            "chart_table",
    "math_quantitative", "knowledge",     "logic_negation",
    "hallucination", "instruction_format", "other",
};

}  // namespace

std::string_view to_string(Dataset d) {
  switch (d) {
    case Dataset::AOKVQA: return "AOKVQA";
    case Dataset::VCR: return "VCR";
    case Dataset::Visual7W: return "Visual7W";
    case Dataset::RealWorldQA: return "RealWorldQA";
    case Dataset::Custom: return "Custom";
  }
  return "Custom";
}

Dataset dataset_from_string(std::string_view s) {
  for (Dataset d : {Dataset::AOKVQA, Dataset::VCR, Dataset::Visual7W,
                    Dataset::RealWorldQA, Dataset::Custom}) {
    if (to_string(d) == s) return d;
  }
  throw Error(ErrorCode::InvalidRecord, "unknown dataset '" + std::string(s) + "'");
}

ModelId::ModelId(std::string name) : name_(std::move(name)) {
  if (trim(name_).empty()) throw Error(ErrorCode::InvalidConfig, "empty model identifier");
}

void validate(const QuestionRecord& record) {
  if (record.id.empty()) throw Error(ErrorCode::InvalidRecord, "record without id");
  if (record.options.size() < 2) {
    throw Error(ErrorCode::InvalidRecord, record.id + ": fewer than two options");
  }
  if (record.gold_index >= record.options.size()) {
    throw Error(ErrorCode::InvalidRecord, record.id + ": gold_index out of range");
  }
  std::set<std::string> seen;
  for (const auto& option : record.options) {
    if (!seen.insert(fold_option(option)).second) {
      throw Error(ErrorCode::InvalidRecord, record.id + ": duplicate option '" + option + "'");
    }
  }
}

Hint make_hint(std::vector<std::string> items) {
  if (items.empty()) throw Error(ErrorCode::WrongShape, "hint has no items");
  if (items.size() > Hint::kMaxItems) {
    throw Error(ErrorCode::TooManyItems,
                "hint has " + std::to_string(items.size()) + " items (max 3)");
  }
  for (const auto& item : items) {
    if (trim(item).empty()) throw Error(ErrorCode::WrongShape, "hint item is blank");
  }
  Hint hint;
  hint.items_ = std::move(items);
  return hint;
}

std::string_view to_string(FailureMode mode) { return kModeNames.at(index_of(mode)); }

std::optional<FailureMode> failure_mode_from_string(std::string_view s) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i) {
    if (kModeNames[i] == s) return kAllFailureModes[i];
  }
  return std::nullopt;
}

std::string option_letter(std::size_t index) {
  if (index >= 26) throw Error(ErrorCode::InvalidRecord, "more than 26 options");
  return std::string(1, static_cast<char>('A' + index));
}

}  // namespace tth
