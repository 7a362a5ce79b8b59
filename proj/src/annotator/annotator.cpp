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

#include "tth/annotator/annotator.hpp"

#include <array>
#include <cctype>
#include <utility>

#include "tth/error.hpp"

namespace tth {

namespace {

// Lowercase; runs of spaces, hyphens and slashes become '_'; surrounding
// quotes, backticks and periods are dropped.
std::string normalize_label(std::string_view text) {
  std::string out;
  bool gap = false;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      if (gap && !out.empty()) out += '_';
      gap = false;
      out += static_cast<char>(std::tolower(c));
    } else if (ch == '_' || ch == ' ' || ch == '-' || ch == '/' || ch == '\t' || ch == '\n' || ch == '\r') {
      gap = true;
    } else if (ch == '`' || ch == '"' || ch == '\'' || ch == '.' || ch == '*') {
      continue;
    } else {
      return {};
    }
  }
  return out;
}

constexpr std::array<std::pair<std::string_view, FailureMode>, 12> kAliases = {{
    {"optical_character_recognition", FailureMode::Ocr},
    {"chart", FailureMode::ChartTable},
    {"charts_and_tables", FailureMode::ChartTable},
    {"table", FailureMode::ChartTable},
    {"math", FailureMode::MathQuantitative},
    {"quantitative", FailureMode::MathQuantitative},
    {"logic", FailureMode::LogicNegation},
    {"negation", FailureMode::LogicNegation},
    {"spatial", FailureMode::SpatialRelation},
    {"attribute", FailureMode::AttributeBinding},
    {"format", FailureMode::InstructionFormat},
    {"world_knowledge", FailureMode::Knowledge},
}};

std::optional<FailureMode> match_label(std::string_view text) {
  const std::string key = normalize_label(text);
  if (key.empty()) return std::nullopt;
  if (auto mode = failure_mode_from_string(key)) return mode;
  for (const auto& [alias, mode] : kAliases) {
    if (alias == key) return mode;
  }
  return std::nullopt;
}

std::string answer_text(const QuestionRecord& record, const TrialResponse& trial) {
  if (!trial.parse_valid || !trial.answer_index || *trial.answer_index >= record.options.size()) {
    return "(no valid answer)";
  }
  return option_letter(*trial.answer_index) + ". " + record.options[*trial.answer_index];
}

std::string taxonomy_list() {
  std::string out;
  for (FailureMode m : kAllFailureModes) {
    if (!out.empty()) out += '\n';
    out += "- ";
    out += to_string(m);
  }
  return out;
}

}  // namespace

std::optional<FailureMode> parse_failure_mode(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (auto mode = match_label(text)) return mode;
  // "Label: counting"
  if (auto colon = text.rfind(':'); colon != std::string_view::npos) return match_label(trim(text.substr(colon + 1)));
  return std::nullopt;
}

ChatRequest annotation_request(const QuestionRecord& record, const BaseProfile& base, const ModelId& annotator,
                               const PromptSet& prompts) {
  if (base.trials.empty()) throw Error(ErrorCode::PreconditionViolation, "base profile has no trials");
  const auto& trial = base.trials.front();
  ChatRequest req;
  req.model = annotator;
  if (!record.image_ref.empty()) req.image_ref = record.image_ref;
  req.prompt = prompts.render("annotator", {{"question", record.question},
                                            {"options", format_options(record)},
                                            {"gold_answer", option_letter(record.gold_index) + ". " + record.gold_text()},
                                            {"rationale", record.rationale.value_or("(none)")},
                                            {"model_answer", answer_text(record, trial)},
                                            {"model_reasoning", trial.reasoning.value_or("(none)")},
                                            {"taxonomy", taxonomy_list()}});
  req.seed_tag = std::string(kAnnotateBehavior) + ":" + base.model.name();
  req.tag = {record.id, std::string(kAnnotateBehavior) + ":" + base.model.name()};
  return req;
}

FailureAnnotation annotate(ChatClient& client, const QuestionRecord& record, const BaseProfile& base,
                           const ModelId& annotator, const PromptSet& prompts) {
  if (base.label != BaseLabel::BaseIncorrect) {
    throw Error(ErrorCode::PreconditionViolation,
                "only base-incorrect responses are annotated; '" + record.id + "' is " + std::string(to_string(base.label)));
  }
  FailureAnnotation a;
  a.question_id = record.id;
  a.model = base.model;
  a.annotator_raw = client.complete(annotation_request(record, base, annotator, prompts));
  if (auto mode = parse_failure_mode(a.annotator_raw)) {
    a.mode = *mode;
  } else {
    a.mode = FailureMode::Other;
    a.unparsed = true;
  }
  return a;
}

Hint categorical_hint(FailureMode mode) { return make_hint({std::string(to_string(mode))}); }

const std::string& universal_taxonomy_hint() {
  static const std::string text = [] {
    constexpr std::array<std::pair<FailureMode, std::string_view>, kFailureModeCount> checks = {{
        {FailureMode::Recognition, "is the main object, scene or activity named correctly?"},
        {FailureMode::AttributeBinding, "does each color, material or state belong to the entity it is attached to?"},
        {FailureMode::Counting, "was every instance counted exactly once?"},
        {FailureMode::SpatialRelation, "are left/right, front/behind and above/below read from the image itself?"},
        {FailureMode::Ocr, "is any written text in the picture transcribed letter by letter?"},
        {FailureMode::ChartTable, "are axes, legends, rows and columns matched before reading a value?"},
        {FailureMode::MathQuantitative, "does the arithmetic or comparison hold once the numbers are read?"},
        {FailureMode::Knowledge, "is the outside fact being relied on actually true here?"},
        {FailureMode::LogicNegation, "does the answer respect words like not, except, both and only?"},
        {FailureMode::Hallucination, "is every detail used in the reasoning visible in the image?"},
        {FailureMode::InstructionFormat, "does the final output follow the requested answer format?"},
        {FailureMode::Other, "does anything else about the question look easy to misread?"},
    }};
    std::string out = "Failure-mode checklist:";
    for (const auto& [mode, line] : checks) {
      out += "\n- ";
      out += to_string(mode);
      out += ": ";
      out += line;
    }
    return out;
  }();
  return text;
}

Json to_json(const FailureAnnotation& a) {
  return Json{{"question_id", a.question_id},
              {"model", a.model.name()},
              {"mode", std::string(to_string(a.mode))},
              {"annotator_raw", a.annotator_raw},
              {"unparsed", a.unparsed}};
}

FailureAnnotation failure_annotation_from_json(const Json& j) {
  FailureAnnotation a;
  a.question_id = j.at("question_id").get<std::string>();
  a.model = ModelId(j.at("model").get<std::string>());
  const auto mode = j.at("mode").get<std::string>();
  auto parsed = failure_mode_from_string(mode);
  if (!parsed) throw Error(ErrorCode::InvalidRecord, "unknown failure mode '" + mode + "'");
  a.mode = *parsed;
  a.annotator_raw = j.value("annotator_raw", "");
  a.unparsed = j.value("unparsed", false);
  return a;
}

}  // namespace tth
