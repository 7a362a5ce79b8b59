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

#include "tth/agentic/agentic.hpp"

#include <cctype>

#include "tth/client/mcq.hpp"
#include "tth/core/dataset.hpp"
#include "tth/core/hint.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

constexpr std::string_view kNone = "(none)";

std::string describe_answer(const QuestionRecord& record, const TrialResponse& trial) {
  if (!trial.parse_valid) return "(no valid answer)";
  return option_letter(*trial.answer_index) + ". " + record.options[*trial.answer_index];
}

std::string describe_reasoning(const TrialResponse& trial) {
  if (trial.reasoning && !trial.reasoning->empty()) return *trial.reasoning;
  return trial.raw.empty() ? std::string(kNone) : trial.raw;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Json optional_hint_json(const std::optional<Hint>& h) { return h ? to_json(*h) : Json(nullptr); }

std::optional<Hint> optional_hint(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return hint_from_json(j);
}

}  // namespace

std::string_view to_string(HintType t) {
  return t == HintType::Repair ? "repair" : "reinforcement";
}

std::string_view to_string(EditorVerdict v) {
  return v == EditorVerdict::Approve ? "approve" : "revise";
}

std::string_view to_string(OptimizationOutcome o) {
  switch (o) {
    case OptimizationOutcome::Success: return "success";
    case OptimizationOutcome::UnsuccessfulRepair: return "unsuccessful_repair";
    case OptimizationOutcome::Discard: return "discard";
  }
  return "discard";
}

EditorDecision parse_editor(std::string_view raw) {
  auto begin = raw.find('{');
  auto end = raw.rfind('}');
  if (begin == std::string_view::npos || end == std::string_view::npos || end < begin) {
    throw Error(ErrorCode::MalformedWire, "editor output has no JSON object");
  }
  Json doc = Json::parse(raw.substr(begin, end - begin + 1), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw Error(ErrorCode::MalformedWire, "editor output is not a JSON object");
  }
  if (!doc.contains("verdict") || !doc["verdict"].is_string()) {
    throw Error(ErrorCode::WrongShape, "editor output lacks a verdict");
  }
  EditorDecision decision;
  const auto verdict = lower(doc["verdict"].get<std::string>());
  if (verdict == "approve") {
    decision.verdict = EditorVerdict::Approve;
  } else if (verdict == "revise") {
    decision.verdict = EditorVerdict::Revise;
  } else {
    throw Error(ErrorCode::WrongShape, "unknown editor verdict '" + verdict + "'");
  }
  if (doc.contains("feedback") && doc["feedback"].is_string()) {
    decision.feedback = doc["feedback"].get<std::string>();
  }
  if (decision.verdict == EditorVerdict::Revise) {
    if (!doc.contains("hint")) throw Error(ErrorCode::WrongShape, "revise verdict without a hint");
    const Json& h = doc["hint"];
    decision.revised = parse_hint(h.is_array() ? Json{{"hint", h}}.dump() : h.dump());
  }
  return decision;
}

std::string build_hint_prompt(const QuestionRecord& record, const Hint& hint, const PromptSet& prompts) {
  return serialize(hint) + "\n\n" + base_prompt(record, prompts);
}

HintType hint_type_for(BaseLabel label) {
  if (label == BaseLabel::BaseIncorrect) return HintType::Repair;
  if (label == BaseLabel::BaseCorrect) return HintType::Reinforcement;
  throw Error(ErrorCode::PreconditionViolation, "mixed questions get no hint");
}

OptimizationResult optimize_hint(ChatClient& client, const QuestionRecord& record,
                                 const BaseProfile& base, HintType hint_type,
                                 const AgentRoles& roles, std::size_t r_max,
                                 const PromptSet& prompts) {
  if (r_max < 1) throw Error(ErrorCode::PreconditionViolation, "r_max must be >= 1");
  if (base.question_id != record.id) {
    throw Error(ErrorCode::PreconditionViolation, "base profile belongs to another question");
  }
  if (base.trials.empty() || hint_type_for(base.label) != hint_type) {
    throw Error(ErrorCode::PreconditionViolation,
                "hint type " + std::string(to_string(hint_type)) + " does not match base label " +
                    std::string(to_string(base.label)));
  }

  OptimizationResult result;
  result.question_id = record.id;
  result.model = base.model;
  result.hint_type = hint_type;

  const auto& first = base.trials.front();
  std::map<std::string, std::string> context = {
      {"target", base.model.name()},
      {"hint_type", std::string(to_string(hint_type))},
      {"question", record.question},
      {"options", format_options(record)},
      {"gold_answer", option_letter(record.gold_index) + ". " + record.gold_text()},
      {"rationale", record.rationale.value_or(std::string(kNone))},
      {"base_answer", describe_answer(record, first)},
      {"base_reasoning", describe_reasoning(first)},
  };
  std::string feedback(kNone);
  std::string previous_answer(kNone);
  std::string previous_reasoning(kNone);
  std::optional<Hint> last_approved;

  auto agent_request = [&](const ModelId& model, std::string prompt, std::string behavior) {
    ChatRequest req;
    req.model = model;
    req.image_ref = record.image_ref;
    req.prompt = std::move(prompt);
    req.seed_tag = behavior;
    req.tag = {record.id, std::move(behavior)};
    return req;
  };

  for (std::size_t t = 1; t <= r_max; ++t) {
    HintTrialRound round;
    round.round = t;
    const std::string round_tag = "round-" + std::to_string(t);

    auto propose_ctx = context;
    propose_ctx["feedback"] = feedback;
    propose_ctx["previous_answer"] = previous_answer;
    propose_ctx["previous_reasoning"] = previous_reasoning;
    round.proposer_raw = client.complete(agent_request(
        roles.proposer, prompts.render("proposer", propose_ctx),
        "propose:" + round_tag + ":" + base.model.name()));
    try {
      round.proposed = parse_hint(round.proposer_raw);
    } catch (const Error& e) {
      round.error = e.what();
      feedback = std::string("The previous hint could not be parsed: ") + e.what();
      result.rounds.push_back(std::move(round));
      continue;
    }

    auto edit_ctx = context;
    edit_ctx["hint"] = serialize(*round.proposed);
    round.editor_raw = client.complete(agent_request(
        roles.editor, prompts.render("editor", edit_ctx), "edit:" + round_tag + ":" + base.model.name()));
    EditorDecision decision;
    try {
      decision = parse_editor(round.editor_raw);
    } catch (const Error& e) {
      round.error = e.what();
      feedback = std::string("The editor output could not be parsed: ") + e.what();
      result.rounds.push_back(std::move(round));
      continue;
    }
    round.editor_verdict = decision.verdict;
    round.editor_feedback = decision.feedback;
    round.final_hint = decision.verdict == EditorVerdict::Revise ? decision.revised : round.proposed;
    feedback = decision.feedback.empty() ? std::string(kNone) : decision.feedback;
    last_approved = round.final_hint;

    ChatRequest verify;
    verify.model = base.model;
    verify.image_ref = record.image_ref;
    verify.prompt = build_hint_prompt(record, *round.final_hint, prompts);
    verify.seed_tag = "hinted:" + round_tag;
    verify.tag = {record.id, "hinted:" + round_tag};
    auto answer = parse_mcq(client.complete(verify), record.options.size());
    const bool correct = answer.is_correct(record.gold_index);
    previous_answer = describe_answer(record, answer);
    previous_reasoning = describe_reasoning(answer);
    round.verifier_answer = std::move(answer);
    result.rounds.push_back(std::move(round));

    if (correct) {
      result.outcome = OptimizationOutcome::Success;
      result.selected_hint = last_approved;
      break;
    }
  }

  if (result.outcome != OptimizationOutcome::Success) {
    if (hint_type == HintType::Repair && last_approved) {
      result.outcome = OptimizationOutcome::UnsuccessfulRepair;
      result.selected_hint = last_approved;
    } else {
      result.outcome = OptimizationOutcome::Discard;
    }
  }
  if (result.selected_hint) result.leak = check_leakage(*result.selected_hint, record).leak;
  return result;
}

Json to_json(const OptimizationResult& result) {
  Json rounds = Json::array();
  for (const auto& r : result.rounds) {
    Json jr = {{"round", r.round},
               {"proposer_raw", r.proposer_raw},
               {"proposed", optional_hint_json(r.proposed)},
               {"editor_raw", r.editor_raw},
               {"final_hint", optional_hint_json(r.final_hint)}};
    jr["editor_verdict"] = r.editor_verdict ? Json(std::string(to_string(*r.editor_verdict))) : Json(nullptr);
    jr["editor_feedback"] = r.editor_feedback ? Json(*r.editor_feedback) : Json(nullptr);
    jr["verifier_answer"] = r.verifier_answer ? to_json(*r.verifier_answer) : Json(nullptr);
    jr["error"] = r.error ? Json(*r.error) : Json(nullptr);
    rounds.push_back(std::move(jr));
  }
  return Json{{"id", result.id()},
              {"question_id", result.question_id},
              {"model", result.model.name()},
              {"hint_type", std::string(to_string(result.hint_type))},
              {"outcome", std::string(to_string(result.outcome))},
              {"selected_hint", optional_hint_json(result.selected_hint)},
              {"leak", result.leak},
              {"rounds", rounds}};
}

OptimizationResult optimization_result_from_json(const Json& j) {
  OptimizationResult r;
  r.question_id = j.at("question_id").get<std::string>();
  r.model = ModelId(j.at("model").get<std::string>());
  r.hint_type = j.at("hint_type").get<std::string>() == "repair" ? HintType::Repair : HintType::Reinforcement;
  const auto outcome = j.at("outcome").get<std::string>();
  if (outcome == "success") r.outcome = OptimizationOutcome::Success;
  else if (outcome == "unsuccessful_repair") r.outcome = OptimizationOutcome::UnsuccessfulRepair;
  else if (outcome == "discard") r.outcome = OptimizationOutcome::Discard;
  else throw Error(ErrorCode::MalformedWire, "unknown outcome '" + outcome + "'");
  r.selected_hint = optional_hint(j.at("selected_hint"));
  r.leak = j.value("leak", false);
  for (const auto& jr : j.at("rounds")) {
    HintTrialRound round;
    round.round = jr.at("round").get<std::size_t>();
    round.proposer_raw = jr.at("proposer_raw").get<std::string>();
    round.proposed = optional_hint(jr.at("proposed"));
    round.editor_raw = jr.at("editor_raw").get<std::string>();
    round.final_hint = optional_hint(jr.at("final_hint"));
    if (!jr.at("editor_verdict").is_null()) {
      round.editor_verdict = jr["editor_verdict"] == "approve" ? EditorVerdict::Approve : EditorVerdict::Revise;
    }
    if (!jr.at("editor_feedback").is_null()) round.editor_feedback = jr["editor_feedback"].get<std::string>();
    if (!jr.at("verifier_answer").is_null()) round.verifier_answer = trial_from_json(jr["verifier_answer"]);
    if (!jr.at("error").is_null()) round.error = jr["error"].get<std::string>();
    r.rounds.push_back(std::move(round));
  }
  return r;
}

}  // namespace tth
