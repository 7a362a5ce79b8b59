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

#include "tth/pipeline/strategy.hpp"

#include "tth/agentic/agentic.hpp"
#include "tth/client/mcq.hpp"
#include "tth/core/hint.hpp"
#include "tth/error.hpp"

namespace tth {

namespace {

ChatRequest target_request(const QuestionRecord& record, const ModelId& model, std::string prompt,
                           const std::string& behavior) {
  ChatRequest req;
  req.model = model;
  if (!record.image_ref.empty()) req.image_ref = record.image_ref;
  req.prompt = std::move(prompt);
  req.seed_tag = behavior;
  req.tag = {record.id, behavior};
  return req;
}

}  // namespace

void validate(const StrategySpec& spec) {
  if (spec.kind == Strategy::ExternalJudge && !spec.judge_model) {
    throw Error(ErrorCode::InvalidConfig, "external_judge needs a judge model");
  }
  if (spec.kind == Strategy::TTH && !spec.hint_source) {
    throw Error(ErrorCode::InvalidConfig, "tth needs a hint source");
  }
}

std::size_t call_budget(Strategy s) {
  switch (s) {
    case Strategy::SelfRefine: return 2;
    case Strategy::ExternalJudge: return 3;
    default: return 1;
  }
}

std::string strategy_prompt(Strategy s, const QuestionRecord& record, const StrategyInputs& in,
                            const PromptSet& prompts) {
  switch (s) {
    case Strategy::Base: return base_prompt(record, prompts);
    case Strategy::CoT: return cot_prompt(record, prompts);
    case Strategy::TTH:
      return in.hint ? build_hint_prompt(record, *in.hint, prompts) : base_prompt(record, prompts);
    case Strategy::CategoricalHint:
      if (!in.annotation) return cot_prompt(record, prompts);
      return serialize(categorical_hint(in.annotation->mode)) + "\n\n" + cot_prompt(record, prompts);
    case Strategy::UniversalTaxonomyHint: return universal_taxonomy_hint() + "\n\n" + base_prompt(record, prompts);
    case Strategy::SelfRefine:
    case Strategy::ExternalJudge: break;
  }
  throw Error(ErrorCode::PreconditionViolation, "multi-call strategies have no single prompt");
}

StrategyRun run_strategy(ChatClient& client, const QuestionRecord& record, const ModelId& model,
                         const StrategySpec& spec, const StrategyInputs& in, const PromptSet& prompts) {
  validate(spec);
  if (!in.base || in.base->trials.empty()) {
    throw Error(ErrorCode::MissingBaseProfile, "no base profile for '" + record.id + "' on '" + model.name() + "'");
  }
  StrategyRun run;
  auto call = [&](ChatRequest req) {
    run.requests.push_back(req);
    return client.complete(req);
  };
  const std::size_t n = record.options.size();
  const std::string behavior(to_string(spec.kind));

  std::string final_raw;
  switch (spec.kind) {
    case Strategy::Base:
      // Identical to base trial 1, so a warm cache answers it.
      final_raw = call(base_trial_request(record, model, 1, prompts));
      break;
    case Strategy::TTH:
      // Without a hint the strategy degenerates to the base call.
      final_raw = in.hint ? call(target_request(record, model, strategy_prompt(spec.kind, record, in, prompts), behavior))
                          : call(base_trial_request(record, model, 1, prompts));
      break;
    case Strategy::CategoricalHint:
      // Unannotated (base-correct) questions fall back to the plain CoT call.
      final_raw = in.annotation
                      ? call(target_request(record, model, strategy_prompt(spec.kind, record, in, prompts), behavior))
                      : call(target_request(record, model, cot_prompt(record, prompts), "cot"));
      break;
    case Strategy::CoT:
    case Strategy::UniversalTaxonomyHint:
      final_raw = call(target_request(record, model, strategy_prompt(spec.kind, record, in, prompts), behavior));
      break;
    case Strategy::SelfRefine: {
      const std::string first = call(base_trial_request(record, model, 1, prompts));
      const std::string prompt = prompts.render(
          "self_refine", {{"question", record.question}, {"options", format_options(record)}, {"previous_response", first}});
      final_raw = call(target_request(record, model, prompt, behavior + ":revise"));
      break;
    }
    case Strategy::ExternalJudge: {
      const std::string first = call(base_trial_request(record, model, 1, prompts));
      ChatRequest judge = target_request(
          record, *spec.judge_model,
          prompts.render("judge",
                         {{"question", record.question}, {"options", format_options(record)}, {"target_response", first}}),
          behavior + ":critique");
      const std::string critique = call(judge);
      const std::string prompt = prompts.render("judge_revise", {{"question", record.question},
                                                                 {"options", format_options(record)},
                                                                 {"previous_response", first},
                                                                 {"critique", critique}});
      final_raw = call(target_request(record, model, prompt, behavior + ":revise"));
      break;
    }
  }

  run.final_answer = parse_mcq(final_raw, n);
  run.row.question_id = record.id;
  run.row.model = model;
  run.row.strategy = spec.kind;
  run.row.base_correct = in.base->first_trial_correct(record.gold_index);
  run.row.final_correct = run.final_answer.is_correct(record.gold_index);
  return run;
}

}  // namespace tth
