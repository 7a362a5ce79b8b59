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

#include "tth/sampler/sampler.hpp"

#include <algorithm>

#include "tth/client/mcq.hpp"
#include "tth/core/dataset.hpp"
#include "tth/error.hpp"

namespace tth {

std::string_view to_string(BaseLabel label) {
  switch (label) {
    case BaseLabel::BaseCorrect: return "base_correct";
    case BaseLabel::BaseIncorrect: return "base_incorrect";
    case BaseLabel::Mixed: return "mixed";
  }
  return "mixed";
}

BaseLabel base_label_from_string(std::string_view s) {
  for (auto l : {BaseLabel::BaseCorrect, BaseLabel::BaseIncorrect, BaseLabel::Mixed}) {
    if (to_string(l) == s) return l;
  }
  throw Error(ErrorCode::MalformedWire, "unknown base label '" + std::string(s) + "'");
}

bool BaseProfile::first_trial_correct(std::size_t gold_index) const {
  return !trials.empty() && trials.front().is_correct(gold_index);
}

BaseLabel classify_trials(std::span<const TrialResponse> trials, std::size_t gold_index) {
  if (trials.empty()) return BaseLabel::Mixed;
  bool all_valid = std::all_of(trials.begin(), trials.end(),
                               [](const TrialResponse& t) { return t.parse_valid; });
  if (!all_valid) return BaseLabel::Mixed;
  auto correct = std::count_if(trials.begin(), trials.end(),
                               [&](const TrialResponse& t) { return t.is_correct(gold_index); });
  if (correct == static_cast<std::ptrdiff_t>(trials.size())) return BaseLabel::BaseCorrect;
  if (correct == 0) return BaseLabel::BaseIncorrect;
  return BaseLabel::Mixed;
}

std::string base_trial_seed(std::size_t trial) { return "trial-" + std::to_string(trial); }

ChatRequest base_trial_request(const QuestionRecord& record, const ModelId& model, std::size_t trial,
                               const PromptSet& prompts) {
  ChatRequest req;
  req.model = model;
  req.image_ref = record.image_ref;
  req.prompt = base_prompt(record, prompts);
  req.temperature = 0.0;
  req.top_p = 1.0;
  req.seed_tag = base_trial_seed(trial);
  req.tag = {record.id, "base:" + base_trial_seed(trial)};
  return req;
}

BaseProfile sample_base(ChatClient& client, const QuestionRecord& record, const ModelId& model,
                        std::size_t trials, const PromptSet& prompts) {
  BaseProfile profile;
  profile.question_id = record.id;
  profile.model = model;
  for (std::size_t t = 1; t <= trials; ++t) {
    auto raw = client.complete(base_trial_request(record, model, t, prompts));
    profile.trials.push_back(parse_mcq(raw, record.options.size()));
  }
  profile.label = classify_trials(profile.trials, record.gold_index);
  return profile;
}

std::set<std::string> incorrect_set(std::span<const BaseProfile> profiles, const ModelId& model,
                                    IncorrectRule rule) {
  std::set<std::string> ids;
  for (const auto& p : profiles) {
    if (p.model != model || p.label != BaseLabel::BaseIncorrect) continue;
    if (rule == IncorrectRule::AllWrongSameAnswer) {
      const auto first = p.trials.front().answer_index;
      bool same = std::all_of(p.trials.begin(), p.trials.end(),
                              [&](const TrialResponse& t) { return t.answer_index == first; });
      if (!same) continue;
    }
    ids.insert(p.question_id);
  }
  return ids;
}

Json to_json(const BaseProfile& profile) {
  Json trials = Json::array();
  for (const auto& t : profile.trials) trials.push_back(to_json(t));
  return Json{{"question_id", profile.question_id},
              {"model", profile.model.name()},
              {"trials", trials},
              {"label", std::string(to_string(profile.label))}};
}

BaseProfile base_profile_from_json(const Json& j) {
  BaseProfile p;
  p.question_id = j.at("question_id").get<std::string>();
  p.model = ModelId(j.at("model").get<std::string>());
  for (const auto& t : j.at("trials")) p.trials.push_back(trial_from_json(t));
  p.label = base_label_from_string(j.at("label").get<std::string>());
  return p;
}

}  // namespace tth
