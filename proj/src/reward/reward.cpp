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

#include "tth/reward/reward.hpp"

#include <map>

namespace tth {

void validate(const RewardConfig& cfg) {
  for (double v : {cfg.repair_score, cfg.noop_score, cfg.harm_score, cfg.unrepaired_score}) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, "reward scores must be finite");
  }
  if (!(cfg.harm_score < cfg.unrepaired_score && cfg.unrepaired_score < cfg.noop_score &&
        cfg.noop_score < cfg.repair_score)) {
    throw Error(ErrorCode::InvalidConfig, "reward scores must satisfy harm < unrepaired < noop < repair");
  }
}

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Repair: return "repair";
    case OutcomeKind::NoOp: return "noop";
    case OutcomeKind::Harm: return "harm";
    case OutcomeKind::Unrepaired: return "unrepaired";
  }
  return "unrepaired";
}

HintOutcome classify_outcome(bool base_correct, bool hinted_correct, const RewardConfig& cfg,
                             ModelId model) {
  HintOutcome out{std::move(model), base_correct, hinted_correct, OutcomeKind::Unrepaired, 0.0};
  if (base_correct) {
    out.outcome = hinted_correct ? OutcomeKind::NoOp : OutcomeKind::Harm;
    out.score = hinted_correct ? cfg.noop_score : cfg.harm_score;
  } else {
    out.outcome = hinted_correct ? OutcomeKind::Repair : OutcomeKind::Unrepaired;
    out.score = hinted_correct ? cfg.repair_score : cfg.unrepaired_score;
  }
  return out;
}

double average_reward(std::span<const HintOutcome> outcomes, std::span<const ModelId> targets) {
  if (targets.empty()) throw Error(ErrorCode::MissingTarget, "no targets configured");
  std::map<ModelId, double> by_target;
  for (const auto& o : outcomes) {
    if (!by_target.emplace(o.model, o.score).second) {
      throw Error(ErrorCode::MissingTarget, "duplicate outcome for " + o.model.name());
    }
  }
  double sum = 0.0;
  for (const auto& t : targets) {
    auto it = by_target.find(t);
    if (it == by_target.end()) throw Error(ErrorCode::MissingTarget, "no outcome for " + t.name());
    sum += it->second;
  }
  if (by_target.size() != targets.size()) {
    throw Error(ErrorCode::MissingTarget, "outcome for a model that is not a configured target");
  }
  return sum / static_cast<double>(targets.size());
}

}  // namespace tth
